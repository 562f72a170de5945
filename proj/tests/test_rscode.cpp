#include "ffcs/rscode.hpp"

#include <gtest/gtest.h>

#include <utility>
#include <vector>

#include "ffcs/field.hpp"
#include "ffcs/linalg.hpp"
#include "ffcs/rng.hpp"

namespace {

using ffcs::build_field;
using ffcs::FieldMatrix;
using ffcs::FieldPtr;
using ffcs::FieldVector;
using ffcs::RsCode;

using SparseError = std::vector<std::pair<std::size_t, std::uint64_t>>;

// Independent syndrome oracle: S_i = sum_j e_j alpha^(i*j), i = 1..r.
FieldVector syndrome_oracle(const RsCode& code, const SparseError& e) {
  const auto& f = *code.field();
  FieldVector s(code.field(), code.parity_count());
  for (const auto& [j, v] : e)
    for (std::size_t i = 1; i <= code.parity_count(); ++i)
      s[i - 1] = f.add(s[i - 1], f.mul(v, f.pow(f.alpha(), static_cast<std::int64_t>(i * j))));
  return s;
}

SparseError random_error(const RsCode& code, std::size_t weight, ffcs::Rng& rng) {
  SparseError e;
  for (std::size_t j : rng.sample_distinct(code.length(), weight))
    e.emplace_back(j, 1 + rng.below(code.field()->order()));
  return e;
}

TEST(RsCode, ParityCheckRowsAreVandermonde) {
  const FieldPtr f8 = build_field(2, 3, std::vector<std::uint32_t>{1, 1, 0, 1});
  // r = 1: the single row alpha^j
  const RsCode one(f8, 7, 1);
  for (std::size_t j = 0; j < 7; ++j)
    EXPECT_EQ(one.parity_check_matrix().at(0, j), f8->exp_at(j));
  // r = 2: second row exponents 2j reduced mod 7
  const RsCode code(f8, 7, 2);
  const FieldMatrix& h = code.parity_check_matrix();
  for (std::size_t j = 0; j < 7; ++j) {
    EXPECT_EQ(h.at(0, j), f8->exp_at(j));
    EXPECT_EQ(h.at(1, j), f8->exp_at((2 * j) % 7));
  }
  EXPECT_EQ(code.min_distance(), 3u);
  EXPECT_EQ(code.correction_radius(), 1u);
}

TEST(RsCode, LengthMustFitTheField) {
  const FieldPtr f8 = build_field(2, 3);
  EXPECT_NO_THROW(RsCode(f8, 7, 2));
  EXPECT_THROW(RsCode(f8, 8, 2), ffcs::DimensionTooLargeForField);
}

TEST(RsCode, ParityCheckHasFullRank) {
  ffcs::Rng rng(17);
  const FieldPtr f16 = build_field(2, 4);
  const FieldPtr f9 = build_field(3, 2);
  for (int iter = 0; iter < 50; ++iter) {
    const FieldPtr& f = iter % 2 ? f16 : f9;
    const std::size_t n = 2 + rng.below(f->order() - 1);
    const std::size_t r = rng.below(n + 1);
    const RsCode code(f, n, r);
    EXPECT_EQ(ffcs::rank(code.parity_check_matrix()), r);
  }
}

// MDS: every r x r minor of the parity check is nonsingular (exhaustive at
// small lengths).
TEST(RsCode, VandermondeMinorsAreNonsingular) {
  for (const auto& [f, n, r] : std::vector<std::tuple<FieldPtr, std::size_t, std::size_t>>{
           {build_field(2, 3), 7, 2},
           {build_field(2, 3), 7, 3},
           {build_field(3, 2), 8, 3}}) {
    const RsCode code(f, n, r);
    const FieldMatrix& h = code.parity_check_matrix();
    std::vector<std::size_t> cols(r);
    for (std::size_t i = 0; i < r; ++i) cols[i] = i;
    while (true) {
      FieldMatrix minor(f, r, r);
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) minor.at(i, j) = h.at(i, cols[j]);
      EXPECT_EQ(ffcs::rank(minor), r);
      std::size_t i = r;
      bool advanced = false;
      while (i-- > 0) {
        if (cols[i] < n - (r - i)) {
          ++cols[i];
          for (std::size_t t = i + 1; t < r; ++t) cols[t] = cols[t - 1] + 1;
          advanced = true;
          break;
        }
      }
      if (!advanced) break;
    }
  }
}

TEST(RsDecode, ZeroSyndromeGivesZeroError) {
  const RsCode code(build_field(2, 3), 7, 2);
  EXPECT_TRUE(code.syndrome_decode(FieldVector(code.field(), 2)).empty());
}

TEST(RsDecode, SingleErrorWorkedExample) {
  const FieldPtr f8 = build_field(2, 3, std::vector<std::uint32_t>{1, 1, 0, 1});
  const RsCode code(f8, 7, 2);
  // error value a^3 at position 4: syndromes (a^3 * a^4, a^3 * a^8)
  const SparseError e = {{4, f8->exp_at(3)}};
  const FieldVector s = syndrome_oracle(code, e);
  EXPECT_EQ(s[0], f8->exp_at(7 % 7));
  EXPECT_EQ(s[1], f8->exp_at(11 % 7));
  EXPECT_EQ(code.syndrome_decode(s), e);
}

TEST(RsDecode, ExhaustiveSingleErrorsOverF4) {
  const FieldPtr f4 = build_field(2, 2);
  const RsCode code(f4, 3, 2);
  std::vector<FieldVector> seen;
  for (std::size_t j = 0; j < 3; ++j) {
    for (std::uint64_t v = 1; v < 4; ++v) {
      const SparseError e = {{j, v}};
      const FieldVector s = syndrome_oracle(code, e);
      EXPECT_EQ(code.syndrome_decode(s), e);
      seen.push_back(s);
    }
  }
  // uniqueness at the radius: all weight <= 1 syndromes are distinct
  seen.push_back(FieldVector(f4, 2));
  for (std::size_t i = 0; i < seen.size(); ++i)
    for (std::size_t j = i + 1; j < seen.size(); ++j)
      EXPECT_FALSE(seen[i] == seen[j]);
}

TEST(RsDecode, RandomErrorsAcrossFieldsAndRadii) {
  ffcs::Rng rng(23);
  struct Cfg {
    FieldPtr f;
    std::size_t n, r;
  };
  const std::vector<Cfg> cfgs = {
      {build_field(2, 3), 7, 2},
      {build_field(2, 3), 7, 4},
      {build_field(2, 8), 255, 8},
      {build_field(7, 1), 6, 2},   // odd characteristic exercises the signs
      {build_field(3, 2), 8, 4},
  };
  for (const auto& cfg : cfgs) {
    const RsCode code(cfg.f, cfg.n, cfg.r);
    for (int iter = 0; iter < 200; ++iter) {
      const std::size_t w = rng.below(code.correction_radius() + 1);
      const SparseError e = random_error(code, w, rng);
      EXPECT_EQ(code.syndrome_decode(syndrome_oracle(code, e)), e);
    }
  }
}

TEST(RsDecode, BeyondRadiusNeverSilentlyWrong) {
  ffcs::Rng rng(29);
  const RsCode code(build_field(2, 4), 15, 4);
  int failures = 0;
  for (int iter = 0; iter < 200; ++iter) {
    const SparseError e = random_error(code, code.correction_radius() + 1, rng);
    const FieldVector s = syndrome_oracle(code, e);
    try {
      const SparseError got = code.syndrome_decode(s);
      // a returned vector must be a true bounded-weight preimage of s
      EXPECT_LE(got.size(), code.correction_radius());
      EXPECT_TRUE(syndrome_oracle(code, got) == s);
    } catch (const ffcs::DecodeFailure&) {
      ++failures;
    }
  }
  EXPECT_GT(failures, 0);
}

TEST(RsGenerator, OrthogonalToParityCheck) {
  ffcs::Rng rng(31);
  const FieldPtr f16 = build_field(2, 4);
  for (int iter = 0; iter < 50; ++iter) {
    const std::size_t n = 4 + rng.below(11);
    const std::size_t r = rng.below(n);
    const RsCode code(f16, n, r);
    const FieldMatrix product = code.generator_matrix() * code.parity_check_matrix().transpose();
    EXPECT_TRUE(product.is_zero());
  }
}

TEST(RsGenerator, ZeroParityIsIdentity) {
  const RsCode code(build_field(2, 3), 5, 0);
  EXPECT_EQ(code.generator_matrix(), FieldMatrix::identity(code.field(), 5));
  // decode is then the identity on received words
  FieldVector w(code.field(), 5);
  w[1] = 3;
  w[4] = 6;
  EXPECT_EQ(code.codeword_decode(w), w);
}

TEST(RsGenerator, EncodeCorruptDecodeRoundTrip) {
  ffcs::Rng rng(37);
  const std::vector<RsCode> codes = {RsCode(build_field(2, 4), 15, 4),
                                     RsCode(build_field(2, 8), 60, 6),
                                     RsCode(build_field(5, 1), 4, 2)};
  for (const RsCode& code : codes) {
    for (int iter = 0; iter < 200; ++iter) {
      FieldVector msg(code.field(), code.dimension());
      for (std::size_t i = 0; i < msg.size(); ++i) msg[i] = rng.below(code.field()->size());
      FieldVector word = code.encode(msg);
      for (std::size_t j : rng.sample_distinct(code.length(), code.correction_radius()))
        word[j] = rng.below(code.field()->size());
      EXPECT_EQ(code.codeword_decode(word), msg);
    }
  }
}

}  // namespace
