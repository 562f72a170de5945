#include "ffcs/sensing.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "ffcs/rng.hpp"

namespace {

using ffcs::FieldVector;
using ffcs::l0_oracle;
using ffcs::SensingScheme;
using ffcs::SparseSignal;

// Enumerates every signal of weight <= max_w over F_q^n (test-scale).
std::vector<SparseSignal> all_sparse_signals(std::uint64_t q, std::size_t n,
                                             std::size_t max_w) {
  std::vector<SparseSignal> out;
  out.push_back(SparseSignal{n, {}, {}});
  std::vector<std::vector<std::size_t>> supports;
  std::vector<std::size_t> cur;
  const std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start,
                                                                std::size_t left) {
    if (!cur.empty()) supports.push_back(cur);
    if (left == 0) return;
    for (std::size_t j = start; j < n; ++j) {
      cur.push_back(j);
      rec(j + 1, left - 1);
      cur.pop_back();
    }
  };
  rec(0, max_w);
  for (const auto& supp : supports) {
    std::vector<std::uint64_t> vals(supp.size(), 1);
    while (true) {
      out.push_back(SparseSignal{n, supp, vals});
      std::size_t pos = vals.size();
      bool done = true;
      while (pos-- > 0) {
        if (vals[pos] < q - 1) {
          ++vals[pos];
          for (std::size_t t = pos + 1; t < vals.size(); ++t) vals[t] = 1;
          done = false;
          break;
        }
      }
      if (done) break;
    }
  }
  return out;
}

TEST(SchemeBuild, ParametersFromTheStandardConfigurations) {
  const SensingScheme tiny = SensingScheme::build(2, 7, 1);
  EXPECT_EQ(tiny.s(), 3u);
  EXPECT_EQ(tiny.measurement_count(), 6u);
  const SensingScheme mid = SensingScheme::build(256, 1024, 4);
  EXPECT_EQ(mid.s(), 2u);
  EXPECT_EQ(mid.measurement_count(), 16u);
  const SensingScheme promo = SensingScheme::build(1024, 1000, 60);
  EXPECT_EQ(promo.s(), 1u);
  EXPECT_EQ(promo.measurement_count(), 120u);
}

TEST(SchemeBuild, LiftOfAEqualsTheParityCheck) {
  for (const SensingScheme& scheme :
       {SensingScheme::build(2, 7, 1), SensingScheme::build(4, 10, 2)}) {
    EXPECT_EQ(scheme.lift().lift_matrix(scheme.matrix()),
              scheme.code().parity_check_matrix());
  }
}

TEST(SchemeBuild, DeterministicAndValidated) {
  std::ostringstream a, b;
  SensingScheme::build(16, 20, 3).save(a);
  SensingScheme::build(16, 20, 3).save(b);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_THROW(SensingScheme::build(6, 10, 2), ffcs::NonPrimeCharacteristic);
  EXPECT_THROW(SensingScheme::build(2, 4, 2), ffcs::InvalidArgument);   // n <= 2b
  EXPECT_THROW(SensingScheme::build(2, 40, 3, 5), ffcs::DimensionTooLargeForField);
  // an explicit override must still leave room for n
  EXPECT_EQ(SensingScheme::build(2, 7, 1, 4).s(), 4u);
  EXPECT_THROW(SensingScheme::build(2, 7, 1, 2), ffcs::DimensionTooLargeForField);
}

TEST(Measure, LinearAndSparseAware) {
  const SensingScheme scheme = SensingScheme::build(16, 20, 3);
  const auto& f = *scheme.base_field();
  ffcs::Rng rng(5);
  EXPECT_TRUE(scheme.measure(SparseSignal{20, {}, {}}).is_zero());
  for (int iter = 0; iter < 100; ++iter) {
    const SparseSignal x1 = ffcs::random_sparse_signal(16, 20, 3, rng);
    const SparseSignal x2 = ffcs::random_sparse_signal(16, 20, 2, rng);
    const FieldVector sum = scheme.measure(x1) + scheme.measure(x2);
    const FieldVector x1d = x1.to_dense(scheme.base_field());
    FieldVector both(scheme.base_field(), 20);
    const FieldVector x2d = x2.to_dense(scheme.base_field());
    for (std::size_t j = 0; j < 20; ++j) both[j] = f.add(x1d[j], x2d[j]);
    EXPECT_EQ(sum, scheme.matrix() * both);
  }
  // single nonzero picks out a scaled column
  const SparseSignal unit{20, {7}, {5}};
  const FieldVector y = scheme.measure(unit);
  for (std::size_t i = 0; i < y.size(); ++i)
    EXPECT_EQ(y[i], f.mul(scheme.matrix().at(i, 7), 5));
  EXPECT_THROW(scheme.measure(SparseSignal{19, {}, {}}), ffcs::DimensionMismatch);
}

TEST(Recover, ExhaustiveAtTinyScaleAndZero) {
  const SensingScheme scheme = SensingScheme::build(2, 7, 1);
  EXPECT_EQ(scheme.recover(FieldVector(scheme.base_field(), 6)),
            (SparseSignal{7, {}, {}}));
  for (std::size_t j = 0; j < 7; ++j) {
    const SparseSignal x{7, {j}, {1}};
    EXPECT_EQ(scheme.recover(scheme.measure(x)), x);
  }
}

TEST(Recover, RandomizedAtExperimentScale) {
  ffcs::Rng rng(7);
  for (std::size_t b : {2u, 4u, 8u}) {
    const SensingScheme scheme = SensingScheme::build(256, 1024, b);
    for (int iter = 0; iter < 50; ++iter) {
      const SparseSignal x = ffcs::random_sparse_signal(256, 1024, b, rng);
      EXPECT_EQ(scheme.recover(scheme.measure(x)), x);
    }
  }
}

TEST(Recover, OverweightSignalsNeverReturnInconsistently) {
  ffcs::Rng rng(11);
  const SensingScheme scheme = SensingScheme::build(4, 9, 1);
  int raised = 0;
  for (int iter = 0; iter < 100; ++iter) {
    const SparseSignal x = ffcs::random_sparse_signal(4, 9, 2, rng);  // wt = b + 1
    const FieldVector y = scheme.measure(x);
    try {
      const SparseSignal got = scheme.recover(y);
      EXPECT_LE(got.weight(), scheme.b());
      EXPECT_TRUE(scheme.measure(got) == y);  // consistent alternative explanation
    } catch (const ffcs::RecoveryFailure&) {
      ++raised;
    }
  }
  EXPECT_GT(raised, 0);
}

TEST(L0Oracle, AgreesWithAlgebraicRecoveryExhaustively) {
  const SensingScheme scheme = SensingScheme::build(2, 7, 1);
  for (const SparseSignal& x : all_sparse_signals(2, 7, 1)) {
    const FieldVector y = scheme.measure(x);
    EXPECT_EQ(l0_oracle(scheme.matrix(), y, 1), x);
    EXPECT_EQ(scheme.recover(y), x);
  }
}

TEST(L0Oracle, SelfVerifyingOnArbitraryMatrices) {
  // random underdetermined matrix, not an RS construction
  const auto f = ffcs::build_field(2, 2);
  ffcs::Rng rng(13);
  for (int iter = 0; iter < 20; ++iter) {
    ffcs::FieldMatrix a(f, 3, 8);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 8; ++j) a.at(i, j) = rng.below(4);
    const SparseSignal x = ffcs::random_sparse_signal(4, 8, 2, rng);
    const FieldVector y = a * x.to_dense(f);
    const SparseSignal got = l0_oracle(a, y, 2);
    EXPECT_LE(got.weight(), x.weight());
    EXPECT_TRUE(a * got.to_dense(f) == y);
  }
  EXPECT_EQ(l0_oracle(ffcs::FieldMatrix(f, 3, 8), FieldVector(f, 3), 2),
            (SparseSignal{8, {}, {}}));
}

TEST(L0Oracle, GuardsAndFailures) {
  const auto f = ffcs::build_field(2, 8);
  ffcs::FieldMatrix a(f, 2, 200);
  FieldVector y(f, 2);
  y[0] = 1;
  EXPECT_THROW(l0_oracle(a, y, 3), ffcs::SearchSpaceTooLarge);
  // zero matrix cannot explain a nonzero measurement at any weight
  const auto f2 = ffcs::build_field(2, 1);
  ffcs::FieldMatrix z(f2, 2, 5);
  FieldVector y2(f2, 2);
  y2[0] = 1;
  EXPECT_THROW(l0_oracle(z, y2, 2), ffcs::NoSolutionWithinWeight);
}

TEST(SampleComplexity, WorkedValuesAndScaling) {
  const auto sc = ffcs::sample_complexity(256, 1024, 4);
  EXPECT_EQ(sc.m_finite, 16u);
  EXPECT_EQ(sc.storage_bits_finite, 128u);
  EXPECT_EQ(sc.storage_bits_real(16), 256u);
  // q >= n collapses the log factor: m = 2b
  EXPECT_EQ(ffcs::sample_complexity(16, 16, 3).m_finite, 6u);
  EXPECT_EQ(ffcs::sample_complexity(2048, 2048, 5).m_finite, 10u);
  // |S_q| = 1 when b = 0
  EXPECT_EQ(ffcs::sample_complexity(2, 2, 0).lower_bound_bits, 0.0);
}

TEST(SampleComplexity, LowerBoundMatchesDirectSummation) {
  // double-precision summation is exact at small scale
  const auto direct = [](std::uint64_t q, std::size_t n, std::size_t b) {
    double total = 0, binom = 1;
    for (std::size_t j = 0; j <= b; ++j) {
      if (j > 0) binom = binom * static_cast<double>(n - j + 1) / static_cast<double>(j);
      total += binom * std::pow(static_cast<double>(q - 1), static_cast<double>(j));
    }
    return std::log2(total);
  };
  for (const auto& [q, n, b] : std::vector<std::tuple<std::uint64_t, std::size_t, std::size_t>>{
           {2, 16, 3}, {4, 20, 4}, {256, 64, 2}, {256, 1024, 4}}) {
    EXPECT_NEAR(ffcs::sample_complexity(q, n, b).lower_bound_bits, direct(q, n, b), 1e-9);
  }
}

TEST(SchemeIo, ByteExactRoundTrip) {
  const SensingScheme scheme = SensingScheme::build(4, 10, 2);
  std::ostringstream first;
  scheme.save(first);
  std::istringstream in(first.str());
  const SensingScheme loaded = SensingScheme::load(in);
  std::ostringstream second;
  loaded.save(second);
  EXPECT_EQ(first.str(), second.str());
  EXPECT_EQ(loaded.matrix(), scheme.matrix());
  // the loaded scheme still works
  const SparseSignal x{10, {1, 6}, {3, 2}};
  EXPECT_EQ(loaded.recover(loaded.measure(x)), x);
}

TEST(SchemeIo, RejectsTamperedFiles) {
  const SensingScheme scheme = SensingScheme::build(2, 7, 1);
  std::ostringstream os;
  scheme.save(os);
  const std::string good = os.str();
  {
    std::istringstream bad("XXCS v1\n" + good.substr(8));
    EXPECT_THROW(SensingScheme::load(bad), ffcs::SchemeFormatError);
  }
  {
    // flip one matrix entry: the lift no longer matches the parity check
    std::string text = good;
    const auto pos = text.rfind("0 ");
    text[pos] = '1';
    std::istringstream bad(text);
    EXPECT_THROW(SensingScheme::load(bad), ffcs::SchemeFormatError);
  }
  {
    std::istringstream truncated(good.substr(0, good.size() / 2));
    EXPECT_THROW(SensingScheme::load(truncated), ffcs::SchemeFormatError);
  }
}

TEST(SignalIo, RoundTripsAndValidates) {
  const SparseSignal x{12, {0, 5, 11}, {1, 7, 2}};
  std::ostringstream os;
  ffcs::save_signal(x, os);
  std::istringstream in(os.str());
  EXPECT_EQ(ffcs::load_signal(in), x);
  std::istringstream zero("5\n\n");
  EXPECT_EQ(ffcs::load_signal(zero), (SparseSignal{5, {}, {}}));
  std::istringstream bad("5\n3:0\n");
  EXPECT_THROW(ffcs::load_signal(bad), ffcs::SchemeFormatError);
  std::istringstream unsorted("5\n3:1 2:1\n");
  EXPECT_THROW(ffcs::load_signal(unsorted), ffcs::SchemeFormatError);

  const auto f = ffcs::build_field(2, 2);
  FieldVector y(f, 3);
  y[1] = 2;
  std::ostringstream vs;
  ffcs::save_vector(y, vs);
  std::istringstream vin(vs.str());
  EXPECT_EQ(ffcs::load_vector(vin, f), y);
}

}  // namespace
