// Compiled with FFCS_COUNT_FIELD_OPS: asserts the decoder's O(n*r) field
// operation contract with a x4 slack factor.

#include <gtest/gtest.h>

#include "ffcs/field.hpp"
#include "ffcs/rng.hpp"
#include "ffcs/rscode.hpp"

namespace {

using ffcs::build_field;
using ffcs::FieldVector;
using ffcs::RsCode;

TEST(RsDecodeComplexity, SyndromeDecodeStaysWithinLinearBudget) {
  ffcs::Rng rng(41);
  struct Cfg {
    std::uint32_t p, k;
    std::size_t n, r;
  };
  for (const Cfg& cfg : {Cfg{2, 8, 255, 8}, Cfg{2, 8, 255, 16}, Cfg{2, 4, 15, 4}}) {
    const RsCode code(build_field(cfg.p, cfg.k), cfg.n, cfg.r);
    for (int iter = 0; iter < 20; ++iter) {
      std::vector<std::pair<std::size_t, std::uint64_t>> e;
      for (std::size_t j : rng.sample_distinct(cfg.n, cfg.r / 2))
        e.emplace_back(j, 1 + rng.below(code.field()->order()));
      const FieldVector s = code.syndromes_of_sparse(e);

      ffcs::reset_field_op_count();
      const auto got = code.syndrome_decode(s);
      const std::uint64_t ops = ffcs::field_op_count();
      EXPECT_EQ(got, e);
      EXPECT_LE(ops, 4u * cfg.n * cfg.r)
          << "n=" << cfg.n << " r=" << cfg.r << " ops=" << ops;
    }
  }
}

TEST(RsDecodeComplexity, CounterActuallyCounts) {
  const auto f = build_field(2, 4);
  ffcs::reset_field_op_count();
  (void)f->mul(3, 5);
  (void)f->add(3, 5);
  EXPECT_EQ(ffcs::field_op_count(), 2u);
}

}  // namespace
