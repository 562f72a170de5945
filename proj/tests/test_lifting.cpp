#include "ffcs/lifting.hpp"

#include <gtest/gtest.h>

#include "ffcs/field.hpp"
#include "ffcs/linalg.hpp"
#include "ffcs/rng.hpp"

namespace {

using ffcs::build_field;
using ffcs::FieldMatrix;
using ffcs::FieldPtr;
using ffcs::FieldVector;
using ffcs::LiftSpec;

FieldVector random_vector(const FieldPtr& f, std::size_t n, ffcs::Rng& rng) {
  FieldVector v(f, n);
  for (std::size_t i = 0; i < n; ++i) v[i] = rng.below(f->size());
  return v;
}

FieldMatrix random_matrix(const FieldPtr& f, std::size_t r, std::size_t c, ffcs::Rng& rng) {
  FieldMatrix m(f, r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m.at(i, j) = rng.below(f->size());
  return m;
}

TEST(Lifting, DegreeOneIsIdentity) {
  const FieldPtr f = build_field(2, 3);
  const LiftSpec lift = LiftSpec::make(f, 1);
  EXPECT_EQ(lift.lifted().get(), f.get());
  ffcs::Rng rng(1);
  const FieldVector v = random_vector(f, 6, rng);
  EXPECT_EQ(lift.lift_vector(v), v);
  EXPECT_EQ(lift.unlift_vector(v), v);
  const FieldMatrix m = random_matrix(f, 4, 3, rng);
  EXPECT_EQ(lift.lift_matrix(m), m);
}

TEST(Lifting, BinaryBlocksMatchTheF8Table) {
  // base F_2, s = 3, lifted field from x^3+x+1: block (1,1,0) -> 1 + a = a^3,
  // so the vector (1,1,0,0,0,1) lifts to (a^3, a^2).
  const FieldPtr f2 = build_field(2, 1);
  const LiftSpec lift =
      LiftSpec::make(f2, 3, std::vector<std::uint32_t>{1, 1, 0, 1});
  const auto& f8 = lift.lifted();
  FieldVector c(f2, 6);
  c[0] = 1;
  c[1] = 1;
  c[5] = 1;
  const FieldVector lifted = lift.lift_vector(c);
  ASSERT_EQ(lifted.size(), 2u);
  EXPECT_EQ(lifted[0], f8->exp_at(3));
  EXPECT_EQ(lifted[1], f8->exp_at(2));
  // single-column matrix form of the first block
  FieldMatrix m(f2, 3, 1);
  m.at(0, 0) = 1;
  m.at(1, 0) = 1;
  const FieldMatrix lifted_m = lift.lift_matrix(m);
  EXPECT_EQ(lifted_m.at(0, 0), f8->exp_at(3));
}

TEST(Lifting, ZeroMapsToZeroAndLinearity) {
  const FieldPtr f4 = build_field(2, 2);
  const LiftSpec lift = LiftSpec::make(f4, 2);
  EXPECT_TRUE(lift.lift_matrix(FieldMatrix(f4, 4, 3)).is_zero());
  ffcs::Rng rng(2);
  for (int iter = 0; iter < 50; ++iter) {
    const FieldMatrix a = random_matrix(f4, 4, 3, rng);
    const FieldMatrix b = random_matrix(f4, 4, 3, rng);
    EXPECT_EQ(lift.lift_matrix(a + b), lift.lift_matrix(a) + lift.lift_matrix(b));
  }
}

TEST(Lifting, RoundTripsBothWays) {
  ffcs::Rng rng(3);
  for (const auto& [p, k, s] : std::vector<std::tuple<int, int, int>>{
           {2, 1, 3}, {2, 2, 2}, {3, 1, 2}, {2, 8, 2}}) {
    const FieldPtr base = build_field(p, k);
    const LiftSpec lift = LiftSpec::make(base, s);
    for (int iter = 0; iter < 250; ++iter) {
      const FieldVector c = random_vector(base, 2 * s, rng);
      EXPECT_EQ(lift.unlift_vector(lift.lift_vector(c)), c);
    }
    for (int iter = 0; iter < 20; ++iter) {
      const FieldVector u = random_vector(lift.lifted(), 3, rng);
      EXPECT_EQ(lift.lift_vector(lift.unlift_vector(u)), u);
    }
  }
}

TEST(Lifting, EmbeddingIsAFieldHomomorphism) {
  ffcs::Rng rng(4);
  for (const auto& [p, k, s] : std::vector<std::tuple<int, int, int>>{
           {2, 2, 2}, {2, 8, 2}, {3, 2, 2}, {5, 1, 2}}) {
    const FieldPtr base = build_field(p, k);
    const LiftSpec lift = LiftSpec::make(base, s);
    const auto& big = lift.lifted();
    EXPECT_EQ(lift.embed(0), 0u);
    EXPECT_EQ(lift.embed(1), 1u);
    for (int iter = 0; iter < 500; ++iter) {
      const std::uint64_t a = rng.below(base->size()), b = rng.below(base->size());
      EXPECT_EQ(lift.embed(base->add(a, b)), big->add(lift.embed(a), lift.embed(b)));
      EXPECT_EQ(lift.embed(base->mul(a, b)), big->mul(lift.embed(a), lift.embed(b)));
      EXPECT_EQ(lift.unembed(lift.embed(a)), a);
    }
  }
}

TEST(Lifting, UnembedRejectsElementsOutsideTheBaseCopy) {
  const FieldPtr f2 = build_field(2, 1);
  const LiftSpec lift = LiftSpec::make(f2, 3);
  // alpha generates the whole F_8; it cannot lie in the embedded F_2
  EXPECT_THROW(lift.unembed(lift.lifted()->alpha()), ffcs::NotInBaseSpan);
}

TEST(Lifting, RowCountMustDivide) {
  const FieldPtr f2 = build_field(2, 1);
  const LiftSpec lift = LiftSpec::make(f2, 3);
  EXPECT_THROW(lift.lift_vector(FieldVector(f2, 7)), ffcs::RowCountNotDivisible);
  EXPECT_THROW(lift.lift_matrix(FieldMatrix(f2, 4, 2)), ffcs::RowCountNotDivisible);
}

// psi_s(A x) = phi_s(A) embed(x): the measurement identity that makes the
// lifted matrix act as a parity check for base-field signals.
TEST(Lifting, LiftIdentityOnRandomPairs) {
  ffcs::Rng rng(5);
  for (const auto& [p, k, s, n] : std::vector<std::tuple<int, int, int, int>>{
           {2, 1, 3, 20}, {2, 2, 2, 12}, {3, 1, 2, 9}}) {
    const FieldPtr base = build_field(p, k);
    const LiftSpec lift = LiftSpec::make(base, s);
    for (int iter = 0; iter < 200; ++iter) {
      const FieldMatrix a = random_matrix(base, 2 * s, n, rng);
      const FieldVector x = random_vector(base, n, rng);
      const FieldVector lhs = lift.lift_vector(a * x);
      const FieldVector rhs = lift.lift_matrix(a) * lift.embed_vector(x);
      EXPECT_EQ(lhs, rhs);
    }
  }
}

}  // namespace
