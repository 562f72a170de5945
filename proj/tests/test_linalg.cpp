#include "ffcs/linalg.hpp"

#include <gtest/gtest.h>

#include "ffcs/field.hpp"
#include "ffcs/rng.hpp"

namespace {

using ffcs::build_field;
using ffcs::FieldMatrix;
using ffcs::FieldPtr;
using ffcs::FieldVector;

FieldMatrix random_matrix(const FieldPtr& f, std::size_t r, std::size_t c, ffcs::Rng& rng) {
  FieldMatrix m(f, r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m.at(i, j) = rng.below(f->size());
  return m;
}

TEST(Linalg, RankOfStructuredMatrices) {
  const FieldPtr f = build_field(2, 4);
  EXPECT_EQ(ffcs::rank(FieldMatrix::identity(f, 5)), 5u);
  EXPECT_EQ(ffcs::rank(FieldMatrix(f, 3, 7)), 0u);
  // duplicated row drops the rank
  FieldMatrix m(f, 3, 3);
  ffcs::Rng rng(7);
  m = random_matrix(f, 3, 3, rng);
  for (std::size_t j = 0; j < 3; ++j) m.at(2, j) = m.at(0, j);
  EXPECT_LE(ffcs::rank(m), 2u);
}

TEST(Linalg, RrefReproducesRowSpace) {
  const FieldPtr f = build_field(3, 2);
  ffcs::Rng rng(11);
  for (int iter = 0; iter < 25; ++iter) {
    const FieldMatrix m = random_matrix(f, 4, 6, rng);
    const auto e = ffcs::reduced_row_echelon(m);
    ASSERT_EQ(e.pivot_cols.size(), ffcs::rank(m));
    // every pivot column is the corresponding unit vector
    for (std::size_t i = 0; i < e.pivot_cols.size(); ++i) {
      for (std::size_t r = 0; r < e.rref.rows(); ++r)
        EXPECT_EQ(e.rref.at(r, e.pivot_cols[i]), r == i ? 1u : 0u);
    }
  }
}

TEST(Linalg, MultiplicationAssociativity) {
  const FieldPtr f = build_field(2, 8);
  ffcs::Rng rng(3);
  const FieldMatrix a = random_matrix(f, 3, 4, rng);
  const FieldMatrix b = random_matrix(f, 4, 5, rng);
  const FieldMatrix c = random_matrix(f, 5, 2, rng);
  EXPECT_EQ((a * b) * c, a * (b * c));
  FieldVector x(f, 2);
  x[0] = rng.below(f->size());
  x[1] = rng.below(f->size());
  EXPECT_EQ((a * b) * (c * x), a * (b * (c * x)));
}

TEST(Linalg, ShapeAndFieldChecks) {
  const FieldPtr f = build_field(2, 3);
  const FieldPtr g = build_field(2, 3);
  const FieldMatrix a(f, 2, 3);
  const FieldMatrix b(g, 3, 2);
  EXPECT_THROW(a * b, ffcs::FieldMismatch);
  EXPECT_THROW(a * FieldMatrix(f, 2, 2), ffcs::DimensionMismatch);
  EXPECT_THROW(a * FieldVector(f, 2), ffcs::DimensionMismatch);
  EXPECT_THROW(FieldVector(f, 2) + FieldVector(f, 3), ffcs::DimensionMismatch);
}

TEST(Linalg, TransposeInvolution) {
  const FieldPtr f = build_field(5, 1);
  ffcs::Rng rng(5);
  const FieldMatrix a = random_matrix(f, 3, 5, rng);
  EXPECT_EQ(a.transpose().transpose(), a);
}

}  // namespace
