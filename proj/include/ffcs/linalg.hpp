#pragma once

#include <cstdint>
#include <vector>

#include "ffcs/errors.hpp"
#include "ffcs/field.hpp"

namespace ffcs {

namespace detail {
inline void require_same_field(const FieldPtr& a, const FieldPtr& b) {
  if (a.get() != b.get())
    throw FieldMismatch("objects over distinct fields cannot mix");
}
}  // namespace detail

/// Dense vector of canonical element indices over one field.
class FieldVector {
 public:
  FieldVector() = default;
  FieldVector(FieldPtr f, std::size_t n) : f_(std::move(f)), v_(n, 0) {}
  FieldVector(FieldPtr f, std::vector<std::uint64_t> v)
      : f_(std::move(f)), v_(std::move(v)) {}

  const FieldPtr& field() const { return f_; }
  std::size_t size() const { return v_.size(); }
  std::uint64_t operator[](std::size_t i) const { return v_[i]; }
  std::uint64_t& operator[](std::size_t i) { return v_[i]; }
  const std::vector<std::uint64_t>& data() const { return v_; }

  bool is_zero() const {
    for (std::uint64_t x : v_)
      if (x) return false;
    return true;
  }

  friend FieldVector operator+(const FieldVector& a, const FieldVector& b) {
    detail::require_same_field(a.f_, b.f_);
    if (a.size() != b.size()) throw DimensionMismatch("vector sizes differ");
    FieldVector r(a.f_, a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r.v_[i] = a.f_->add(a.v_[i], b.v_[i]);
    return r;
  }
  friend FieldVector operator-(const FieldVector& a, const FieldVector& b) {
    detail::require_same_field(a.f_, b.f_);
    if (a.size() != b.size()) throw DimensionMismatch("vector sizes differ");
    FieldVector r(a.f_, a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r.v_[i] = a.f_->sub(a.v_[i], b.v_[i]);
    return r;
  }
  friend bool operator==(const FieldVector& a, const FieldVector& b) {
    return a.f_.get() == b.f_.get() && a.v_ == b.v_;
  }

 private:
  FieldPtr f_;
  std::vector<std::uint64_t> v_;
};

/// Dense row-major matrix of canonical element indices over one field.
class FieldMatrix {
 public:
  FieldMatrix() = default;
  FieldMatrix(FieldPtr f, std::size_t rows, std::size_t cols)
      : f_(std::move(f)), rows_(rows), cols_(cols), d_(rows * cols, 0) {}

  static FieldMatrix identity(FieldPtr f, std::size_t n) {
    FieldMatrix m(std::move(f), n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  const FieldPtr& field() const { return f_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::uint64_t at(std::size_t r, std::size_t c) const { return d_[r * cols_ + c]; }
  std::uint64_t& at(std::size_t r, std::size_t c) { return d_[r * cols_ + c]; }
  const std::vector<std::uint64_t>& data() const { return d_; }

  FieldVector row(std::size_t r) const {
    std::vector<std::uint64_t> v(d_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                                 d_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
    return FieldVector(f_, std::move(v));
  }

  FieldVector column(std::size_t c) const {
    FieldVector v(f_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = at(r, c);
    return v;
  }

  FieldMatrix transpose() const {
    FieldMatrix t(f_, cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
    return t;
  }

  friend FieldMatrix operator+(const FieldMatrix& a, const FieldMatrix& b) {
    detail::require_same_field(a.f_, b.f_);
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
      throw DimensionMismatch("matrix shapes differ");
    FieldMatrix r(a.f_, a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.d_.size(); ++i) r.d_[i] = a.f_->add(a.d_[i], b.d_[i]);
    return r;
  }

  friend FieldMatrix operator*(const FieldMatrix& a, const FieldMatrix& b) {
    detail::require_same_field(a.f_, b.f_);
    if (a.cols_ != b.rows_) throw DimensionMismatch("inner dimensions differ");
    FieldMatrix r(a.f_, a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const std::uint64_t aik = a.at(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          const std::uint64_t t = a.f_->mul(aik, b.at(k, j));
          if (t) r.at(i, j) = a.f_->add(r.at(i, j), t);
        }
      }
    }
    return r;
  }

  friend FieldVector operator*(const FieldMatrix& a, const FieldVector& x) {
    detail::require_same_field(a.f_, x.field());
    if (a.cols_ != x.size()) throw DimensionMismatch("matrix/vector sizes differ");
    FieldVector y(a.f_, a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      std::uint64_t acc = 0;
      for (std::size_t j = 0; j < a.cols_; ++j) {
        const std::uint64_t v = x[j];
        if (v) acc = a.f_->add(acc, a.f_->mul(a.at(i, j), v));
      }
      y[i] = acc;
    }
    return y;
  }

  friend bool operator==(const FieldMatrix& a, const FieldMatrix& b) {
    return a.f_.get() == b.f_.get() && a.rows_ == b.rows_ && a.cols_ == b.cols_ &&
           a.d_ == b.d_;
  }

  bool is_zero() const {
    for (std::uint64_t x : d_)
      if (x) return false;
    return true;
  }

 private:
  FieldPtr f_;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<std::uint64_t> d_;
};

struct RowEchelon {
  FieldMatrix rref;
  std::vector<std::size_t> pivot_cols;
};

/// Reduced row echelon form via Gaussian elimination with first-nonzero
/// pivoting (exact arithmetic, no stability concerns).
inline RowEchelon reduced_row_echelon(FieldMatrix m) {
  const Field& f = *m.field();
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<std::size_t> pivots;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t pr = rank;
    while (pr < rows && m.at(pr, col) == 0) ++pr;
    if (pr == rows) continue;
    if (pr != rank)
      for (std::size_t c = 0; c < cols; ++c) std::swap(m.at(pr, c), m.at(rank, c));
    const std::uint64_t piv_inv = f.inv(m.at(rank, col));
    for (std::size_t c = col; c < cols; ++c)
      m.at(rank, c) = f.mul(m.at(rank, c), piv_inv);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank) continue;
      const std::uint64_t factor = m.at(r, col);
      if (factor == 0) continue;
      for (std::size_t c = col; c < cols; ++c)
        m.at(r, c) = f.sub(m.at(r, c), f.mul(factor, m.at(rank, c)));
    }
    pivots.push_back(col);
    ++rank;
  }
  return {std::move(m), std::move(pivots)};
}

inline std::size_t rank(const FieldMatrix& m) {
  return reduced_row_echelon(m).pivot_cols.size();
}

}  // namespace ffcs
