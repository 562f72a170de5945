#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "ffcs/errors.hpp"
#include "ffcs/field.hpp"
#include "ffcs/linalg.hpp"

namespace ffcs {

/// Narrow-sense Reed-Solomon code over GF(q^s) with evaluation points
/// alpha^0 .. alpha^(n-1) and r parity symbols.
///
/// Parity-check rows use exponents starting at 1: H[i][j] = alpha^((i+1)*j),
/// so the syndromes of an error vector e are S_i = sum_j e_j alpha^(i*j),
/// i = 1..r, and the textbook Forney formula applies unchanged. The code is
/// MDS with minimum distance r + 1 and corrects floor(r/2) symbol errors by
/// bounded-distance decoding (Berlekamp-Massey, then Chien search, then
/// Forney magnitudes, then re-verification of the syndromes).
///
/// Immutable after construction; decoding is pure.
class RsCode {
 public:
  RsCode(FieldPtr field, std::size_t n, std::size_t r)
      : f_(std::move(field)), n_(n), r_(r) {
    if (!f_) throw InvalidArgument("RsCode: null field");
    if (n_ < 1) throw InvalidArgument("RsCode: length must be >= 1");
    if (r_ > n_) throw InvalidArgument("RsCode: parity count exceeds length");
    if (n_ > f_->order())
      throw DimensionTooLargeForField(
          "RsCode: length exceeds the number of distinct evaluation points");
    eval_.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) eval_[j] = f_->exp_at(j);
    h_ = FieldMatrix(f_, r_, n_);
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        h_.at(i, j) = f_->exp_at((i + 1) * j);
  }

  const FieldPtr& field() const { return f_; }
  std::size_t length() const { return n_; }
  std::size_t parity_count() const { return r_; }
  std::size_t dimension() const { return n_ - r_; }
  std::size_t min_distance() const { return r_ + 1; }
  std::size_t correction_radius() const { return r_ / 2; }
  const std::vector<std::uint64_t>& eval_points() const { return eval_; }

  const FieldMatrix& parity_check_matrix() const { return h_; }

  /// Systematic generator with G * H^T = 0; rows are the nullspace basis of
  /// H indexed by its free columns, identity at message_positions().
  const FieldMatrix& generator_matrix() const { return gen_data().g; }

  /// Codeword positions that carry the message symbols verbatim.
  const std::vector<std::size_t>& message_positions() const {
    return gen_data().msg_pos;
  }

  /// S_i = sum_j word_j alpha^(i*j) for i = 1..r.
  FieldVector syndromes_of(const FieldVector& word) const {
    detail::require_same_field(word.field(), f_);
    if (word.size() != n_) throw DimensionMismatch("word length != n");
    FieldVector s(f_, r_);
    for (std::size_t j = 0; j < n_; ++j) {
      const std::uint64_t v = word[j];
      if (v == 0) continue;
      for (std::size_t i = 0; i < r_; ++i)
        s[i] = f_->add(s[i], f_->mul(v, f_->exp_at((i + 1) * j)));
    }
    return s;
  }

  FieldVector syndromes_of_sparse(
      const std::vector<std::pair<std::size_t, std::uint64_t>>& e) const {
    FieldVector s(f_, r_);
    for (const auto& [j, v] : e)
      for (std::size_t i = 0; i < r_; ++i)
        s[i] = f_->add(s[i], f_->mul(v, f_->exp_at((i + 1) * j)));
    return s;
  }

  /// Finds the unique error vector of weight <= floor(r/2) with the given
  /// syndrome, as sorted (position, value) pairs. Throws DecodeFailure when
  /// no such vector exists or the input is inconsistent (locator degree and
  /// root count disagree, or the re-computed syndrome mismatches) -- the
  /// signature of weight beyond the correction radius or corrupted input.
  std::vector<std::pair<std::size_t, std::uint64_t>> syndrome_decode(
      const FieldVector& syndrome) const {
    detail::require_same_field(syndrome.field(), f_);
    if (syndrome.size() != r_) throw DimensionMismatch("syndrome length != r");
    if (syndrome.is_zero()) return {};
    const std::size_t radius = correction_radius();
    if (radius == 0)
      throw DecodeFailure("nonzero syndrome with zero correction radius");

    const Field& f = *f_;
    // Berlekamp-Massey: shortest LFSR generating S_1..S_r.
    std::vector<std::uint64_t> c{1}, b{1};
    std::size_t lfsr_len = 0, m = 1;
    std::uint64_t b_disc = 1;
    for (std::size_t i = 0; i < r_; ++i) {
      std::uint64_t d = syndrome[i];
      for (std::size_t j = 1; j <= lfsr_len && j < c.size(); ++j)
        d = f.add(d, f.mul(c[j], syndrome[i - j]));
      if (d == 0) {
        ++m;
        continue;
      }
      const std::uint64_t coef = f.div(d, b_disc);
      if (2 * lfsr_len <= i) {
        std::vector<std::uint64_t> t = c;
        if (c.size() < b.size() + m) c.resize(b.size() + m, 0);
        for (std::size_t j = 0; j < b.size(); ++j)
          c[j + m] = f.sub(c[j + m], f.mul(coef, b[j]));
        lfsr_len = i + 1 - lfsr_len;
        b = std::move(t);
        b_disc = d;
        m = 1;
      } else {
        if (c.size() < b.size() + m) c.resize(b.size() + m, 0);
        for (std::size_t j = 0; j < b.size(); ++j)
          c[j + m] = f.sub(c[j + m], f.mul(coef, b[j]));
        ++m;
      }
    }
    while (!c.empty() && c.back() == 0) c.pop_back();
    const std::size_t deg = c.size() - 1;
    if (lfsr_len > radius || deg != lfsr_len)
      throw DecodeFailure("error weight exceeds correction radius");

    // Chien search over the evaluation points.
    std::vector<std::size_t> roots;
    for (std::size_t j = 0; j < n_; ++j) {
      const std::uint64_t xinv = f.exp_at(f.order() - j % f.order());
      std::uint64_t acc = c[deg];
      for (std::size_t k = deg; k-- > 0;) acc = f.add(f.mul(acc, xinv), c[k]);
      if (acc == 0) roots.push_back(j);
    }
    if (roots.size() != deg)
      throw DecodeFailure("locator degree and root count disagree");

    // Forney: Omega = S(x) * Lambda(x) mod x^r, e_j = -Omega(Xj^-1) / Lambda'(Xj^-1).
    std::vector<std::uint64_t> omega(r_, 0);
    for (std::size_t i = 0; i < r_; ++i) {
      if (syndrome[i] == 0) continue;
      for (std::size_t j = 0; j < c.size() && i + j < r_; ++j)
        omega[i + j] = f.add(omega[i + j], f.mul(syndrome[i], c[j]));
    }
    std::vector<std::uint64_t> cprime(deg, 0);
    for (std::size_t j = 1; j <= deg; ++j) cprime[j - 1] = f.int_mul(j, c[j]);

    std::vector<std::pair<std::size_t, std::uint64_t>> e;
    e.reserve(deg);
    for (std::size_t j : roots) {
      const std::uint64_t xinv = f.exp_at(f.order() - j % f.order());
      std::uint64_t num = 0;
      for (std::size_t k = omega.size(); k-- > 0;)
        num = f.add(f.mul(num, xinv), omega[k]);
      std::uint64_t den = 0;
      for (std::size_t k = cprime.size(); k-- > 0;)
        den = f.add(f.mul(den, xinv), cprime[k]);
      if (den == 0) throw DecodeFailure("degenerate locator derivative");
      const std::uint64_t mag = f.neg(f.div(num, den));
      if (mag == 0) throw DecodeFailure("zero error magnitude at a locator root");
      e.emplace_back(j, mag);
    }

    // Bounded-distance decoders can mis-decode beyond the radius; re-checking
    // the syndrome turns that into an explicit failure.
    if (!(syndromes_of_sparse(e) == syndrome))
      throw DecodeFailure("decoded error does not reproduce the syndrome");
    return e;
  }

  /// message * G; message symbols appear verbatim at message_positions().
  FieldVector encode(const FieldVector& message) const {
    detail::require_same_field(message.field(), f_);
    if (message.size() != dimension())
      throw DimensionMismatch("message length != n - r");
    const FieldMatrix& g = generator_matrix();
    FieldVector c(f_, n_);
    for (std::size_t t = 0; t < message.size(); ++t) {
      const std::uint64_t v = message[t];
      if (v == 0) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        const std::uint64_t gij = g.at(t, j);
        if (gij) c[j] = f_->add(c[j], f_->mul(v, gij));
      }
    }
    return c;
  }

  /// Bounded-distance decode of a received word within Hamming distance
  /// floor(r/2) of a codeword; returns that codeword's message.
  FieldVector codeword_decode(const FieldVector& received) const {
    const FieldVector s = syndromes_of(received);
    const auto e = syndrome_decode(s);
    FieldVector c = received;
    for (const auto& [j, v] : e) c[j] = f_->sub(c[j], v);
    const auto& pos = message_positions();
    FieldVector msg(f_, dimension());
    for (std::size_t t = 0; t < pos.size(); ++t) msg[t] = c[pos[t]];
    return msg;
  }

 private:
  struct GenData {
    FieldMatrix g;
    std::vector<std::size_t> msg_pos;
  };

  const GenData& gen_data() const {
    std::call_once(*gen_once_, [this] {
      auto echelon = reduced_row_echelon(h_);
      const auto& pivots = echelon.pivot_cols;
      std::vector<std::size_t> free_cols;
      free_cols.reserve(n_ - pivots.size());
      std::size_t pi = 0;
      for (std::size_t c = 0; c < n_; ++c) {
        if (pi < pivots.size() && pivots[pi] == c) {
          ++pi;
        } else {
          free_cols.push_back(c);
        }
      }
      auto data = std::make_shared<GenData>();
      data->g = FieldMatrix(f_, free_cols.size(), n_);
      for (std::size_t t = 0; t < free_cols.size(); ++t) {
        const std::size_t fc = free_cols[t];
        data->g.at(t, fc) = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i)
          data->g.at(t, pivots[i]) = f_->neg(echelon.rref.at(i, fc));
      }
      data->msg_pos = std::move(free_cols);
      gen_ = std::move(data);
    });
    return *gen_;
  }

  FieldPtr f_;
  std::size_t n_, r_;
  std::vector<std::uint64_t> eval_;
  FieldMatrix h_;
  // generator is rarely needed by the sensing path; built on first use
  mutable std::shared_ptr<std::once_flag> gen_once_ = std::make_shared<std::once_flag>();
  mutable std::shared_ptr<const GenData> gen_;
};

}  // namespace ffcs
