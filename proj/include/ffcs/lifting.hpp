#pragma once

#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "ffcs/errors.hpp"
#include "ffcs/field.hpp"
#include "ffcs/linalg.hpp"

namespace ffcs {

/// The change of viewpoint between F_q and its extension F_{q^s}.
///
/// Both fields live in one tower over the prime subfield: F_q = GF(p^k) and
/// F_{q^s} = GF(p^(k*s)), each with its own primitive element. The lift maps
/// group s consecutive base rows/entries into one extension entry against the
/// basis {1, alpha, ..., alpha^(s-1)}, where alpha is the primitive element
/// of the extension: block (c_0, ..., c_{s-1}) over F_q maps to
/// sum_t embed(c_t) * alpha^t. The basis is linearly independent over the
/// embedded F_q because alpha generates the whole extension, so the maps are
/// bijective; the inverse is a fixed F_p-linear solve precomputed here.
class LiftSpec {
 public:
  /// Builds the lift of `base` = GF(p^k) to GF(p^(k*s)). s = 1 degenerates to
  /// the identity (the lifted field is the base field object itself).
  static LiftSpec make(FieldPtr base, std::uint32_t s,
                       std::optional<std::vector<std::uint32_t>> lifted_poly = std::nullopt,
                       std::uint64_t table_limit = Field::kDefaultTableLimit) {
    if (!base) throw InvalidArgument("LiftSpec: null base field");
    if (s < 1) throw InvalidArgument("LiftSpec: s must be >= 1");
    FieldPtr lifted;
    if (s == 1) {
      if (lifted_poly && *lifted_poly != base->prim_poly())
        throw InvalidArgument("LiftSpec: s = 1 but a distinct lifted polynomial given");
      lifted = base;
    } else {
      lifted = Field::make(base->characteristic(), base->degree() * s,
                           std::move(lifted_poly), table_limit);
    }
    return LiftSpec(std::move(base), std::move(lifted), s);
  }

  /// Loader path: both fields already built; degrees must factor as k and k*s.
  static LiftSpec from_fields(FieldPtr base, FieldPtr lifted) {
    if (!base || !lifted) throw InvalidArgument("LiftSpec: null field");
    if (base->characteristic() != lifted->characteristic())
      throw FieldMismatch("LiftSpec: characteristics differ");
    if (lifted->degree() % base->degree() != 0)
      throw InvalidArgument("LiftSpec: lifted degree not a multiple of base degree");
    const std::uint32_t s = lifted->degree() / base->degree();
    if (s == 1) lifted = base;
    return LiftSpec(std::move(base), std::move(lifted), s);
  }

  const FieldPtr& base() const { return base_; }
  const FieldPtr& lifted() const { return lifted_; }
  std::uint32_t s() const { return s_; }
  std::uint64_t alpha() const { return lifted_->alpha(); }

  /// Subfield embedding F_q -> F_{q^s}.
  std::uint64_t embed(std::uint64_t base_value) const {
    if (base_value >= base_->size())
      throw InvalidArgument("embed: index out of range");
    return s_ == 1 ? base_value : embed_[base_value];
  }

  /// Inverse of embed; throws NotInBaseSpan if the element is not in the
  /// embedded copy of F_q (possible only on corrupted input).
  std::uint64_t unembed(std::uint64_t lifted_value) const {
    if (s_ == 1) {
      if (lifted_value >= base_->size())
        throw NotInBaseSpan("unembed: index out of range");
      return lifted_value;
    }
    const auto it = unembed_.find(lifted_value);
    if (it == unembed_.end())
      throw NotInBaseSpan("element is not in the embedded base field");
    return it->second;
  }

  FieldVector embed_vector(const FieldVector& x) const {
    detail::require_same_field(x.field(), base_);
    FieldVector out(lifted_, x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = embed(x[i]);
    return out;
  }

  FieldVector lift_vector(const FieldVector& c) const {
    detail::require_same_field(c.field(), base_);
    if (c.size() % s_ != 0)
      throw RowCountNotDivisible("vector length not divisible by s");
    if (s_ == 1) return c;
    const std::size_t m1 = c.size() / s_;
    FieldVector out(lifted_, m1);
    for (std::size_t k = 0; k < m1; ++k) {
      std::uint64_t acc = 0;
      for (std::uint32_t t = 0; t < s_; ++t) {
        const std::uint64_t e = embed_[c[k * s_ + t]];
        if (e) acc = lifted_->add(acc, lifted_->mul(e, lifted_->exp_at(t)));
      }
      out[k] = acc;
    }
    return out;
  }

  FieldMatrix lift_matrix(const FieldMatrix& c) const {
    detail::require_same_field(c.field(), base_);
    if (c.rows() % s_ != 0)
      throw RowCountNotDivisible("row count not divisible by s");
    if (s_ == 1) return c;
    const std::size_t m1 = c.rows() / s_;
    FieldMatrix out(lifted_, m1, c.cols());
    for (std::size_t k = 0; k < m1; ++k) {
      for (std::uint32_t t = 0; t < s_; ++t) {
        const std::uint64_t at = lifted_->exp_at(t);
        for (std::size_t l = 0; l < c.cols(); ++l) {
          const std::uint64_t e = embed_[c.at(k * s_ + t, l)];
          if (e) out.at(k, l) = lifted_->add(out.at(k, l), lifted_->mul(e, at));
        }
      }
    }
    return out;
  }

  FieldVector unlift_vector(const FieldVector& c) const {
    detail::require_same_field(c.field(), lifted_);
    if (s_ == 1) return c;
    FieldVector out(base_, c.size() * s_);
    std::vector<std::uint64_t> block(s_);
    for (std::size_t k = 0; k < c.size(); ++k) {
      unlift_entry(c[k], block);
      for (std::uint32_t t = 0; t < s_; ++t) out[k * s_ + t] = block[t];
    }
    return out;
  }

  FieldMatrix unlift_matrix(const FieldMatrix& c) const {
    detail::require_same_field(c.field(), lifted_);
    if (s_ == 1) return c;
    FieldMatrix out(base_, c.rows() * s_, c.cols());
    std::vector<std::uint64_t> block(s_);
    for (std::size_t k = 0; k < c.rows(); ++k) {
      for (std::size_t l = 0; l < c.cols(); ++l) {
        unlift_entry(c.at(k, l), block);
        for (std::uint32_t t = 0; t < s_; ++t) out.at(k * s_ + t, l) = block[t];
      }
    }
    return out;
  }

 private:
  LiftSpec(FieldPtr base, FieldPtr lifted, std::uint32_t s)
      : base_(std::move(base)), lifted_(std::move(lifted)), s_(s) {
    if (s_ == 1) return;
    const std::uint64_t q = base_->size();
    if (checked_pow(q, s_).value_or(0) != lifted_->size())
      throw InvalidArgument("LiftSpec: lifted field size is not q^s");
    build_embedding();
    build_unlift_solver();
  }

  // Embeds F_q by sending the base primitive element to the root of the base
  // polynomial with the smallest discrete log inside the lifted field (a
  // deterministic choice among the k Frobenius-conjugate embeddings).
  void build_embedding() {
    const Field& L = *lifted_;
    const std::uint32_t k = base_->degree();
    const std::uint64_t q = base_->size();
    std::uint64_t delta = 1;
    if (k > 1) {
      const std::uint64_t step = L.order() / (q - 1);
      const auto& g = base_->prim_poly();
      bool found = false;
      for (std::uint64_t j = 1; j < q - 1 && !found; ++j) {
        if (std::gcd(j, q - 1) != 1) continue;
        const std::uint64_t cand = L.exp_at(j * step);
        // Horner evaluation of g at cand; g has prime-subfield coefficients,
        // which embed as themselves.
        std::uint64_t acc = g[k];
        for (std::uint32_t i = k; i-- > 0;) acc = L.add(L.mul(acc, cand), g[i]);
        if (acc == 0) {
          delta = cand;
          found = true;
        }
      }
      if (!found)
        throw InvalidArgument("LiftSpec: base polynomial has no root in the lifted field");
    }
    embed_.assign(q, 0);
    std::vector<std::uint32_t> digits(k);
    for (std::uint64_t v = 0; v < q; ++v) {
      base_->to_digits(v, digits);
      std::uint64_t acc = 0;
      for (std::uint32_t i = k; i-- > 0;)
        acc = L.add(L.mul(acc, delta), digits[i]);
      embed_[v] = acc;
    }
    unembed_.reserve(q);
    for (std::uint64_t v = 0; v < q; ++v) unembed_.emplace(embed_[v], v);
    if (unembed_.size() != q)
      throw InvalidArgument("LiftSpec: embedding is not injective");
  }

  // Inverts the F_p-linear basis {embed(beta^i) * alpha^t} so unlift is a
  // D x D matrix-vector product per entry (D = k*s digits over F_p).
  void build_unlift_solver() {
    const Field& L = *lifted_;
    const std::uint32_t p = L.characteristic();
    const std::uint32_t k = base_->degree();
    const std::uint32_t dim = L.degree();
    // basis column (t*k + i) = digits of alpha^t * embed(beta^i)
    std::vector<std::uint32_t> m(static_cast<std::size_t>(dim) * 2 * dim, 0);
    auto at = [&](std::uint32_t r, std::uint32_t c) -> std::uint32_t& {
      return m[static_cast<std::size_t>(r) * 2 * dim + c];
    };
    std::vector<std::uint32_t> digits(dim);
    for (std::uint32_t t = 0; t < s_; ++t) {
      for (std::uint32_t i = 0; i < k; ++i) {
        const std::uint64_t beta_i = k == 1 ? 1 : embed_[base_->exp_at(i)];
        const std::uint64_t elem = L.mul(L.exp_at(t), i == 0 ? 1 : beta_i);
        L.to_digits(elem, digits);
        for (std::uint32_t r = 0; r < dim; ++r) at(r, t * k + i) = digits[r];
      }
    }
    for (std::uint32_t r = 0; r < dim; ++r) at(r, dim + r) = 1;  // augment identity
    // Gauss-Jordan mod p
    std::uint32_t row = 0;
    for (std::uint32_t col = 0; col < dim; ++col) {
      std::uint32_t pr = row;
      while (pr < dim && at(pr, col) == 0) ++pr;
      if (pr == dim)
        throw InvalidArgument("LiftSpec: lifting basis is linearly dependent");
      if (pr != row)
        for (std::uint32_t c = 0; c < 2 * dim; ++c) std::swap(at(pr, c), at(row, c));
      const std::uint64_t piv_inv = mod_inverse(at(row, col), p);
      for (std::uint32_t c = 0; c < 2 * dim; ++c)
        at(row, c) = static_cast<std::uint32_t>(at(row, c) * piv_inv % p);
      for (std::uint32_t r = 0; r < dim; ++r) {
        if (r == row) continue;
        const std::uint64_t factor = at(r, col);
        if (factor == 0) continue;
        for (std::uint32_t c = 0; c < 2 * dim; ++c)
          at(r, c) = static_cast<std::uint32_t>(
              (at(r, c) + (p - factor * at(row, c) % p)) % p);
      }
      ++row;
    }
    inv_basis_.assign(static_cast<std::size_t>(dim) * dim, 0);
    for (std::uint32_t r = 0; r < dim; ++r)
      for (std::uint32_t c = 0; c < dim; ++c)
        inv_basis_[static_cast<std::size_t>(r) * dim + c] = at(r, dim + c);
  }

  static std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t p) {
    // Fermat; p prime and small.
    std::uint64_t r = 1, b = a % p, e = p - 2;
    while (e) {
      if (e & 1) r = r * b % p;
      b = b * b % p;
      e >>= 1;
    }
    return r;
  }

  void unlift_entry(std::uint64_t value, std::vector<std::uint64_t>& out) const {
    const Field& L = *lifted_;
    if (value >= L.size())
      throw NotInBaseSpan("unlift: index out of range");
    const std::uint32_t p = L.characteristic();
    const std::uint32_t k = base_->degree();
    const std::uint32_t dim = L.degree();
    std::vector<std::uint32_t> digits(dim), coeff(dim, 0);
    L.to_digits(value, digits);
    for (std::uint32_t r = 0; r < dim; ++r) {
      std::uint64_t acc = 0;
      for (std::uint32_t c = 0; c < dim; ++c)
        acc += static_cast<std::uint64_t>(inv_basis_[static_cast<std::size_t>(r) * dim + c]) *
               digits[c];
      coeff[r] = static_cast<std::uint32_t>(acc % p);
    }
    for (std::uint32_t t = 0; t < s_; ++t) {
      std::span<const std::uint32_t> block(coeff.data() + static_cast<std::size_t>(t) * k, k);
      out[t] = base_->from_digits(block);
    }
  }

  FieldPtr base_;
  FieldPtr lifted_;
  std::uint32_t s_;
  std::vector<std::uint64_t> embed_;
  std::unordered_map<std::uint64_t, std::uint64_t> unembed_;
  std::vector<std::uint32_t> inv_basis_;
};

}  // namespace ffcs
