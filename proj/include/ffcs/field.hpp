#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ffcs/errors.hpp"
#include "ffcs/numeric.hpp"

namespace ffcs {

namespace detail {
#ifdef FFCS_COUNT_FIELD_OPS
inline thread_local std::uint64_t field_op_tally = 0;
inline void tally_field_op() noexcept { ++field_op_tally; }
#else
inline void tally_field_op() noexcept {}
#endif
}  // namespace detail

/// Field operations performed since the last reset. Always 0 unless the
/// translation unit is compiled with FFCS_COUNT_FIELD_OPS (test builds only).
inline std::uint64_t field_op_count() noexcept {
#ifdef FFCS_COUNT_FIELD_OPS
  return detail::field_op_tally;
#else
  return 0;
#endif
}

inline void reset_field_op_count() noexcept {
#ifdef FFCS_COUNT_FIELD_OPS
  detail::field_op_tally = 0;
#endif
}

class Field;
using FieldPtr = std::shared_ptr<const Field>;

namespace detail {

// Coefficient arithmetic used by the primitivity test. One adapter runs on
// plain integers mod p (bootstrapping a field), the other on an existing
// field (counting primitive polynomials over extension bases).
struct PrimeCoeffOps {
  std::uint64_t p;
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return (a + b) % p; }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return (a + p - b) % p; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return (a * b) % p; }
};

template <class Ops>
std::vector<std::uint64_t> polmul_mod(const Ops& K,
                                      std::span<const std::uint64_t> a,
                                      std::span<const std::uint64_t> b,
                                      std::span<const std::uint64_t> f) {
  const std::size_t d = f.size() - 1;
  std::vector<std::uint64_t> t(2 * d - 1 > 0 ? 2 * d - 1 : 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      t[i + j] = K.add(t[i + j], K.mul(a[i], b[j]));
  }
  // reduce by the monic modulus
  for (std::size_t i = t.size(); i-- > d;) {
    const std::uint64_t c = t[i];
    if (c == 0) continue;
    for (std::size_t j = 0; j <= d; ++j)
      t[i - d + j] = K.sub(t[i - d + j], K.mul(c, f[j]));
  }
  t.resize(d);
  return t;
}

template <class Ops>
std::vector<std::uint64_t> pol_x_pow_mod(const Ops& K, std::uint64_t e,
                                         std::span<const std::uint64_t> f) {
  const std::size_t d = f.size() - 1;
  std::vector<std::uint64_t> x(d, 0);
  if (d == 1) {
    x[0] = K.sub(0, f[0]);  // x = -f0 mod (x + f0)
  } else {
    x[1] = 1;
  }
  std::vector<std::uint64_t> r(d, 0);
  r[0] = 1;
  int bit = 63;
  while (bit > 0 && !((e >> bit) & 1)) --bit;
  for (; bit >= 0; --bit) {
    r = polmul_mod(K, r, r, f);
    if ((e >> bit) & 1) r = polmul_mod(K, r, x, f);
  }
  return r;
}

// f is primitive over the coefficient field of size q iff the multiplicative
// order of x in Fq[x]/(f) is exactly q^deg(f) - 1. That single condition
// implies irreducibility as well, since the unit group of a quotient by a
// reducible monic polynomial is strictly smaller.
template <class Ops>
bool poly_is_primitive(const Ops& K, std::uint64_t q,
                       std::span<const std::uint64_t> f) {
  const std::size_t d = f.size() - 1;
  if (d == 0 || f[0] == 0) return false;
  const auto qs = checked_pow(q, static_cast<std::uint32_t>(d));
  if (!qs) return false;
  const std::uint64_t n = *qs - 1;
  std::vector<std::uint64_t> one(d, 0);
  one[0] = 1;
  if (pol_x_pow_mod(K, n, f) != one) return false;
  for (std::uint64_t r : prime_factors(n))
    if (pol_x_pow_mod(K, n / r, f) == one) return false;
  return true;
}

}  // namespace detail

/// A single element together with the field it lives in. Mixing elements of
/// distinct field objects is an error, never a coercion.
class FieldElement;

/// GF(p^d), built from a monic primitive polynomial of degree d over F_p.
///
/// Canonical element encoding: the index of an element is the integer whose
/// base-p digits are its polynomial coordinates over F_p, constant term least
/// significant. Index 0 is the additive zero, index 1 the multiplicative one.
/// Multiplication and inversion go through discrete exp/log tables over the
/// fixed primitive element alpha (the root of the defining polynomial);
/// addition is digit-wise mod p (XOR when p = 2).
///
/// Immutable after construction; all operations are pure reads, safe for
/// unrestricted concurrent use.
class Field {
  struct Private {};

 public:
  static constexpr std::uint64_t kDefaultTableLimit = std::uint64_t{1} << 24;

  /// Builds GF(p^degree). If no polynomial is supplied, searches candidates
  /// in increasing canonical-index order of the non-leading coefficient
  /// vector (base-p, constant term least significant) and takes the first
  /// primitive one; the order is fixed so builds are reproducible everywhere.
  static FieldPtr make(std::uint32_t p, std::uint32_t degree,
                       std::optional<std::vector<std::uint32_t>> prim_poly = std::nullopt,
                       std::uint64_t table_limit = kDefaultTableLimit) {
    if (!is_prime(p))
      throw NonPrimeCharacteristic("characteristic " + std::to_string(p) +
                                   " is not prime");
    if (degree < 1) throw InvalidArgument("field degree must be >= 1");
    const auto size = checked_pow(p, degree);
    if (!size || *size > table_limit)
      throw FieldTooLarge("field size p^" + std::to_string(degree) +
                          " exceeds table limit");
    std::vector<std::uint32_t> poly;
    if (prim_poly) {
      poly = std::move(*prim_poly);
      if (poly.size() != degree + 1 || poly.back() != 1)
        throw InvalidArgument("prim_poly must be monic of matching degree");
      for (std::uint32_t c : poly)
        if (c >= p) throw InvalidArgument("prim_poly coefficient out of range");
      if (!is_primitive_int(p, poly))
        throw SuppliedPolynomialNotPrimitive("supplied polynomial is not primitive");
    } else {
      poly = search_primitive(p, degree, *size);
    }
    return std::make_shared<const Field>(Private{}, p, degree, std::move(poly), *size);
  }

  Field(Private, std::uint32_t p, std::uint32_t degree,
        std::vector<std::uint32_t> poly, std::uint64_t size)
      : p_(p), degree_(degree), size_(size), poly_(std::move(poly)) {
    build_tables();
  }

  std::uint32_t characteristic() const { return p_; }
  std::uint32_t degree() const { return degree_; }
  std::uint64_t size() const { return size_; }
  std::uint64_t order() const { return size_ - 1; }
  const std::vector<std::uint32_t>& prim_poly() const { return poly_; }

  /// Index of the fixed primitive element alpha.
  std::uint64_t alpha() const { return exp_[1 % order()]; }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    detail::tally_field_op();
    if (p_ == 2) return a ^ b;
    std::uint64_t out = 0, place = 1;
    while (a | b) {
      std::uint64_t s = a % p_ + b % p_;
      if (s >= p_) s -= p_;
      out += s * place;
      place *= p_;
      a /= p_;
      b /= p_;
    }
    return out;
  }

  std::uint64_t neg(std::uint64_t a) const {
    detail::tally_field_op();
    if (p_ == 2) return a;
    std::uint64_t out = 0, place = 1;
    while (a) {
      std::uint64_t d = a % p_;
      out += (d == 0 ? 0 : p_ - d) * place;
      place *= p_;
      a /= p_;
    }
    return out;
  }

  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
    detail::tally_field_op();
    if (p_ == 2) return a ^ b;
    std::uint64_t out = 0, place = 1;
    while (a | b) {
      std::uint64_t d = a % p_ + p_ - b % p_;
      if (d >= p_) d -= p_;
      out += d * place;
      place *= p_;
      a /= p_;
      b /= p_;
    }
    return out;
  }

  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    detail::tally_field_op();
    if (a == 0 || b == 0) return 0;
    std::uint64_t i = log_[a] + log_[b];
    const std::uint64_t n = order();
    if (i >= n) i -= n;
    return exp_[i];
  }

  std::uint64_t inv(std::uint64_t a) const {
    detail::tally_field_op();
    if (a == 0) throw DivisionByZero("inverse of zero");
    return exp_[(order() - log_[a]) % order()];
  }

  std::uint64_t div(std::uint64_t a, std::uint64_t b) const {
    detail::tally_field_op();
    if (b == 0) throw DivisionByZero("division by zero");
    if (a == 0) return 0;
    const std::uint64_t n = order();
    return exp_[(log_[a] + n - log_[b]) % n];
  }

  std::uint64_t pow(std::uint64_t a, std::int64_t e) const {
    detail::tally_field_op();
    if (a == 0) {
      if (e > 0) return 0;
      if (e == 0) return 1;
      throw DivisionByZero("zero raised to a negative power");
    }
    const std::uint64_t n = order();
    std::int64_t r = e % static_cast<std::int64_t>(n);
    if (r < 0) r += static_cast<std::int64_t>(n);
    return exp_[(log_[a] * static_cast<std::uint64_t>(r)) % n];
  }

  /// Multiplies a by the integer scalar c (repeated addition); c mod p as a
  /// prime-subfield element times a.
  std::uint64_t int_mul(std::uint64_t c, std::uint64_t a) const {
    return mul(c % p_, a);
  }

  /// alpha^i by table lookup, any i >= 0.
  std::uint64_t exp_at(std::uint64_t i) const { return exp_[i % order()]; }

  /// Discrete log base alpha; undefined (throws) for zero.
  std::uint64_t log_at(std::uint64_t a) const {
    if (a == 0) throw DomainError("log of the zero element");
    return log_[a];
  }

  std::uint32_t digit(std::uint64_t v, std::uint32_t i) const {
    for (std::uint32_t t = 0; t < i; ++t) v /= p_;
    return static_cast<std::uint32_t>(v % p_);
  }

  void to_digits(std::uint64_t v, std::span<std::uint32_t> out) const {
    for (auto& d : out) {
      d = static_cast<std::uint32_t>(v % p_);
      v /= p_;
    }
  }

  std::uint64_t from_digits(std::span<const std::uint32_t> in) const {
    std::uint64_t v = 0;
    for (std::size_t i = in.size(); i-- > 0;) v = v * p_ + in[i];
    return v;
  }

  FieldElement element(std::uint64_t v) const;

 private:
  static bool is_primitive_int(std::uint32_t p, const std::vector<std::uint32_t>& poly) {
    std::vector<std::uint64_t> f(poly.begin(), poly.end());
    return detail::poly_is_primitive(detail::PrimeCoeffOps{p}, p, f);
  }

  static std::vector<std::uint32_t> search_primitive(std::uint32_t p,
                                                     std::uint32_t degree,
                                                     std::uint64_t size) {
    std::vector<std::uint32_t> poly(degree + 1, 0);
    poly[degree] = 1;
    for (std::uint64_t v = 0; v < size; ++v) {
      std::uint64_t x = v;
      for (std::uint32_t i = 0; i < degree; ++i) {
        poly[i] = static_cast<std::uint32_t>(x % p);
        x /= p;
      }
      if (poly[0] == 0) continue;
      if (is_primitive_int(p, poly)) return poly;
    }
    throw SuppliedPolynomialNotPrimitive("no primitive polynomial found");  // unreachable
  }

  void build_tables() {
    const std::uint64_t n = order();
    exp_.assign(n, 0);
    log_.assign(size_, size_);  // size_ marks "undefined"
    std::vector<std::uint32_t> cur(degree_, 0);
    cur[0] = 1;
    std::uint64_t idx = 1;
    for (std::uint64_t i = 0; i < n; ++i) {
      exp_[i] = idx;
      log_[idx] = i;
      // cur *= x mod poly
      const std::uint32_t carry = cur[degree_ - 1];
      for (std::uint32_t j = degree_ - 1; j > 0; --j) cur[j] = cur[j - 1];
      cur[0] = 0;
      if (carry) {
        for (std::uint32_t j = 0; j < degree_; ++j) {
          const std::uint64_t s =
              cur[j] + (p_ - static_cast<std::uint64_t>(carry) * poly_[j] % p_) % p_;
          cur[j] = static_cast<std::uint32_t>(s % p_);
        }
      }
      idx = from_digits(cur);
    }
    if (idx != 1)
      throw SuppliedPolynomialNotPrimitive("exp table did not close with period q^s - 1");
  }

  std::uint32_t p_;
  std::uint32_t degree_;
  std::uint64_t size_;
  std::vector<std::uint32_t> poly_;
  std::vector<std::uint64_t> exp_;
  std::vector<std::uint64_t> log_;
};

class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(const Field* f, std::uint64_t v) : f_(f), v_(v) {}

  std::uint64_t value() const { return v_; }
  const Field* field() const { return f_; }

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    same(a, b);
    return {a.f_, a.f_->add(a.v_, b.v_)};
  }
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b) {
    same(a, b);
    return {a.f_, a.f_->sub(a.v_, b.v_)};
  }
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    same(a, b);
    return {a.f_, a.f_->mul(a.v_, b.v_)};
  }
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b) {
    same(a, b);
    return {a.f_, a.f_->div(a.v_, b.v_)};
  }
  FieldElement operator-() const { return {f_, f_->neg(v_)}; }
  FieldElement inv() const { return {f_, f_->inv(v_)}; }
  FieldElement pow(std::int64_t e) const { return {f_, f_->pow(v_, e)}; }

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    same(a, b);
    return a.v_ == b.v_;
  }
  friend bool operator!=(const FieldElement& a, const FieldElement& b) {
    return !(a == b);
  }

 private:
  static void same(const FieldElement& a, const FieldElement& b) {
    if (a.f_ != b.f_)
      throw FieldMismatch("elements of distinct fields cannot mix");
  }
  const Field* f_ = nullptr;
  std::uint64_t v_ = 0;
};

inline FieldElement Field::element(std::uint64_t v) const {
  if (v >= size_) throw InvalidArgument("element index out of range");
  return FieldElement(this, v);
}

/// Builds GF(p^k); searches a primitive polynomial deterministically when
/// none is supplied.
inline FieldPtr build_field(std::uint32_t p, std::uint32_t k,
                            std::optional<std::vector<std::uint32_t>> prim_poly = std::nullopt,
                            std::uint64_t table_limit = Field::kDefaultTableLimit) {
  return Field::make(p, k, std::move(prim_poly), table_limit);
}

/// Exhaustive count of monic degree-s primitive polynomials over F_q.
/// Matches euler_phi(q^s - 1) / s; kept as a search so the two routes can
/// cross-check each other in tests.
inline std::uint64_t count_primitive_polynomials(
    std::uint64_t q, std::uint32_t s,
    std::uint64_t table_limit = Field::kDefaultTableLimit) {
  if (s < 1) throw InvalidArgument("degree must be >= 1");
  const auto [p, k] = factor_prime_power(q);
  const auto qs = checked_pow(q, s);
  if (!qs || *qs > table_limit)
    throw FieldTooLarge("q^s exceeds table limit");
  struct FieldCoeffOps {
    const Field* f;
    std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return f->add(a, b); }
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return f->sub(a, b); }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return f->mul(a, b); }
  };
  const FieldPtr base = Field::make(static_cast<std::uint32_t>(p), k, std::nullopt, table_limit);
  const FieldCoeffOps ops{base.get()};
  std::uint64_t count = 0;
  std::vector<std::uint64_t> f(s + 1, 0);
  f[s] = 1;
  for (std::uint64_t v = 0; v < *qs; ++v) {
    std::uint64_t x = v;
    for (std::uint32_t i = 0; i < s; ++i) {
      f[i] = x % q;
      x /= q;
    }
    if (f[0] == 0) continue;
    if (detail::poly_is_primitive(ops, q, f)) ++count;
  }
  return count;
}

}  // namespace ffcs
