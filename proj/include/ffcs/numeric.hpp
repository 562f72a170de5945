#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "ffcs/errors.hpp"

namespace ffcs {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Distinct prime factors of n, ascending. Trial division; fine for the
/// table-limit sizes this library works at.
inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

/// Euler totient via trial-division factorization.
inline std::uint64_t euler_phi(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("euler_phi: n must be positive");
  std::uint64_t result = n;
  for (std::uint64_t p : prime_factors(n)) result -= result / p;
  return result;
}

/// base^exp, or nullopt on uint64 overflow.
inline std::optional<std::uint64_t> checked_pow(std::uint64_t base, std::uint32_t exp) {
  std::uint64_t r = 1;
  for (std::uint32_t i = 0; i < exp; ++i) {
    if (base != 0 && r > ~std::uint64_t{0} / base) return std::nullopt;
    r *= base;
  }
  return r;
}

/// Writes q = p^k with p prime, or throws NonPrimeCharacteristic.
inline std::pair<std::uint64_t, std::uint32_t> factor_prime_power(std::uint64_t q) {
  if (q < 2) throw NonPrimeCharacteristic("not a prime power: " + std::to_string(q));
  std::uint64_t p = q;
  for (std::uint64_t d = 2; d * d <= q; ++d) {
    if (q % d == 0) {
      p = d;
      break;
    }
  }
  std::uint32_t k = 0;
  std::uint64_t r = q;
  while (r % p == 0) {
    r /= p;
    ++k;
  }
  if (r != 1)
    throw NonPrimeCharacteristic("not a prime power: " + std::to_string(q));
  return {p, k};
}

/// Smallest s >= 1 with q^s >= n; the exact integer form of ceil(log_q n).
inline std::uint32_t ceil_log(std::uint64_t q, std::uint64_t n) {
  if (q < 2) throw InvalidArgument("ceil_log: q must be >= 2");
  if (n < 2) return 0;  // q^0 = 1 >= n
  std::uint32_t s = 1;
  std::uint64_t power = q;
  while (power < n) {
    if (power > ~std::uint64_t{0} / q)
      throw InvalidArgument("ceil_log: overflow");
    power *= q;
    ++s;
  }
  return s;
}

/// Minimal unsigned big integer: just enough for the exact binomial sums in
/// the measurement lower bound. Little-endian 32-bit limbs, no leading zeros.
class BigUint {
 public:
  BigUint() = default;
  explicit BigUint(std::uint64_t v) {
    while (v) {
      limb_.push_back(static_cast<std::uint32_t>(v));
      v >>= 32;
    }
  }

  bool is_zero() const { return limb_.empty(); }

  void add_assign(const BigUint& o) {
    std::uint64_t carry = 0;
    const std::size_t n = std::max(limb_.size(), o.limb_.size());
    limb_.resize(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t s = carry + limb_[i] + (i < o.limb_.size() ? o.limb_[i] : 0);
      limb_[i] = static_cast<std::uint32_t>(s);
      carry = s >> 32;
    }
    if (carry) limb_.push_back(static_cast<std::uint32_t>(carry));
  }

  void mul_small(std::uint64_t m) {
    if (m == 0) {
      limb_.clear();
      return;
    }
    unsigned __int128 carry = 0;
    for (auto& w : limb_) {
      unsigned __int128 t = static_cast<unsigned __int128>(w) * m + carry;
      w = static_cast<std::uint32_t>(t);
      carry = t >> 32;
    }
    while (carry) {
      limb_.push_back(static_cast<std::uint32_t>(carry));
      carry >>= 32;
    }
  }

  /// Exact division by a small divisor; the binomial recurrences guarantee it.
  void divexact_small(std::uint64_t d) {
    if (d == 0) throw DivisionByZero("BigUint::divexact_small");
    std::uint64_t rem = 0;
    for (std::size_t i = limb_.size(); i-- > 0;) {
      std::uint64_t cur = (rem << 32) | limb_[i];
      limb_[i] = static_cast<std::uint32_t>(cur / d);
      rem = cur % d;
    }
    trim();
  }

  BigUint mul(const BigUint& o) const {
    BigUint r;
    if (is_zero() || o.is_zero()) return r;
    r.limb_.assign(limb_.size() + o.limb_.size(), 0);
    for (std::size_t i = 0; i < limb_.size(); ++i) {
      std::uint64_t carry = 0;
      for (std::size_t j = 0; j < o.limb_.size(); ++j) {
        std::uint64_t t = static_cast<std::uint64_t>(limb_[i]) * o.limb_[j] +
                          r.limb_[i + j] + carry;
        r.limb_[i + j] = static_cast<std::uint32_t>(t);
        carry = t >> 32;
      }
      std::size_t k = i + o.limb_.size();
      while (carry) {
        std::uint64_t t = r.limb_[k] + carry;
        r.limb_[k] = static_cast<std::uint32_t>(t);
        carry = t >> 32;
        ++k;
      }
    }
    r.trim();
    return r;
  }

  std::size_t bit_length() const {
    if (limb_.empty()) return 0;
    std::uint32_t top = limb_.back();
    std::size_t bits = (limb_.size() - 1) * 32;
    while (top) {
      ++bits;
      top >>= 1;
    }
    return bits;
  }

  /// log2 of the value; 0 maps to -inf. Accurate to ~1e-14 relative.
  double log2() const {
    if (limb_.empty()) return -std::numeric_limits<double>::infinity();
    double x = 0.0;
    int folded = 0;
    std::size_t i = limb_.size();
    while (i-- > 0 && folded < 3) {
      x = x * 4294967296.0 + limb_[i];
      ++folded;
    }
    const double shift = 32.0 * static_cast<double>(limb_.size() - folded);
    return std::log2(x) + shift;
  }

 private:
  void trim() {
    while (!limb_.empty() && limb_.back() == 0) limb_.pop_back();
  }
  std::vector<std::uint32_t> limb_;
};

}  // namespace ffcs
