#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ffcs/errors.hpp"
#include "ffcs/field.hpp"
#include "ffcs/lifting.hpp"
#include "ffcs/linalg.hpp"
#include "ffcs/numeric.hpp"
#include "ffcs/rng.hpp"
#include "ffcs/rscode.hpp"

namespace ffcs {

/// Sparse vector over F_q: strictly increasing support, nonzero values only.
struct SparseSignal {
  std::size_t n = 0;
  std::vector<std::size_t> support;
  std::vector<std::uint64_t> values;

  std::size_t weight() const { return support.size(); }

  bool operator==(const SparseSignal& o) const {
    return n == o.n && support == o.support && values == o.values;
  }

  FieldVector to_dense(const FieldPtr& f) const {
    FieldVector v(f, n);
    for (std::size_t i = 0; i < support.size(); ++i) v[support[i]] = values[i];
    return v;
  }

  static SparseSignal from_dense(const FieldVector& v) {
    SparseSignal s;
    s.n = v.size();
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i]) {
        s.support.push_back(i);
        s.values.push_back(v[i]);
      }
    }
    return s;
  }
};

/// Uniform b-sparse signal: b distinct positions, values uniform over the
/// nonzero field elements.
inline SparseSignal random_sparse_signal(std::uint64_t q, std::size_t n,
                                         std::size_t weight, Rng& rng) {
  SparseSignal s;
  s.n = n;
  s.support = rng.sample_distinct(n, weight);
  s.values.reserve(weight);
  for (std::size_t i = 0; i < weight; ++i) s.values.push_back(1 + rng.below(q - 1));
  return s;
}

/// b-sparse signal with all nonzero entries equal to the field one.
inline SparseSignal random_support_ones_signal(std::size_t n, std::size_t weight,
                                               Rng& rng) {
  SparseSignal s;
  s.n = n;
  s.support = rng.sample_distinct(n, weight);
  s.values.assign(weight, 1);
  return s;
}

/// Noiseless sensing scheme: an m x n matrix A over F_q (m = 2*b*s) whose
/// lift is the parity-check matrix of a Reed-Solomon code over F_{q^s}, so
/// every signal of weight <= b is the unique sparse explanation of its
/// measurements and syndrome decoding recovers it in polynomial time.
///
/// Construction is deterministic: fixed (q, n, b, s) always produce the same
/// matrix, bit for bit.
class SensingScheme {
 public:
  /// s defaults to the smallest degree giving the extension enough distinct
  /// evaluation points (q^s - 1 >= n). An explicit override replaces the
  /// default but must still leave room for n.
  static SensingScheme build(std::uint64_t q, std::size_t n, std::size_t b,
                             std::uint32_t s_override = 0,
                             std::uint64_t table_limit = Field::kDefaultTableLimit) {
    const auto [p, k] = factor_prime_power(q);
    if (b < 1) throw InvalidArgument("build_scheme: b must be >= 1");
    if (n <= 2 * b) throw InvalidArgument("build_scheme: requires n > 2b");
    std::uint32_t s = 1;
    while (checked_pow(q, s).value_or(0) < static_cast<std::uint64_t>(n) + 1) {
      ++s;
      if (s > 64) throw DimensionTooLargeForField("build_scheme: n too large");
    }
    if (s_override) {
      if (checked_pow(q, s_override).value_or(0) < static_cast<std::uint64_t>(n) + 1)
        throw DimensionTooLargeForField(
            "build_scheme: n exceeds the evaluation points of F_q^s");
      s = std::max(s, s_override);
    }
    FieldPtr base = Field::make(static_cast<std::uint32_t>(p), k, std::nullopt, table_limit);
    LiftSpec lift = LiftSpec::make(std::move(base), s, std::nullopt, table_limit);
    RsCode code(lift.lifted(), n, 2 * b);
    FieldMatrix a = lift.unlift_matrix(code.parity_check_matrix());
    return SensingScheme(std::move(lift), std::move(code), std::move(a), n, b);
  }

  std::uint64_t q() const { return lift_.base()->size(); }
  std::size_t n() const { return n_; }
  std::size_t b() const { return b_; }
  std::uint32_t s() const { return lift_.s(); }
  std::size_t measurement_count() const { return a_.rows(); }
  const FieldPtr& base_field() const { return lift_.base(); }
  const FieldPtr& lifted_field() const { return lift_.lifted(); }
  const LiftSpec& lift() const { return lift_; }
  const RsCode& code() const { return code_; }
  const FieldMatrix& matrix() const { return a_; }

  /// y = A x over F_q; cost O(m * wt(x)).
  FieldVector measure(const SparseSignal& x) const {
    if (x.n != n_) throw DimensionMismatch("signal dimension != n");
    const Field& f = *lift_.base();
    FieldVector y(lift_.base(), a_.rows());
    for (std::size_t t = 0; t < x.support.size(); ++t) {
      const std::size_t j = x.support[t];
      if (j >= n_) throw DimensionMismatch("signal support out of range");
      const std::uint64_t v = x.values[t];
      for (std::size_t i = 0; i < a_.rows(); ++i) {
        const std::uint64_t aij = a_.at(i, j);
        if (aij) y[i] = f.add(y[i], f.mul(aij, v));
      }
    }
    return y;
  }

  /// Exact recovery of the unique x with wt(x) <= b and A x = y: lift y into
  /// the extension field, where it is the syndrome of x under the
  /// Reed-Solomon parity check, and decode. The result is re-measured before
  /// returning, so a violated precondition (wt > b, corrupted y) surfaces as
  /// RecoveryFailure rather than a silent wrong answer.
  SparseSignal recover(const FieldVector& y) const {
    detail::require_same_field(y.field(), lift_.base());
    if (y.size() != a_.rows()) throw DimensionMismatch("measurement length != m");
    std::vector<std::pair<std::size_t, std::uint64_t>> err;
    try {
      err = code_.syndrome_decode(lift_.lift_vector(y));
    } catch (const DecodeFailure& e) {
      throw RecoveryFailure(std::string("syndrome decoding failed: ") + e.what());
    }
    SparseSignal x;
    x.n = n_;
    for (const auto& [j, v] : err) {
      x.support.push_back(j);
      try {
        x.values.push_back(lift_.unembed(v));
      } catch (const NotInBaseSpan&) {
        throw RecoveryFailure("decoded value lies outside the base field");
      }
    }
    if (x.weight() > b_) throw RecoveryFailure("decoded weight exceeds the budget");
    if (!(measure(x) == y))
      throw RecoveryFailure("re-measurement of the decoded signal mismatches");
    return x;
  }

  void save(std::ostream& os) const;
  static SensingScheme load(std::istream& is,
                            std::uint64_t table_limit = Field::kDefaultTableLimit);

  /// Loader/composer path; verifies the lift of `a` against the parity check.
  static SensingScheme from_parts(LiftSpec lift, RsCode code, FieldMatrix a,
                                  std::size_t n, std::size_t b) {
    if (!(lift.lift_matrix(a) == code.parity_check_matrix()))
      throw SchemeFormatError("sensing matrix does not lift to the parity check");
    if (code.parity_count() != 2 * b || code.length() != n)
      throw SchemeFormatError("code parameters disagree with (n, b)");
    return SensingScheme(std::move(lift), std::move(code), std::move(a), n, b);
  }

 private:
  SensingScheme(LiftSpec lift, RsCode code, FieldMatrix a, std::size_t n, std::size_t b)
      : lift_(std::move(lift)), code_(std::move(code)), a_(std::move(a)), n_(n), b_(b) {}

  LiftSpec lift_;
  RsCode code_;
  FieldMatrix a_;
  std::size_t n_, b_;
};

/// Exhaustive minimum-weight solve of y = A x in increasing weight order,
/// ties broken lexicographically by (support, values). Test-scale only: the
/// enumeration count sum_{w<=max_weight} C(n,w)(q-1)^w is capped at 1e7.
inline SparseSignal l0_oracle(const FieldMatrix& a, const FieldVector& y,
                              std::size_t max_weight) {
  detail::require_same_field(a.field(), y.field());
  if (a.rows() != y.size()) throw DimensionMismatch("measurement length != rows");
  const Field& f = *a.field();
  const std::size_t n = a.cols();
  const double qm1 = static_cast<double>(f.size() - 1);

  double count = 0, binom = 1;
  for (std::size_t w = 0; w <= max_weight && w <= n; ++w) {
    if (w > 0) binom = binom * static_cast<double>(n - w + 1) / static_cast<double>(w);
    count += binom * std::pow(qm1, static_cast<double>(w));
    if (count > 1e7)
      throw SearchSpaceTooLarge("l0_oracle: enumeration exceeds 1e7 candidates");
  }

  auto matches = [&](const std::vector<std::size_t>& supp,
                     const std::vector<std::uint64_t>& vals) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
      std::uint64_t acc = 0;
      for (std::size_t t = 0; t < supp.size(); ++t)
        acc = f.add(acc, f.mul(a.at(i, supp[t]), vals[t]));
      if (acc != y[i]) return false;
    }
    return true;
  };

  if (y.is_zero()) return SparseSignal{n, {}, {}};

  for (std::size_t w = 1; w <= max_weight && w <= n; ++w) {
    std::vector<std::size_t> supp(w);
    for (std::size_t i = 0; i < w; ++i) supp[i] = i;
    while (true) {
      // odometer over values, leftmost position most significant
      std::vector<std::uint64_t> vals(w, 1);
      while (true) {
        if (matches(supp, vals)) return SparseSignal{n, supp, vals};
        std::size_t pos = w;
        while (pos-- > 0) {
          if (vals[pos] < f.size() - 1) {
            ++vals[pos];
            for (std::size_t t = pos + 1; t < w; ++t) vals[t] = 1;
            break;
          }
          if (pos == 0) goto next_support;
        }
      }
    next_support:
      // next lexicographic combination
      std::size_t i = w;
      bool advanced = false;
      while (i-- > 0) {
        if (supp[i] < n - (w - i)) {
          ++supp[i];
          for (std::size_t t = i + 1; t < w; ++t) supp[t] = supp[t - 1] + 1;
          advanced = true;
          break;
        }
      }
      if (!advanced) break;
    }
  }
  throw NoSolutionWithinWeight("l0_oracle: no solution within the weight budget");
}

/// Measurement-count and storage-space accounting.
struct SampleComplexity {
  std::size_t m_finite = 0;          // 2 b ceil(log_q n)
  double lower_bound_bits = 0.0;     // log2 |S_q|, exact big-integer sum
  std::size_t storage_bits_finite = 0;
  std::size_t storage_bits_real(std::size_t j) const { return j * m_finite; }
};

inline SampleComplexity sample_complexity(std::uint64_t q, std::size_t n, std::size_t b) {
  if (q < 2 || n < 1 || b > n) throw InvalidArgument("sample_complexity: bad arguments");
  SampleComplexity out;
  out.m_finite = 2 * b * ceil_log(q, n);
  out.storage_bits_finite = out.m_finite * ceil_log(2, q);
  BigUint total(1), binom(1), power(1);
  for (std::size_t j = 1; j <= b; ++j) {
    binom.mul_small(n - j + 1);
    binom.divexact_small(j);
    power.mul_small(q - 1);
    total.add_assign(binom.mul(power));
  }
  out.lower_bound_bits = total.log2();
  return out;
}

// --- scheme / signal / vector file formats -------------------------------
//
// Scheme file (text, versioned):
//   FFCS v1
//   p k s n b
//   base prim_poly coefficients        (k + 1 integers)
//   lifted prim_poly coefficients      (k*s + 1 integers)
//   m rows of n canonical element indices
//
// Sparse signal file:  "n" newline, then space-separated "index:value" pairs.
// Dense vector file:   "len" newline, then space-separated indices.

namespace detail {

inline std::string read_line(std::istream& is, const char* what) {
  std::string line;
  if (!std::getline(is, line))
    throw SchemeFormatError(std::string("unexpected end of file reading ") + what);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

template <class T>
std::vector<T> parse_ints(const std::string& line, const char* what) {
  std::istringstream ss(line);
  std::vector<T> out;
  long long v;
  while (ss >> v) {
    if (v < 0) throw SchemeFormatError(std::string("negative value in ") + what);
    out.push_back(static_cast<T>(v));
  }
  if (!ss.eof())
    throw SchemeFormatError(std::string("malformed integer in ") + what);
  return out;
}

}  // namespace detail

inline void SensingScheme::save(std::ostream& os) const {
  os << "FFCS v1\n";
  os << lift_.base()->characteristic() << ' ' << lift_.base()->degree() << ' '
     << lift_.s() << ' ' << n_ << ' ' << b_ << '\n';
  const auto put_poly = [&os](const std::vector<std::uint32_t>& poly) {
    for (std::size_t i = 0; i < poly.size(); ++i) os << (i ? " " : "") << poly[i];
    os << '\n';
  };
  put_poly(lift_.base()->prim_poly());
  put_poly(lift_.lifted()->prim_poly());
  for (std::size_t i = 0; i < a_.rows(); ++i) {
    for (std::size_t j = 0; j < a_.cols(); ++j) os << (j ? " " : "") << a_.at(i, j);
    os << '\n';
  }
}

inline SensingScheme SensingScheme::load(std::istream& is, std::uint64_t table_limit) {
  if (detail::read_line(is, "magic") != "FFCS v1")
    throw SchemeFormatError("bad magic line, expected 'FFCS v1'");
  const auto header = detail::parse_ints<std::uint64_t>(
      detail::read_line(is, "header"), "header");
  if (header.size() != 5) throw SchemeFormatError("header must be 'p k s n b'");
  const auto p = static_cast<std::uint32_t>(header[0]);
  const auto k = static_cast<std::uint32_t>(header[1]);
  const auto s = static_cast<std::uint32_t>(header[2]);
  const auto n = static_cast<std::size_t>(header[3]);
  const auto b = static_cast<std::size_t>(header[4]);
  const auto base_poly = detail::parse_ints<std::uint32_t>(
      detail::read_line(is, "base polynomial"), "base polynomial");
  const auto lifted_poly = detail::parse_ints<std::uint32_t>(
      detail::read_line(is, "lifted polynomial"), "lifted polynomial");
  if (base_poly.size() != k + 1 || lifted_poly.size() != static_cast<std::size_t>(k) * s + 1)
    throw SchemeFormatError("polynomial degree disagrees with header");
  FieldPtr base, lifted;
  try {
    base = Field::make(p, k, base_poly, table_limit);
    lifted = s == 1 ? base : Field::make(p, k * s, lifted_poly, table_limit);
  } catch (const SuppliedPolynomialNotPrimitive& e) {
    throw SchemeFormatError(std::string("stored polynomial is not primitive: ") + e.what());
  }
  if (s == 1 && lifted_poly != base_poly)
    throw SchemeFormatError("s = 1 requires identical polynomial lines");
  LiftSpec lift = LiftSpec::from_fields(base, lifted);
  RsCode code(lift.lifted(), n, 2 * b);
  FieldMatrix a(base, 2 * b * s, n);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto row = detail::parse_ints<std::uint64_t>(
        detail::read_line(is, "matrix row"), "matrix row");
    if (row.size() != n) throw SchemeFormatError("matrix row has wrong length");
    for (std::size_t j = 0; j < n; ++j) {
      if (row[j] >= base->size()) throw SchemeFormatError("matrix entry out of range");
      a.at(i, j) = row[j];
    }
  }
  return from_parts(std::move(lift), std::move(code), std::move(a), n, b);
}

inline void save_signal(const SparseSignal& x, std::ostream& os) {
  os << x.n << '\n';
  for (std::size_t i = 0; i < x.support.size(); ++i)
    os << (i ? " " : "") << x.support[i] << ':' << x.values[i];
  os << '\n';
}

inline SparseSignal load_signal(std::istream& is) {
  const auto dims = detail::parse_ints<std::uint64_t>(
      detail::read_line(is, "signal dimension"), "signal dimension");
  if (dims.size() != 1) throw SchemeFormatError("signal file must start with n");
  SparseSignal x;
  x.n = static_cast<std::size_t>(dims[0]);
  std::string line;
  std::getline(is, line);
  std::istringstream ss(line);
  std::string pair;
  std::size_t prev = 0;
  bool first = true;
  while (ss >> pair) {
    const auto colon = pair.find(':');
    if (colon == std::string::npos)
      throw SchemeFormatError("signal entries must be index:value");
    std::size_t idx;
    std::uint64_t val;
    try {
      idx = std::stoull(pair.substr(0, colon));
      val = std::stoull(pair.substr(colon + 1));
    } catch (const std::exception&) {
      throw SchemeFormatError("malformed index:value pair");
    }
    if (idx >= x.n || val == 0 || (!first && idx <= prev))
      throw SchemeFormatError("signal support must be strictly increasing, in range, nonzero");
    x.support.push_back(idx);
    x.values.push_back(val);
    prev = idx;
    first = false;
  }
  return x;
}

inline void save_vector(const FieldVector& y, std::ostream& os) {
  os << y.size() << '\n';
  for (std::size_t i = 0; i < y.size(); ++i) os << (i ? " " : "") << y[i];
  os << '\n';
}

inline FieldVector load_vector(std::istream& is, const FieldPtr& field) {
  const auto dims = detail::parse_ints<std::uint64_t>(
      detail::read_line(is, "vector length"), "vector length");
  if (dims.size() != 1) throw SchemeFormatError("vector file must start with its length");
  const auto vals = detail::parse_ints<std::uint64_t>(
      detail::read_line(is, "vector values"), "vector values");
  if (vals.size() != dims[0]) throw SchemeFormatError("vector length mismatch");
  FieldVector y(field, vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (vals[i] >= field->size()) throw SchemeFormatError("vector entry out of range");
    y[i] = vals[i];
  }
  return y;
}

}  // namespace ffcs
