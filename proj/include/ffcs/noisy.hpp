#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ffcs/errors.hpp"
#include "ffcs/rng.hpp"
#include "ffcs/sensing.hpp"

namespace ffcs {

struct NoNoise {};

/// Each measurement symbol independently stays clean with probability
/// 1 - lambda, else flips to a uniform nonzero offset.
struct QSymmetricNoise {
  double lambda = 0.0;
};

/// Adversarial noise constrained only by weight: wt(noise) <= floor(delta*m).
struct WorstCaseNoise {
  double delta = 0.0;
};

using NoiseModel = std::variant<NoNoise, QSymmetricNoise, WorstCaseNoise>;

/// q-ary entropy H_q(x) = -x log_q x - (1-x) log_q(1-x) + x log_q(q-1),
/// defined on (0,1). Bounds the usable outer-code rate: 1 - H_q(lambda) is
/// the q-ary symmetric channel capacity.
inline double h_q(double x, std::uint64_t q) {
  if (!(x > 0.0 && x < 1.0)) throw DomainError("h_q: x must lie in (0,1)");
  if (q < 2) throw DomainError("h_q: q must be >= 2");
  const double lq = std::log(static_cast<double>(q));
  return (-x * std::log(x) - (1.0 - x) * std::log(1.0 - x) +
          x * std::log(static_cast<double>(q - 1))) /
         lq;
}

enum class AdversarialStrategy { RandomSupport, Burst, TargetInner };

/// Explicit outer-code sizing, overriding the automatic minimal choice.
struct OuterParams {
  std::uint32_t u = 1;    // outer symbols group u base symbols (field F_{q^u})
  std::size_t n_out = 0;  // outer codeword length
};

/// Two-stage noisy scheme A = G * A' over F_q.
///
/// The inner stage is a noiseless SensingScheme (matrix A'' with a lifted
/// Reed-Solomon parity check, m_in = 2*b*s rows). A' places those rows at
/// `layout` inside an m' = K*u row matrix, padding the rest with zero rows.
/// The outer stage groups u base symbols into one symbol of F_{q^u} and
/// protects A'x with an [N, K] Reed-Solomon code there; G expressed over F_q
/// is the m x m' matrix unlift(encode(lift(.))). Decoding runs the outer
/// bounded-distance decoder first, extracts the inner rows, then performs
/// noiseless sparse recovery.
///
/// One corrupted base symbol corrupts at most one outer symbol, so the
/// worst-case contract "exact whenever wt(noise) <= floor(delta*m)" holds as
/// long as the outer distance d satisfies d > 2*delta*m, which the builder
/// enforces.
class NoisyScheme {
 public:
  static NoisyScheme build(std::uint64_t q, std::size_t n, std::size_t b,
                           const NoiseModel& model, double rate_margin = 0.5,
                           std::optional<OuterParams> outer_override = std::nullopt,
                           std::uint64_t table_limit = Field::kDefaultTableLimit) {
    SensingScheme inner = SensingScheme::build(q, n, b, 0, table_limit);
    const std::size_t m_in = inner.measurement_count();

    std::uint32_t u = 0;
    std::size_t n_out = 0, k_out = 0;
    if (const auto* wc = std::get_if<WorstCaseNoise>(&model)) {
      const double delta = wc->delta;
      const double plotkin = (1.0 - 1.0 / static_cast<double>(q)) / 2.0;
      if (!(delta > 0.0 && delta < plotkin))
        throw InvalidArgument("worst-case delta must lie in (0, (1-1/q)/2)");
      if (outer_override) {
        u = outer_override->u;
        n_out = outer_override->n_out;
        k_out = (m_in + u - 1) / u;
        check_outer_field(q, u, n_out, table_limit);
        if (n_out < k_out) throw InvalidArgument("outer length below message length");
        const double d = static_cast<double>(n_out - k_out + 1);
        if (!(d > 2.0 * delta * static_cast<double>(n_out) * u))
          throw InfeasibleRate("outer distance does not exceed 2*delta*m");
      } else {
        // smallest (u, N) with d = N-K+1 > 2*delta*N*u and N <= q^u - 1
        for (std::uint32_t cand_u = 1; cand_u <= 24 && u == 0; ++cand_u) {
          if (2.0 * delta * cand_u >= 1.0) break;  // larger u cannot help
          const std::size_t k = (m_in + cand_u - 1) / cand_u;
          const std::uint64_t qu = checked_pow(q, cand_u).value_or(0);
          if (qu == 0 || qu > table_limit || qu - 1 < k) continue;
          for (std::size_t cand_n = k; cand_n <= qu - 1; ++cand_n) {
            const double d = static_cast<double>(cand_n - k + 1);
            if (d > 2.0 * delta * static_cast<double>(cand_n) * cand_u) {
              u = cand_u;
              n_out = cand_n;
              k_out = k;
              break;
            }
          }
        }
        if (u == 0)
          throw OuterFieldTooSmall(
              "no Reed-Solomon outer code meets d > 2*delta*m at this q");
      }
    } else if (const auto* qs = std::get_if<QSymmetricNoise>(&model)) {
      const double lambda = qs->lambda;
      const double lmax = 1.0 - 1.0 / static_cast<double>(q);
      if (!(lambda >= 0.0 && lambda < lmax))
        throw InvalidArgument("q-ary symmetric lambda must lie in [0, 1-1/q)");
      const double capacity = lambda == 0.0 ? 1.0 : 1.0 - h_q(lambda, q);
      // the chosen rate 1/c must stay strictly below capacity
      if (!(rate_margin > 0.0 && rate_margin < 1.0))
        throw InfeasibleRate("rate margin must lie in (0,1): rate 1/c >= capacity");
      const double rate = rate_margin * capacity;
      if (outer_override) {
        u = outer_override->u;
        n_out = outer_override->n_out;
        k_out = (m_in + u - 1) / u;
        check_outer_field(q, u, n_out, table_limit);
        if (n_out < k_out) throw InvalidArgument("outer length below message length");
        if (static_cast<double>(k_out) / static_cast<double>(n_out) >= capacity)
          throw InfeasibleRate("outer rate is not below channel capacity");
      } else {
        for (std::uint32_t cand_u = 1; cand_u <= 24 && u == 0; ++cand_u) {
          const std::size_t k = (m_in + cand_u - 1) / cand_u;
          const std::size_t need_n =
              static_cast<std::size_t>(std::ceil(static_cast<double>(k) / rate));
          const std::uint64_t qu = checked_pow(q, cand_u).value_or(0);
          if (qu != 0 && qu <= table_limit && qu - 1 >= need_n) {
            u = cand_u;
            n_out = need_n;
            k_out = k;
          }
        }
        if (u == 0) throw OuterFieldTooSmall("outer field cannot host the code length");
      }
    } else {
      // noiseless model: degenerate outer code with no parity symbols
      for (std::uint32_t cand_u = 1; cand_u <= 24 && u == 0; ++cand_u) {
        const std::size_t k = (m_in + cand_u - 1) / cand_u;
        const std::uint64_t qu = checked_pow(q, cand_u).value_or(0);
        if (qu != 0 && qu <= table_limit && qu - 1 >= k) {
          u = cand_u;
          n_out = k_out = k;
        }
      }
      if (u == 0) throw OuterFieldTooSmall("outer field cannot host the code length");
    }

    FieldPtr base = inner.base_field();
    LiftSpec outer_lift = LiftSpec::make(base, u, std::nullopt, table_limit);
    RsCode outer(outer_lift.lifted(), n_out, n_out - k_out);
    return NoisyScheme(std::move(inner), std::move(outer_lift), std::move(outer),
                       u, k_out);
  }

  const SensingScheme& inner() const { return inner_; }
  const LiftSpec& outer_lift() const { return outer_lift_; }
  const RsCode& outer_code() const { return outer_; }
  std::uint32_t u() const { return u_; }
  std::size_t m() const { return a_.rows(); }
  std::size_t m_prime() const { return a_prime_.rows(); }
  std::size_t n() const { return inner_.n(); }
  std::uint64_t q() const { return inner_.q(); }
  const FieldMatrix& matrix() const { return a_; }
  const FieldMatrix& a_prime() const { return a_prime_; }
  const FieldMatrix& g_matrix() const { return g_fq_; }
  const std::vector<std::size_t>& layout() const { return layout_; }

  /// Base-symbol noise budget floor(delta*m) for the worst-case model.
  std::size_t noise_budget(const NoiseModel& model) const {
    if (const auto* wc = std::get_if<WorstCaseNoise>(&model))
      return static_cast<std::size_t>(wc->delta * static_cast<double>(m()));
    return 0;
  }

  /// Outer-symbol correction radius floor((d-1)/2).
  std::size_t outer_radius() const { return outer_.correction_radius(); }

  FieldVector measure(const SparseSignal& x) const {
    if (x.n != n()) throw DimensionMismatch("signal dimension != n");
    const Field& f = *inner_.base_field();
    FieldVector y(inner_.base_field(), a_.rows());
    for (std::size_t t = 0; t < x.support.size(); ++t) {
      const std::size_t j = x.support[t];
      const std::uint64_t v = x.values[t];
      for (std::size_t i = 0; i < a_.rows(); ++i) {
        const std::uint64_t aij = a_.at(i, j);
        if (aij) y[i] = f.add(y[i], f.mul(aij, v));
      }
    }
    return y;
  }

  FieldVector draw_noise(const NoiseModel& model, Rng& rng,
                         AdversarialStrategy strategy =
                             AdversarialStrategy::RandomSupport) const {
    const FieldPtr& f = inner_.base_field();
    FieldVector noise(f, m());
    if (std::holds_alternative<NoNoise>(model)) return noise;
    if (const auto* qs = std::get_if<QSymmetricNoise>(&model)) {
      const std::uint64_t q = f->size();
      for (std::size_t i = 0; i < noise.size(); ++i)
        if (rng.uniform() < qs->lambda) noise[i] = 1 + rng.below(q - 1);
      return noise;
    }
    const std::size_t w = noise_budget(model);
    if (w == 0) return noise;
    std::vector<std::size_t> supp;
    switch (strategy) {
      case AdversarialStrategy::RandomSupport:
        supp = rng.sample_distinct(m(), w);
        break;
      case AdversarialStrategy::Burst: {
        const std::size_t start = rng.below(m() - w + 1);
        for (std::size_t i = 0; i < w; ++i) supp.push_back(start + i);
        break;
      }
      case AdversarialStrategy::TargetInner: {
        // hit the measurement symbols that carry the inner rows
        const std::size_t from_pool = std::min(w, target_rows_.size());
        auto picks = rng.sample_distinct(target_rows_.size(), from_pool);
        for (std::size_t i : picks) supp.push_back(target_rows_[i]);
        while (supp.size() < w) {
          std::size_t cand = rng.below(m());
          bool seen = false;
          for (std::size_t s : supp) seen |= (s == cand);
          if (!seen) supp.push_back(cand);
        }
        break;
      }
    }
    for (std::size_t i : supp) noise[i] = 1 + rng.below(f->size() - 1);
    return noise;
  }

  /// y = A x + noise, noise drawn per model from the seed.
  FieldVector measure_noisy(const SparseSignal& x, const NoiseModel& model,
                            std::uint64_t seed,
                            AdversarialStrategy strategy =
                                AdversarialStrategy::RandomSupport) const {
    Rng rng(seed);
    return measure(x) + draw_noise(model, rng, strategy);
  }

  /// Stage 1: outer bounded-distance decode of the lifted measurements gives
  /// A'x. Stage 2: the layout extracts A''x. Stage 3: noiseless recovery.
  SparseSignal recover_noisy(const FieldVector& y) const {
    detail::require_same_field(y.field(), inner_.base_field());
    if (y.size() != m()) throw DimensionMismatch("measurement length != m");
    FieldVector msg(outer_lift_.lifted(), 0);
    try {
      msg = outer_.codeword_decode(outer_lift_.lift_vector(y));
    } catch (const DecodeFailure& e) {
      throw OuterDecodeFailure(std::string("outer decode failed: ") + e.what());
    }
    const FieldVector a1x = outer_lift_.unlift_vector(msg);
    FieldVector inner_y(inner_.base_field(), layout_.size());
    for (std::size_t i = 0; i < layout_.size(); ++i) inner_y[i] = a1x[layout_[i]];
    return inner_.recover(inner_y);
  }

  /// Number of outer symbols touched by a base-symbol noise vector; recovery
  /// is guaranteed exact whenever this is <= outer_radius().
  std::size_t corrupted_outer_symbols(const FieldVector& noise) const {
    std::size_t count = 0;
    for (std::size_t sym = 0; sym < outer_.length(); ++sym) {
      for (std::uint32_t t = 0; t < u_; ++t) {
        if (noise[sym * u_ + t] != 0) {
          ++count;
          break;
        }
      }
    }
    return count;
  }

  void save(std::ostream& os) const;
  static NoisyScheme load(std::istream& is,
                          std::uint64_t table_limit = Field::kDefaultTableLimit);

 private:
  static void check_outer_field(std::uint64_t q, std::uint32_t u, std::size_t n_out,
                                std::uint64_t table_limit) {
    if (u < 1) throw InvalidArgument("outer u must be >= 1");
    const auto qu = checked_pow(q, u);
    if (!qu || *qu > table_limit)
      throw FieldTooLarge("outer field exceeds the table limit");
    if (n_out > *qu - 1)
      throw OuterFieldTooSmall("outer length exceeds q^u - 1");
  }

  NoisyScheme(SensingScheme inner, LiftSpec outer_lift, RsCode outer,
              std::uint32_t u, std::size_t k_out)
      : inner_(std::move(inner)),
        outer_lift_(std::move(outer_lift)),
        outer_(std::move(outer)),
        u_(u) {
    const std::size_t m_in = inner_.measurement_count();
    const std::size_t m_prime = k_out * u_;
    layout_.resize(m_in);
    for (std::size_t i = 0; i < m_in; ++i) layout_[i] = i;

    const FieldPtr& base = inner_.base_field();
    a_prime_ = FieldMatrix(base, m_prime, inner_.n());
    for (std::size_t i = 0; i < m_in; ++i)
      for (std::size_t j = 0; j < inner_.n(); ++j)
        a_prime_.at(layout_[i], j) = inner_.matrix().at(i, j);

    // G over F_q, column by column: unlift(encode(lift(unit)))
    const std::size_t m_rows = outer_.length() * u_;
    g_fq_ = FieldMatrix(base, m_rows, m_prime);
    FieldVector unit(base, m_prime);
    for (std::size_t j = 0; j < m_prime; ++j) {
      unit[j] = 1;
      const FieldVector cw = outer_.encode(outer_lift_.lift_vector(unit));
      const FieldVector col = outer_lift_.unlift_vector(cw);
      for (std::size_t i = 0; i < m_rows; ++i) g_fq_.at(i, j) = col[i];
      unit[j] = 0;
    }
    a_ = g_fq_ * a_prime_;

    // measurement symbols carrying inner rows, for the targeting adversary
    const auto& pos = outer_.message_positions();
    for (std::size_t i = 0; i < m_in; ++i) {
      const std::size_t sym = layout_[i] / u_;
      target_rows_.push_back(pos[sym] * u_ + layout_[i] % u_);
    }
    std::sort(target_rows_.begin(), target_rows_.end());
    target_rows_.erase(std::unique(target_rows_.begin(), target_rows_.end()),
                       target_rows_.end());
  }

  SensingScheme inner_;
  LiftSpec outer_lift_;
  RsCode outer_;
  std::uint32_t u_;
  std::vector<std::size_t> layout_;
  FieldMatrix a_prime_, g_fq_, a_;
  std::vector<std::size_t> target_rows_;
};

// Extended scheme file: same as the noiseless format plus an outer-code line
// and the outer field polynomial.
//
//   FFCS v1
//   p k s n b
//   OUTER u n_out k_out
//   base prim_poly
//   inner lifted prim_poly
//   outer lifted prim_poly
//   m_in rows of the inner matrix

inline void NoisyScheme::save(std::ostream& os) const {
  os << "FFCS v1\n";
  os << inner_.base_field()->characteristic() << ' ' << inner_.base_field()->degree()
     << ' ' << inner_.s() << ' ' << inner_.n() << ' ' << inner_.b() << '\n';
  os << "OUTER " << u_ << ' ' << outer_.length() << ' ' << outer_.dimension() << '\n';
  const auto put_poly = [&os](const std::vector<std::uint32_t>& poly) {
    for (std::size_t i = 0; i < poly.size(); ++i) os << (i ? " " : "") << poly[i];
    os << '\n';
  };
  put_poly(inner_.base_field()->prim_poly());
  put_poly(inner_.lifted_field()->prim_poly());
  put_poly(outer_lift_.lifted()->prim_poly());
  const FieldMatrix& a = inner_.matrix();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) os << (j ? " " : "") << a.at(i, j);
    os << '\n';
  }
}

inline NoisyScheme NoisyScheme::load(std::istream& is, std::uint64_t table_limit) {
  if (detail::read_line(is, "magic") != "FFCS v1")
    throw SchemeFormatError("bad magic line, expected 'FFCS v1'");
  const auto header =
      detail::parse_ints<std::uint64_t>(detail::read_line(is, "header"), "header");
  if (header.size() != 5) throw SchemeFormatError("header must be 'p k s n b'");
  const auto p = static_cast<std::uint32_t>(header[0]);
  const auto k = static_cast<std::uint32_t>(header[1]);
  const auto s = static_cast<std::uint32_t>(header[2]);
  const auto n = static_cast<std::size_t>(header[3]);
  const auto b = static_cast<std::size_t>(header[4]);
  std::string outer_line = detail::read_line(is, "outer header");
  if (outer_line.rfind("OUTER ", 0) != 0)
    throw SchemeFormatError("expected OUTER line");
  const auto outer_hdr =
      detail::parse_ints<std::uint64_t>(outer_line.substr(6), "outer header");
  if (outer_hdr.size() != 3) throw SchemeFormatError("outer header must be 'u n k'");
  const auto u = static_cast<std::uint32_t>(outer_hdr[0]);
  const auto n_out = static_cast<std::size_t>(outer_hdr[1]);
  const auto k_out = static_cast<std::size_t>(outer_hdr[2]);

  const auto base_poly = detail::parse_ints<std::uint32_t>(
      detail::read_line(is, "base polynomial"), "base polynomial");
  const auto lifted_poly = detail::parse_ints<std::uint32_t>(
      detail::read_line(is, "lifted polynomial"), "lifted polynomial");
  const auto outer_poly = detail::parse_ints<std::uint32_t>(
      detail::read_line(is, "outer polynomial"), "outer polynomial");
  FieldPtr base, lifted, outer_field;
  try {
    base = Field::make(p, k, base_poly, table_limit);
    lifted = s == 1 ? base : Field::make(p, k * s, lifted_poly, table_limit);
    outer_field = u == 1 ? base : Field::make(p, k * u, outer_poly, table_limit);
  } catch (const SuppliedPolynomialNotPrimitive& e) {
    throw SchemeFormatError(std::string("stored polynomial is not primitive: ") + e.what());
  }
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
  SensingScheme inner =
      SensingScheme::from_parts(std::move(lift), std::move(code), std::move(a), n, b);
  if (k_out * u < inner.measurement_count())
    throw SchemeFormatError("outer message length below the inner row count");
  if (n_out < k_out) throw SchemeFormatError("outer length below message length");
  LiftSpec outer_lift = LiftSpec::from_fields(base, outer_field);
  RsCode outer(outer_lift.lifted(), n_out, n_out - k_out);
  return NoisyScheme(std::move(inner), std::move(outer_lift), std::move(outer), u,
                     k_out);
}

/// Peeks at the third line to distinguish the two scheme formats.
inline bool is_noisy_scheme_text(const std::string& text) {
  std::size_t pos = 0;
  for (int line = 0; line < 2; ++line) {
    pos = text.find('\n', pos);
    if (pos == std::string::npos) return false;
    ++pos;
  }
  return text.compare(pos, 6, "OUTER ") == 0;
}

}  // namespace ffcs
