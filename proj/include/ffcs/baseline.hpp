#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ffcs/errors.hpp"
#include "ffcs/rng.hpp"

namespace ffcs {

/// Gaussian entry variance convention. The sweep experiments use 1/sqrt(m);
/// the conventional normalization 1/m is available as a switch. Noiseless
/// greedy support recovery is scale-invariant, so the two only differ in the
/// magnitude bookkeeping.
enum class GaussianScaling { VarianceInvSqrtM, VarianceInvM };

/// Dense real sensing matrix, i.i.d. zero-mean Gaussian entries.
struct RealSensing {
  std::size_t m = 0, n = 0;
  std::vector<double> a;  // row-major m x n
  double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

inline RealSensing build_real(std::size_t m, std::size_t n, std::uint64_t seed,
                              GaussianScaling scaling = GaussianScaling::VarianceInvSqrtM) {
  if (m < 1) throw InvalidArgument("build_real: m must be >= 1");
  if (n < 1) throw InvalidArgument("build_real: n must be >= 1");
  const double variance = scaling == GaussianScaling::VarianceInvSqrtM
                              ? 1.0 / std::sqrt(static_cast<double>(m))
                              : 1.0 / static_cast<double>(m);
  const double sigma = std::sqrt(variance);
  RealSensing s{m, n, {}};
  s.a.resize(m * n);
  Rng rng(seed);
  for (double& v : s.a) v = sigma * rng.normal();
  return s;
}

inline std::vector<double> measure_real(const RealSensing& s,
                                        std::span<const double> x) {
  if (x.size() != s.n) throw DimensionMismatch("measure_real: dimension mismatch");
  std::vector<double> y(s.m, 0.0);
  for (std::size_t j = 0; j < s.n; ++j) {
    const double v = x[j];
    if (v == 0.0) continue;
    for (std::size_t i = 0; i < s.m; ++i) y[i] += s.at(i, j) * v;
  }
  return y;
}

/// Orthogonal matching pursuit: up to b rounds of max-|correlation| column
/// selection with a least-squares refit of the active set after each pick.
/// Never selects a column twice; stops early once the residual vanishes.
/// Throws IllConditionedActiveSet when the normal equations of the active
/// set degenerate (dependent column selection).
inline std::vector<double> omp_recover(const RealSensing& s,
                                       std::span<const double> y, std::size_t b) {
  if (y.size() != s.m) throw DimensionMismatch("omp_recover: measurement length != m");
  std::vector<double> x(s.n, 0.0);
  std::vector<double> residual(y.begin(), y.end());
  std::vector<std::size_t> active;
  std::vector<char> used(s.n, 0);
  std::vector<double> coef;

  const std::size_t rounds = std::min(b, s.m);
  for (std::size_t it = 0; it < rounds; ++it) {
    double rnorm = 0.0;
    for (double v : residual) rnorm += v * v;
    if (rnorm <= 1e-24) break;

    std::size_t best = s.n;
    double best_corr = -1.0;
    for (std::size_t j = 0; j < s.n; ++j) {
      if (used[j]) continue;
      double c = 0.0;
      for (std::size_t i = 0; i < s.m; ++i) c += s.at(i, j) * residual[i];
      if (std::abs(c) > best_corr) {
        best_corr = std::abs(c);
        best = j;
      }
    }
    if (best == s.n) break;
    used[best] = 1;
    active.push_back(best);

    // normal equations on the active set (tiny: |active| <= b)
    const std::size_t k = active.size();
    std::vector<double> ata(k * k, 0.0), aty(k, 0.0);
    for (std::size_t u = 0; u < k; ++u) {
      for (std::size_t v = u; v < k; ++v) {
        double dot = 0.0;
        for (std::size_t i = 0; i < s.m; ++i)
          dot += s.at(i, active[u]) * s.at(i, active[v]);
        ata[u * k + v] = dot;
        ata[v * k + u] = dot;
      }
      double dot = 0.0;
      for (std::size_t i = 0; i < s.m; ++i) dot += s.at(i, active[u]) * y[i];
      aty[u] = dot;
    }
    double scale = 0.0;
    for (std::size_t u = 0; u < k; ++u) scale = std::max(scale, std::abs(ata[u * k + u]));
    if (scale == 0.0) scale = 1.0;
    // Gaussian elimination with partial pivoting
    coef = aty;
    for (std::size_t col = 0; col < k; ++col) {
      std::size_t piv = col;
      for (std::size_t r = col + 1; r < k; ++r)
        if (std::abs(ata[r * k + col]) > std::abs(ata[piv * k + col])) piv = r;
      if (std::abs(ata[piv * k + col]) < 1e-12 * scale)
        throw IllConditionedActiveSet("omp_recover: active set is numerically dependent");
      if (piv != col) {
        for (std::size_t c = 0; c < k; ++c) std::swap(ata[piv * k + c], ata[col * k + c]);
        std::swap(coef[piv], coef[col]);
      }
      for (std::size_t r = col + 1; r < k; ++r) {
        const double f = ata[r * k + col] / ata[col * k + col];
        if (f == 0.0) continue;
        for (std::size_t c = col; c < k; ++c) ata[r * k + c] -= f * ata[col * k + c];
        coef[r] -= f * coef[col];
      }
    }
    for (std::size_t col = k; col-- > 0;) {
      for (std::size_t c = col + 1; c < k; ++c) coef[col] -= ata[col * k + c] * coef[c];
      coef[col] /= ata[col * k + col];
    }

    residual.assign(y.begin(), y.end());
    for (std::size_t u = 0; u < k; ++u)
      for (std::size_t i = 0; i < s.m; ++i)
        residual[i] -= coef[u] * s.at(i, active[u]);
  }

  for (std::size_t u = 0; u < active.size(); ++u) x[active[u]] = coef[u];
  return x;
}

/// Empirical success fraction over seeded trials; the same harness serves
/// the finite-field and real pipelines so their curves are comparable.
struct TrialPlan {
  std::size_t trials = 0;
  std::uint64_t seed = 0;
};

inline double recovery_probability(const TrialPlan& plan,
                                   const std::function<bool(std::uint64_t)>& trial) {
  if (plan.trials == 0) throw InvalidArgument("recovery_probability: trials must be >= 1");
  std::size_t hits = 0;
  for (std::size_t t = 0; t < plan.trials; ++t)
    if (trial(split_seed(plan.seed, {t}))) ++hits;
  return static_cast<double>(hits) / static_cast<double>(plan.trials);
}

/// The error-free event for real-valued recovery: ||x - xhat||_2 / sqrt(n) < 1e-3.
inline bool real_recovery_error_free(std::span<const double> x,
                                     std::span<const double> xhat) {
  if (x.size() != xhat.size()) throw DimensionMismatch("error-free event: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - xhat[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(x.size())) < 1e-3;
}

}  // namespace ffcs
