#pragma once

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ffcs/baseline.hpp"
#include "ffcs/errors.hpp"
#include "ffcs/noisy.hpp"
#include "ffcs/rng.hpp"
#include "ffcs/sensing.hpp"
#include "ffcs/tracking.hpp"
#include "ffcs/version.hpp"

namespace ffcs {

namespace detail {

/// Runs fn(0..count-1) on up to `workers` threads. Each index writes only
/// its own slot downstream, so results are identical for any worker count.
inline void parallel_for(std::size_t count, unsigned workers,
                         const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  workers = std::min<unsigned>(workers, static_cast<unsigned>(count));
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex err_mutex;
  std::atomic<std::size_t> next{0};
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace detail

/// Flat key-value experiment configuration. Lines are `key = value`; `#`
/// starts a comment; lists are comma-separated; `a:b:step` expands to an
/// inclusive range.
class ExperimentConfig {
 public:
  static ExperimentConfig parse_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream ss(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(ss, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
      std::string key = line.substr(0, eq), value = line.substr(eq + 1);
      trim(key);
      trim(value);
      if (key.empty() || value.empty())
        throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
      if (!cfg.kv_.emplace(key, value).second)
        throw ConfigError("duplicate key '" + key + "'");
    }
    return cfg;
  }

  static ExperimentConfig parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str());
  }

  bool has(const std::string& key) const { return kv_.count(key) != 0; }

  void set(const std::string& key, const std::string& value) { kv_[key] = value; }

  std::string str(const std::string& key) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) throw ConfigError("missing required key '" + key + "'");
    return it->second;
  }

  std::string str_or(const std::string& key, const std::string& dflt) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? dflt : it->second;
  }

  std::uint64_t u64(const std::string& key) const { return to_u64(key, str(key)); }

  std::uint64_t u64_or(const std::string& key, std::uint64_t dflt) const {
    return has(key) ? u64(key) : dflt;
  }

  double real(const std::string& key) const { return to_double(key, str(key)); }

  std::vector<double> real_list(const std::string& key) const {
    std::vector<double> out;
    for (const auto& tok : expand(str(key))) out.push_back(to_double(key, tok));
    if (out.empty()) throw ConfigError("key '" + key + "' yields an empty grid");
    return out;
  }

  std::vector<std::uint64_t> u64_list(const std::string& key) const {
    std::vector<std::uint64_t> out;
    for (const auto& tok : expand(str(key))) out.push_back(to_u64(key, tok));
    if (out.empty()) throw ConfigError("key '" + key + "' yields an empty grid");
    return out;
  }

  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  static void trim(std::string& s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  }

  static std::uint64_t to_u64(const std::string& key, const std::string& v) {
    try {
      std::size_t used = 0;
      const auto r = std::stoull(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return r;
    } catch (const std::exception&) {
      throw ConfigError("key '" + key + "': '" + v + "' is not an unsigned integer");
    }
  }

  static double to_double(const std::string& key, const std::string& v) {
    try {
      std::size_t used = 0;
      const double r = std::stod(v, &used);
      if (used != v.size() || !std::isfinite(r)) throw std::invalid_argument(v);
      return r;
    } catch (const std::exception&) {
      throw ConfigError("key '" + key + "': '" + v + "' is not a number");
    }
  }

  static std::vector<std::string> expand(const std::string& value) {
    std::vector<std::string> out;
    std::istringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      trim(item);
      if (item.empty()) continue;
      const auto c1 = item.find(':');
      if (c1 == std::string::npos) {
        out.push_back(item);
        continue;
      }
      const auto c2 = item.find(':', c1 + 1);
      if (c2 == std::string::npos)
        throw ConfigError("range must be start:stop:step, got '" + item + "'");
      const double start = std::stod(item.substr(0, c1));
      const double stop = std::stod(item.substr(c1 + 1, c2 - c1 - 1));
      const double step = std::stod(item.substr(c2 + 1));
      if (step <= 0) throw ConfigError("range step must be positive");
      for (double v = start; v <= stop + 1e-9; v += step) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.10g", v);
        out.emplace_back(buf);
      }
    }
    return out;
  }

  std::map<std::string, std::string> kv_;
};

namespace detail {

inline void write_manifest(const std::filesystem::path& csv_path,
                           const ExperimentConfig& cfg) {
  std::ofstream out(csv_path.string() + ".manifest");
  if (!out) throw ConfigError("cannot write manifest next to " + csv_path.string());
  out << "artifact = " << kArtifactName << ' ' << kArtifactVersion << '\n';
  for (const auto& [k, v] : cfg.entries()) out << k << " = " << v << '\n';
}

inline std::ofstream open_csv(const std::filesystem::path& path) {
  if (!path.parent_path().empty())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

inline std::size_t ceil_pow(std::size_t n, double r) {
  return static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(n), r)));
}

}  // namespace detail

/// Overrides passed from the command line on top of the config file.
struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> workers;
  std::optional<std::string> orientation;
};

namespace detail {

inline void apply_overrides(ExperimentConfig& cfg, const RunOverrides& ov) {
  if (ov.seed) cfg.set("seed", std::to_string(*ov.seed));
  if (ov.out) cfg.set("out", *ov.out);
  if (ov.workers) cfg.set("workers", std::to_string(*ov.workers));
  if (ov.orientation) cfg.set("orientation", *ov.orientation);
}

}  // namespace detail

/// Sparsity sweep: success fraction of both pipelines at
/// m = 2*floor(theta*b)*ceil(log_q n) over seeded trials, b = ceil(n^r).
/// Writes recovery_sweep.csv with columns theta,method,b,success_fraction.
inline std::filesystem::path run_recovery_sweep(const ExperimentConfig& cfg) {
  const std::size_t n = cfg.u64("n");
  const std::uint64_t q = cfg.u64("q");
  const auto r_grid = cfg.real_list("r");
  const auto theta_grid = cfg.real_list("theta");
  const std::size_t trials = cfg.u64_or("trials", 200);
  const std::uint64_t seed = cfg.u64_or("seed", 1);
  const auto workers = static_cast<unsigned>(cfg.u64_or("workers", 1));
  if (trials == 0) throw ConfigError("trials must be >= 1");
  for (double th : theta_grid)
    if (th < 0.2 - 1e-12 || th > 3.0 + 1e-12)
      throw ConfigError("theta grid must stay within [0.2, 3]");

  const std::filesystem::path csv =
      std::filesystem::path(cfg.str("out")) / "recovery_sweep.csv";
  auto out = detail::open_csv(csv);
  out << "theta,method,b,success_fraction\n";

  const std::uint32_t s_formula = ceil_log(q, n);
  for (std::size_t ri = 0; ri < r_grid.size(); ++ri) {
    const std::size_t b = detail::ceil_pow(n, r_grid[ri]);
    for (std::size_t ti = 0; ti < theta_grid.size(); ++ti) {
      const double theta = theta_grid[ti];
      const auto b_eff =
          static_cast<std::size_t>(theta * static_cast<double>(b));
      const std::size_t m = 2 * b_eff * s_formula;

      std::vector<char> fin(trials, 0), real(trials, 0);
      if (b_eff == 0) {
        // zero measurements cannot distinguish nonzero signals
      } else {
        // decoder radius floor(theta*b); the code cannot exceed n parity symbols
        const std::size_t b_code = std::min(b_eff, (n - 1) / 2);
        const SensingScheme scheme = SensingScheme::build(q, n, b_code);
        detail::parallel_for(trials, workers, [&](std::size_t t) {
          Rng sig_rng(split_seed(seed, {1, ri, ti, t}));
          const SparseSignal x = random_support_ones_signal(n, b, sig_rng);
          try {
            fin[t] = scheme.recover(scheme.measure(x)) == x;
          } catch (const Error&) {
            fin[t] = 0;
          }
          const RealSensing rs = build_real(m, n, split_seed(seed, {2, ri, ti, t}));
          std::vector<double> xr(n, 0.0);
          for (std::size_t j : x.support) xr[j] = 1.0;
          const auto y = measure_real(rs, xr);
          try {
            const auto xhat = omp_recover(rs, y, b);
            real[t] = real_recovery_error_free(xr, xhat);
          } catch (const IllConditionedActiveSet&) {
            real[t] = 0;
          }
        });
      }
      const auto frac = [&](const std::vector<char>& v) {
        std::size_t hits = 0;
        for (char c : v) hits += c;
        return static_cast<double>(hits) / static_cast<double>(trials);
      };
      out << detail::fmt_double(theta) << ",finite," << b << ','
          << detail::fmt_double(frac(fin)) << '\n';
      out << detail::fmt_double(theta) << ",real," << b << ','
          << detail::fmt_double(frac(real)) << '\n';
    }
  }
  out.close();
  detail::write_manifest(csv, cfg);
  return csv;
}

/// Pure formula table m = 2*ceil(n^r)*ceil(log_q n) over q = 2^i grids.
/// Writes measurement_saturation.csv with columns log2_q,n,r,m.
inline std::filesystem::path run_measurement_saturation(const ExperimentConfig& cfg) {
  const auto n_grid = cfg.u64_list("n");
  const auto i_grid = cfg.has("q_exp") ? cfg.u64_list("q_exp") : [] {
    std::vector<std::uint64_t> v;
    for (std::uint64_t i = 1; i <= 16; ++i) v.push_back(i);
    return v;
  }();
  const auto r_grid = cfg.real_list("r");
  const std::filesystem::path csv =
      std::filesystem::path(cfg.str("out")) / "measurement_saturation.csv";
  auto out = detail::open_csv(csv);
  out << "log2_q,n,r,m\n";
  for (std::uint64_t n : n_grid) {
    for (double r : r_grid) {
      const std::size_t b = detail::ceil_pow(static_cast<std::size_t>(n), r);
      for (std::uint64_t i : i_grid) {
        const std::uint64_t q = std::uint64_t{1} << i;
        const std::size_t m = 2 * b * ceil_log(q, n);
        out << i << ',' << n << ',' << detail::fmt_double(r) << ',' << m << '\n';
      }
    }
  }
  out.close();
  detail::write_manifest(csv, cfg);
  return csv;
}

namespace detail {

inline std::filesystem::path write_track_csv(const std::filesystem::path& path,
                                             const ExperimentConfig& cfg,
                                             const std::vector<double>& fin,
                                             const std::vector<double>& real,
                                             const std::vector<double>& floor) {
  auto out = open_csv(path);
  out << "t,err_finite,err_real,quant_floor\n";
  for (std::size_t i = 0; i < fin.size(); ++i)
    out << (i + 1) << ',' << fmt_double(fin[i]) << ',' << fmt_double(real[i]) << ','
        << fmt_double(floor[i]) << '\n';
  out.close();
  write_manifest(path, cfg);
  return path;
}

}  // namespace detail

/// Tracking experiment on synthetic sparse walks (one trace file per b) or an
/// ingested CSV series. Trace schema: t,err_finite,err_real,quant_floor.
inline std::vector<std::filesystem::path> run_tracking(const ExperimentConfig& cfg) {
  const std::uint64_t q = cfg.u64("q");
  const std::uint64_t seed = cfg.u64_or("seed", 1);
  const std::filesystem::path out_dir(cfg.str("out"));
  std::vector<std::filesystem::path> written;

  if (cfg.str("experiment") == "track_synthetic") {
    const std::size_t n = cfg.u64("n");
    const std::size_t t = cfg.u64("t");
    const auto r_grid = cfg.real_list("r");
    for (std::size_t ri = 0; ri < r_grid.size(); ++ri) {
      const std::size_t b = detail::ceil_pow(n, r_grid[ri]);
      const RealSeries raw = synthetic_sparse_walk(n, t, b, split_seed(seed, {3, ri}));
      const TrackedSeries series = quantize(raw, q);
      const std::size_t budget = std::max<std::size_t>({b, series.b_max, 1});
      const SensingScheme scheme = SensingScheme::build(q, n, budget);
      const RealSensing real =
          build_real(scheme.measurement_count(), n, split_seed(seed, {4, ri}));
      const auto fin = track_finite(series, scheme);
      const auto re = track_real(series, real, budget);
      written.push_back(detail::write_track_csv(
          out_dir / ("track_b" + std::to_string(b) + ".csv"), cfg, fin.error, re.error,
          quantization_floor(series)));
    }
    return written;
  }

  // track_csv
  const auto orientation = cfg.str_or("orientation", "rows");
  if (orientation != "rows" && orientation != "cols")
    throw ConfigError("orientation must be 'rows' or 'cols'");
  const RealSeries raw = ingest_csv(cfg.str("input"), orientation == "rows"
                                                          ? Orientation::RowsAreTime
                                                          : Orientation::ColumnsAreTime);
  const TrackedSeries series = quantize(raw, q);
  std::size_t budget = std::max<std::size_t>(series.b_max, 1);
  if (cfg.has("b")) {
    budget = cfg.u64("b");
    if (budget < series.b_max)
      throw ConfigError("configured b is below the observed b_max = " +
                        std::to_string(series.b_max));
  }
  const SensingScheme scheme = SensingScheme::build(q, series.n, budget);
  const RealSensing real =
      build_real(scheme.measurement_count(), series.n, split_seed(seed, {4}));
  const auto fin = track_finite(series, scheme);
  const auto re = track_real(series, real, budget);
  written.push_back(detail::write_track_csv(out_dir / "track.csv", cfg, fin.error,
                                            re.error, quantization_floor(series)));
  return written;
}

/// Noise sweep: exact and conditional-exact recovery fractions per grid
/// point. For the worst-case model the trials cycle through the adversarial
/// placement strategies at maximal allowed weight; the conditional column
/// counts only trials whose realized noise stays within the outer radius.
/// Writes noise_suite.csv with columns
/// model,parameter,trials,exact_fraction,conditional_exact_fraction.
inline std::filesystem::path run_noise_suite(const ExperimentConfig& cfg) {
  const std::uint64_t q = cfg.u64("q");
  const std::size_t n = cfg.u64("n");
  const std::size_t b = cfg.u64("b");
  const std::string model = cfg.str("model");
  const std::size_t trials = cfg.u64_or("trials", 500);
  const double rate_margin = cfg.has("rate_margin") ? cfg.real("rate_margin") : 0.5;
  const std::uint64_t seed = cfg.u64_or("seed", 1);
  const auto workers = static_cast<unsigned>(cfg.u64_or("workers", 1));
  if (trials == 0) throw ConfigError("trials must be >= 1");
  if (model != "qsym" && model != "worstcase")
    throw ConfigError("model must be 'qsym' or 'worstcase'");
  std::optional<OuterParams> outer;
  if (cfg.has("outer_u") || cfg.has("outer_n")) {
    outer = OuterParams{static_cast<std::uint32_t>(cfg.u64("outer_u")),
                        static_cast<std::size_t>(cfg.u64("outer_n"))};
  }
  const auto params = cfg.real_list(model == "qsym" ? "lambda" : "delta");

  const std::filesystem::path csv =
      std::filesystem::path(cfg.str("out")) / "noise_suite.csv";
  auto out = detail::open_csv(csv);
  out << "model,parameter,trials,exact_fraction,conditional_exact_fraction\n";

  constexpr AdversarialStrategy kStrategies[] = {AdversarialStrategy::RandomSupport,
                                                 AdversarialStrategy::Burst,
                                                 AdversarialStrategy::TargetInner};
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    const double param = params[pi];
    const NoiseModel noise = model == "qsym"
                                 ? NoiseModel(QSymmetricNoise{param})
                                 : NoiseModel(WorstCaseNoise{param});
    const NoisyScheme scheme = NoisyScheme::build(q, n, b, noise, rate_margin, outer);
    std::vector<char> exact(trials, 0), within(trials, 0);
    detail::parallel_for(trials, workers, [&](std::size_t t) {
      Rng sig_rng(split_seed(seed, {6, pi, t}));
      const SparseSignal x = random_sparse_signal(q, n, b, sig_rng);
      Rng noise_rng(split_seed(seed, {7, pi, t}));
      const FieldVector nz =
          scheme.draw_noise(noise, noise_rng, kStrategies[t % 3]);
      within[t] = scheme.corrupted_outer_symbols(nz) <= scheme.outer_radius();
      const FieldVector y = scheme.measure(x) + nz;
      try {
        exact[t] = scheme.recover_noisy(y) == x;
      } catch (const Error&) {
        exact[t] = 0;
      }
    });
    std::size_t hits = 0, cond_hits = 0, cond_total = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      hits += exact[t];
      if (within[t]) {
        ++cond_total;
        cond_hits += exact[t];
      }
    }
    const double exact_frac = static_cast<double>(hits) / static_cast<double>(trials);
    const double cond_frac =
        cond_total == 0 ? 1.0
                        : static_cast<double>(cond_hits) / static_cast<double>(cond_total);
    out << model << ',' << detail::fmt_double(param) << ',' << trials << ','
        << detail::fmt_double(exact_frac) << ',' << detail::fmt_double(cond_frac) << '\n';
  }
  out.close();
  detail::write_manifest(csv, cfg);
  return csv;
}

/// Dispatches on the `experiment` key. Returns the files written.
inline std::vector<std::filesystem::path> run_experiment(ExperimentConfig cfg,
                                                         const RunOverrides& ov = {}) {
  detail::apply_overrides(cfg, ov);
  const std::string id = cfg.str("experiment");
  cfg.str("out");  // required everywhere
  if (id == "recovery_sweep") return {run_recovery_sweep(cfg)};
  if (id == "measurement_saturation") return {run_measurement_saturation(cfg)};
  if (id == "track_synthetic" || id == "track_csv") return run_tracking(cfg);
  if (id == "noise_suite") return {run_noise_suite(cfg)};
  throw ConfigError("unknown experiment '" + id + "'");
}

}  // namespace ffcs
