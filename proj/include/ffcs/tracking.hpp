#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "ffcs/baseline.hpp"
#include "ffcs/errors.hpp"
#include "ffcs/rng.hpp"
#include "ffcs/sensing.hpp"

namespace ffcs {

/// t frames of dimension n.
using RealSeries = std::vector<std::vector<double>>;

/// A quantized discrete-valued time series: per-frame bin indices in
/// [0, q), the value map back to physical scale, per-step sparse diffs and
/// their maximum weight, and the original frames for error traces.
///
/// The diff of two consecutive frames is taken in the integer bin-index
/// domain and reduced mod q into the canonical indices of F_q. The field is
/// only a carrier here: the true bin index lives in [0, q), so adding the
/// recovered diff back mod q cancels the wraparound and reconstruction is
/// exact whenever recovery of the field element is exact. Zero diffs map to
/// the field zero, so sparsity is preserved.
struct TrackedSeries {
  std::size_t n = 0, t = 0;
  std::uint64_t q = 0;
  bool binned = false;   // false: values lie on a lattice, dequantization is exact
  double origin = 0.0, step = 1.0;
  std::vector<std::vector<std::uint32_t>> frames;
  std::vector<SparseSignal> diffs;  // t - 1 entries, field canonical indices
  std::size_t b_max = 0;
  RealSeries original;

  double dequant(std::uint32_t idx) const {
    return origin + (static_cast<double>(idx) + (binned ? 0.5 : 0.0)) * step;
  }
};

struct DiffEncoding {
  std::vector<SparseSignal> diffs;
  std::size_t b_max = 0;
};

/// Per-step diffs in the integer bin domain, reduced mod q to field indices.
inline DiffEncoding diff_encode(const std::vector<std::vector<std::uint32_t>>& frames,
                                std::uint64_t q) {
  DiffEncoding enc;
  if (frames.size() < 2) return enc;
  const std::size_t n = frames.front().size();
  enc.diffs.reserve(frames.size() - 1);
  for (std::size_t i = 0; i + 1 < frames.size(); ++i) {
    SparseSignal d;
    d.n = n;
    for (std::size_t j = 0; j < n; ++j) {
      const std::int64_t raw = static_cast<std::int64_t>(frames[i + 1][j]) -
                               static_cast<std::int64_t>(frames[i][j]);
      if (raw == 0) continue;
      const std::uint64_t v = static_cast<std::uint64_t>(
          ((raw % static_cast<std::int64_t>(q)) + static_cast<std::int64_t>(q)) %
          static_cast<std::int64_t>(q));
      d.support.push_back(j);
      d.values.push_back(v);
    }
    enc.b_max = std::max(enc.b_max, d.weight());
    enc.diffs.push_back(std::move(d));
  }
  return enc;
}

namespace detail {

inline void require_rectangular(const RealSeries& series) {
  if (series.empty() || series.front().empty())
    throw InvalidArgument("series must have at least one frame and one entry");
  for (const auto& f : series)
    if (f.size() != series.front().size())
      throw RaggedRows("series frames have differing dimensions");
}

}  // namespace detail

/// Quantizes a real series onto q levels using the global min/max over all
/// entries (two-pass, offline). When the series already takes at most q
/// values lying on an evenly spaced lattice -- natively discrete data, or
/// exactly q evenly spaced levels -- the lattice itself becomes the value
/// map and quantization is lossless. Otherwise entries map to bins of width
/// (max-min)/q, dequantizing to bin centers.
inline TrackedSeries quantize(const RealSeries& series, std::uint64_t q) {
  detail::require_rectangular(series);
  if (q < 2) throw InvalidArgument("quantize: q must be >= 2");
  TrackedSeries out;
  out.t = series.size();
  out.n = series.front().size();
  out.q = q;
  out.original = series;

  double lo = series[0][0], hi = series[0][0];
  std::set<double> distinct;
  for (const auto& frame : series) {
    for (double v : frame) {
      if (!std::isfinite(v)) throw NonNumericCell("quantize: non-finite entry");
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      if (distinct.size() <= q) distinct.insert(v);
    }
  }
  if (hi == lo) throw ConstantSeries("quantize: zero-width value range");

  bool lattice = false;
  double lat_step = 1.0;
  if (distinct.size() <= q) {
    double gap = hi - lo;
    double prev = *distinct.begin();
    for (auto it = std::next(distinct.begin()); it != distinct.end(); ++it) {
      gap = std::min(gap, *it - prev);
      prev = *it;
    }
    if (gap > 0) {
      lattice = true;
      for (double v : distinct) {
        const double r = (v - lo) / gap;
        const double ri = std::round(r);
        if (std::abs(r - ri) > 1e-9 * std::max(1.0, std::abs(r)) || ri < 0 ||
            ri > static_cast<double>(q - 1)) {
          lattice = false;
          break;
        }
      }
      lat_step = gap;
    }
  }

  out.frames.assign(out.t, std::vector<std::uint32_t>(out.n, 0));
  if (lattice) {
    out.binned = false;
    out.origin = lo;
    out.step = lat_step;
    for (std::size_t i = 0; i < out.t; ++i)
      for (std::size_t j = 0; j < out.n; ++j)
        out.frames[i][j] =
            static_cast<std::uint32_t>(std::llround((series[i][j] - lo) / lat_step));
  } else {
    out.binned = true;
    out.origin = lo;
    out.step = (hi - lo) / static_cast<double>(q);
    for (std::size_t i = 0; i < out.t; ++i) {
      for (std::size_t j = 0; j < out.n; ++j) {
        auto idx = static_cast<std::int64_t>((series[i][j] - lo) / out.step);
        if (idx < 0) idx = 0;
        if (idx > static_cast<std::int64_t>(q - 1)) idx = static_cast<std::int64_t>(q - 1);
        out.frames[i][j] = static_cast<std::uint32_t>(idx);
      }
    }
  }
  auto enc = diff_encode(out.frames, q);
  out.diffs = std::move(enc.diffs);
  out.b_max = enc.b_max;
  return out;
}

/// ||a - b||_2 / sqrt(n)
inline double rms_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(a.size()));
}

/// Error attributable to binning alone: the floor for any quantized tracker.
inline std::vector<double> quantization_floor(const TrackedSeries& series) {
  std::vector<double> out(series.t, 0.0);
  std::vector<double> deq(series.n);
  for (std::size_t i = 0; i < series.t; ++i) {
    for (std::size_t j = 0; j < series.n; ++j) deq[j] = series.dequant(series.frames[i][j]);
    out[i] = rms_distance(series.original[i], deq);
  }
  return out;
}

struct TrackOutput {
  std::vector<double> error;  // per-step tracking error vs the original series
  RealSeries estimates;       // reconstructed frames (dequantized / real)
};

/// Algebraic tracker: sense each diff with the finite-field scheme, recover
/// exactly, accumulate bin indices mod q. Requires a scheme over the same q
/// with budget b >= b_max, in which case the reconstruction equals the
/// quantized series frame for frame and the error trace equals the
/// quantization floor.
inline TrackOutput track_finite(const TrackedSeries& series, const SensingScheme& scheme) {
  if (scheme.q() != series.q)
    throw InvalidArgument("track_finite: scheme alphabet differs from series");
  if (scheme.n() != series.n)
    throw InvalidArgument("track_finite: scheme dimension differs from series");
  if (scheme.b() < series.b_max)
    throw InvalidArgument("track_finite: scheme budget below the series b_max");
  TrackOutput out;
  out.error.reserve(series.t);
  std::vector<std::uint32_t> z = series.frames.front();
  std::vector<double> deq(series.n);
  for (std::size_t j = 0; j < series.n; ++j) deq[j] = series.dequant(z[j]);
  out.error.push_back(rms_distance(series.original.front(), deq));
  out.estimates.push_back(deq);
  for (std::size_t i = 0; i + 1 < series.t; ++i) {
    const FieldVector y = scheme.measure(series.diffs[i]);
    const SparseSignal d = scheme.recover(y);
    for (std::size_t u = 0; u < d.support.size(); ++u) {
      const std::size_t j = d.support[u];
      z[j] = static_cast<std::uint32_t>((z[j] + d.values[u]) % series.q);
    }
    for (std::size_t j = 0; j < series.n; ++j) deq[j] = series.dequant(z[j]);
    out.error.push_back(rms_distance(series.original[i + 1], deq));
    out.estimates.push_back(deq);
  }
  return out;
}

/// Real-valued tracker: sense the value-scale diffs with a Gaussian matrix,
/// recover greedily, accumulate. Recovery errors accumulate in the estimate
/// rather than aborting; a degenerate greedy refit contributes a zero diff.
inline TrackOutput track_real(const TrackedSeries& series, const RealSensing& real,
                              std::size_t b) {
  if (real.n != series.n)
    throw InvalidArgument("track_real: sensing dimension differs from series");
  TrackOutput out;
  out.error.reserve(series.t);
  std::vector<double> z(series.n);
  for (std::size_t j = 0; j < series.n; ++j) z[j] = series.dequant(series.frames[0][j]);
  out.error.push_back(rms_distance(series.original.front(), z));
  out.estimates.push_back(z);
  std::vector<double> diff(series.n);
  for (std::size_t i = 0; i + 1 < series.t; ++i) {
    for (std::size_t j = 0; j < series.n; ++j)
      diff[j] = (static_cast<double>(series.frames[i + 1][j]) -
                 static_cast<double>(series.frames[i][j])) *
                series.step;
    const std::vector<double> y = measure_real(real, diff);
    std::vector<double> est;
    try {
      est = omp_recover(real, y, b);
    } catch (const IllConditionedActiveSet&) {
      est.assign(series.n, 0.0);
    }
    for (std::size_t j = 0; j < series.n; ++j) z[j] += est[j];
    out.error.push_back(rms_distance(series.original[i + 1], z));
    out.estimates.push_back(z);
  }
  return out;
}

enum class Orientation { RowsAreTime, ColumnsAreTime };

/// Rectangular numeric CSV -> t x n real series. Cells must parse fully as
/// finite numbers; ragged rows and blank/NaN cells are rejected.
inline RealSeries ingest_csv(const std::string& path, Orientation orientation) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("ingest_csv: cannot open " + path);
  RealSeries rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
    std::vector<double> row;
    std::size_t start = 0;
    while (start <= line.size()) {
      std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) comma = line.size();
      std::string cell = line.substr(start, comma - start);
      // trim
      while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.erase(cell.begin());
      while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t')) cell.pop_back();
      if (cell.empty()) throw NonNumericCell("ingest_csv: blank cell");
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        throw NonNumericCell("ingest_csv: cell '" + cell + "' is not numeric");
      }
      if (used != cell.size() || !std::isfinite(v))
        throw NonNumericCell("ingest_csv: cell '" + cell + "' is not a finite number");
      row.push_back(v);
      start = comma + 1;
      if (comma == line.size()) break;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw RaggedRows("ingest_csv: row " + std::to_string(rows.size() + 1) +
                       " has a different cell count");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InvalidArgument("ingest_csv: empty file");
  if (orientation == Orientation::RowsAreTime) return rows;
  RealSeries cols(rows.front().size(), std::vector<double>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.front().size(); ++j) cols[j][i] = rows[i][j];
  return cols;
}

/// Synthetic sparse-walk series: x_1 uniform on [-1,1]^n, each step adds b
/// uniform values at b uniform positions.
inline RealSeries synthetic_sparse_walk(std::size_t n, std::size_t t, std::size_t b,
                                        std::uint64_t seed) {
  if (n < 1 || t < 1 || b > n) throw InvalidArgument("synthetic_sparse_walk: bad shape");
  Rng rng(seed);
  RealSeries series(t, std::vector<double>(n));
  for (double& v : series[0]) v = rng.uniform(-1.0, 1.0);
  for (std::size_t i = 1; i < t; ++i) {
    series[i] = series[i - 1];
    const auto pos = rng.sample_distinct(n, b);
    for (std::size_t j : pos) series[i][j] += rng.uniform(-1.0, 1.0);
  }
  return series;
}

}  // namespace ffcs
