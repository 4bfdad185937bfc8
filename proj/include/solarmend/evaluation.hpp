#ifndef SOLARMEND_EVALUATION_HPP
#define SOLARMEND_EVALUATION_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "solarmend/csv_io.hpp"
#include "solarmend/data_pipeline.hpp"
#include "solarmend/parallel.hpp"
#include "solarmend/series.hpp"

namespace solarmend {

struct Scores {
  double mae = 0.0;
  double rmse = 0.0;
  std::size_t n = 0;
};

/// MAE and RMSE over entries with keep == 0 whose ground truth is observed.
inline Scores score(const std::vector<double>& imputed, const std::vector<double>& truth,
                    const std::vector<std::uint8_t>& keep, const std::vector<std::uint8_t>& truth_observed) {
  if (imputed.size() != truth.size() || keep.size() != truth.size() || truth_observed.size() != truth.size()) {
    throw DimensionError("score: imputed, truth and masks must have equal length");
  }
  Scores s;
  double abs_sum = 0.0, sq_sum = 0.0;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    if (keep[k] || !truth_observed[k]) continue;
    const double e = imputed[k] - truth[k];
    abs_sum += std::abs(e);
    sq_sum += e * e;
    ++s.n;
  }
  if (s.n == 0) throw DataError("score: no corrupted entry has an observed ground truth");
  s.mae = abs_sum / static_cast<double>(s.n);
  s.rmse = std::sqrt(sq_sum / static_cast<double>(s.n));
  return s;
}

inline Scores score(const PvFleetSeries& imputed, const PvFleetSeries& truth, const MissingMask& mask) {
  return score(imputed.values.storage(), truth.values.storage(), mask.keep, truth.observed);
}

// ---------------------------------------------------------------------------
// STL

struct StlOptions {
  std::size_t period = kStepsPerDay;
  std::size_t seasonal_window = 7;  // sub-series points
  std::size_t trend_window = 0;     // 0: next odd >= 1.5 * period
  std::size_t lowpass_window = 0;   // 0: next odd >= period
  int iterations = 2;
};

struct StlDecomposition {
  std::vector<double> trend, seasonal, remainder;
  std::size_t period = 0;
};

namespace detail {

inline std::size_t next_odd(double x) {
  auto v = static_cast<std::size_t>(std::ceil(x));
  return v % 2 == 0 ? v + 1 : v;
}

/// Local-linear tricube fit of y (at positions 0..m-1) evaluated at x,
/// using the q nearest points.
inline double loess_at(const std::vector<double>& y, std::size_t q, double x) {
  const std::size_t m = y.size();
  std::size_t lo = 0, hi = m - 1;
  double h;
  if (q < m) {
    const double start = std::round(x) - static_cast<double>(q / 2);
    lo = static_cast<std::size_t>(std::clamp(start, 0.0, static_cast<double>(m - q)));
    hi = lo + q - 1;
    h = std::max(x - static_cast<double>(lo), static_cast<double>(hi) - x);
  } else {
    h = std::max(x, static_cast<double>(m - 1) - x) + static_cast<double>(q - m) / 2.0;
  }
  h = std::max(h, 0.5) * 1.0000001;
  double sw = 0.0, sx = 0.0, sy = 0.0;
  thread_local std::vector<double> w;
  w.assign(hi - lo + 1, 0.0);
  for (std::size_t j = lo; j <= hi; ++j) {
    const double u = std::abs(static_cast<double>(j) - x) / h;
    const double c = u < 1.0 ? 1.0 - u * u * u : 0.0;
    const double wj = c * c * c;
    w[j - lo] = wj;
    sw += wj;
    sx += wj * static_cast<double>(j);
    sy += wj * y[j];
  }
  if (sw <= 0.0) return y[static_cast<std::size_t>(std::clamp(std::round(x), 0.0, static_cast<double>(m - 1)))];
  const double xbar = sx / sw, ybar = sy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t j = lo; j <= hi; ++j) {
    const double d = static_cast<double>(j) - xbar;
    sxx += w[j - lo] * d * d;
    sxy += w[j - lo] * d * (y[j] - ybar);
  }
  const double range = static_cast<double>(hi - lo);
  if (sxx <= 1e-10 * range * range * sw) return ybar;
  return ybar + sxy / sxx * (x - xbar);
}

inline std::vector<double> loess(const std::vector<double>& y, std::size_t q) {
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = loess_at(y, q, static_cast<double>(i));
  return out;
}

inline std::vector<double> moving_average(const std::vector<double>& y, std::size_t len) {
  std::vector<double> out(y.size() - len + 1);
  double acc = 0.0;
  for (std::size_t i = 0; i < len; ++i) acc += y[i];
  out[0] = acc / static_cast<double>(len);
  for (std::size_t i = 1; i < out.size(); ++i) {
    acc += y[i + len - 1] - y[i - 1];
    out[i] = acc / static_cast<double>(len);
  }
  return out;
}

}  // namespace detail

/// Seasonal-trend decomposition by loess. The seasonal component is
/// re-centered to zero mean over every full cycle (the removed mean moves to
/// the trend); remainder = series - trend - seasonal.
inline StlDecomposition stl_decompose(const std::vector<double>& y, const StlOptions& o = {}) {
  const std::size_t T = y.size(), np = o.period;
  if (np < 2) throw Error("stl: period must be at least 2");
  if (T < 2 * np) {
    throw DataError("stl: series of length " + std::to_string(T) + " shorter than two periods (" +
                    std::to_string(2 * np) + ")");
  }
  const std::size_t ns = std::max<std::size_t>(3, o.seasonal_window | 1);
  const std::size_t nt = o.trend_window ? o.trend_window : detail::next_odd(1.5 * static_cast<double>(np));
  const std::size_t nl = o.lowpass_window ? o.lowpass_window : detail::next_odd(static_cast<double>(np));

  StlDecomposition d;
  d.period = np;
  d.trend.assign(T, 0.0);
  d.seasonal.assign(T, 0.0);
  std::vector<double> cycle(T + 2 * np), sub, detrended(T);
  for (int it = 0; it < std::max(1, o.iterations); ++it) {
    for (std::size_t t = 0; t < T; ++t) detrended[t] = y[t] - d.trend[t];
    // cycle-subseries smoothing, extended one period on each side
    for (std::size_t p = 0; p < np; ++p) {
      sub.clear();
      for (std::size_t t = p; t < T; t += np) sub.push_back(detrended[t]);
      const auto m = static_cast<long>(sub.size());
      for (long j = -1; j <= m; ++j) {
        cycle[static_cast<std::size_t>(j + 1) * np + p] = detail::loess_at(sub, ns, static_cast<double>(j));
      }
    }
    // positions beyond T in the last extended cycle are unused
    const std::size_t ext = T + 2 * np;
    std::vector<double> c(cycle.begin(), cycle.begin() + static_cast<long>(ext));
    auto low = detail::moving_average(c, np);
    low = detail::moving_average(low, np);
    low = detail::moving_average(low, 3);
    low = detail::loess(low, nl);
    for (std::size_t t = 0; t < T; ++t) d.seasonal[t] = cycle[np + t] - low[t];
    std::vector<double> deseason(T);
    for (std::size_t t = 0; t < T; ++t) deseason[t] = y[t] - d.seasonal[t];
    d.trend = detail::loess(deseason, nt);
  }
  for (std::size_t start = 0; start + np <= T; start += np) {
    double mean = 0.0;
    for (std::size_t t = start; t < start + np; ++t) mean += d.seasonal[t];
    mean /= static_cast<double>(np);
    for (std::size_t t = start; t < start + np; ++t) {
      d.seasonal[t] -= mean;
      d.trend[t] += mean;
    }
  }
  d.remainder.resize(T);
  for (std::size_t t = 0; t < T; ++t) d.remainder[t] = y[t] - d.trend[t] - d.seasonal[t];
  return d;
}

// ---------------------------------------------------------------------------
// Outliers

/// Linear-interpolation quantile of a sorted sample.
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw DataError("quantile of an empty sample");
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

/// Fraction of points outside [Q1 - 1.5 IQR, Q3 + 1.5 IQR].
inline double outlier_fraction(const std::vector<double>& x) {
  if (x.size() < 4) throw DataError("outlier_fraction: need at least 4 points, got " + std::to_string(x.size()));
  std::vector<double> s = x;
  std::sort(s.begin(), s.end());
  const double q1 = quantile_sorted(s, 0.25), q3 = quantile_sorted(s, 0.75);
  const double iqr = q3 - q1;
  const double lo = q1 - 1.5 * iqr, hi = q3 + 1.5 * iqr;
  std::size_t flagged = 0;
  for (double v : x) flagged += (v < lo || v > hi) ? 1 : 0;
  return static_cast<double>(flagged) / static_cast<double>(x.size());
}

struct DomainMetrics {
  std::vector<double> od;  // outlier fraction difference, imputed - truth
  std::vector<double> sd;  // seasonal amplitude difference, imputed - truth
};

/// Mean absolute seasonal component, the amplitude compared by the SD metric.
inline double seasonal_amplitude(const StlDecomposition& d) {
  double acc = 0.0;
  for (double v : d.seasonal) acc += std::abs(v);
  return acc / static_cast<double>(d.seasonal.size());
}

/// Per-inverter OD (on the STL remainder) and SD between two fully observed
/// series of equal shape.
inline DomainMetrics domain_metrics(const PvFleetSeries& imputed, const PvFleetSeries& truth,
                                    std::size_t period = kStepsPerDay) {
  if (imputed.steps() != truth.steps() || imputed.nodes() != truth.nodes()) {
    throw DimensionError("domain_metrics: series shapes differ");
  }
  const std::size_t T = truth.steps(), n = truth.nodes();
  DomainMetrics m;
  m.od.assign(n, 0.0);
  m.sd.assign(n, 0.0);
  StlOptions o;
  o.period = period;
  parallel_for(n, [&](std::size_t i) {
    std::vector<double> a(T), b(T);
    for (std::size_t t = 0; t < T; ++t) {
      a[t] = imputed.value(t, i);
      b[t] = truth.value(t, i);
    }
    const auto da = stl_decompose(a, o), db = stl_decompose(b, o);
    m.od[i] = outlier_fraction(da.remainder) - outlier_fraction(db.remainder);
    m.sd[i] = seasonal_amplitude(da) - seasonal_amplitude(db);
  });
  return m;
}

// ---------------------------------------------------------------------------
// Reports

struct InverterScore {
  std::string id;
  double mae = kNaN, rmse = kNaN;
  std::size_t n = 0;
  double od = 0.0, sd = 0.0;
};

struct EvalReport {
  std::string method;
  std::string scenario;
  CorruptionConfig corruption;
  double mae = 0.0, rmse = 0.0;
  std::size_t n = 0;
  std::size_t period = kStepsPerDay;
  std::vector<InverterScore> inverters;

  double mean_od() const {
    double a = 0.0;
    for (const auto& r : inverters) a += r.od;
    return inverters.empty() ? 0.0 : a / static_cast<double>(inverters.size());
  }
  double mean_sd() const {
    double a = 0.0;
    for (const auto& r : inverters) a += r.sd;
    return inverters.empty() ? 0.0 : a / static_cast<double>(inverters.size());
  }
};

struct EvalOptions {
  std::size_t period = kStepsPerDay;
  std::string method;
};

/// Scores d_r against the ground truth (values = D_A, observed = D_O) on the
/// mask-0 entries and computes the domain metrics per inverter.
inline EvalReport evaluate_run(const PvFleetSeries& d_r, const PvFleetSeries& truth, const MissingMask& mask,
                               const EvalOptions& options = {}) {
  if (d_r.steps() != truth.steps() || d_r.nodes() != truth.nodes() || mask.keep.size() != truth.observed.size()) {
    throw DimensionError("evaluate_run: imputed series, ground truth and mask are not aligned");
  }
  EvalReport r;
  r.method = options.method;
  r.corruption = mask.provenance;
  r.scenario = mask.provenance.id();
  r.period = options.period;
  const Scores fleet = score(d_r, truth, mask);
  r.mae = fleet.mae;
  r.rmse = fleet.rmse;
  r.n = fleet.n;
  const DomainMetrics dm = domain_metrics(d_r, truth, options.period);
  const std::size_t T = truth.steps(), n = truth.nodes();
  for (std::size_t i = 0; i < n; ++i) {
    InverterScore s;
    s.id = truth.inverter_ids[i];
    double a = 0.0, q = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      const std::size_t k = truth.index(t, i);
      if (mask.keep[k] || !truth.observed[k]) continue;
      const double e = d_r.values[k] - truth.values[k];
      a += std::abs(e);
      q += e * e;
      ++s.n;
    }
    if (s.n > 0) {
      s.mae = a / static_cast<double>(s.n);
      s.rmse = std::sqrt(q / static_cast<double>(s.n));
    }
    s.od = dm.od[i];
    s.sd = dm.sd[i];
    r.inverters.push_back(s);
  }
  return r;
}

inline nlohmann::json to_json(const EvalReport& r) {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  nlohmann::json inv = nlohmann::json::array();
  for (const auto& s : r.inverters) {
    inv.push_back({{"id", s.id}, {"mae", num(s.mae)}, {"rmse", num(s.rmse)}, {"n", s.n}, {"od", s.od}, {"sd", s.sd}});
  }
  return {{"method", r.method},
          {"scenario", r.scenario},
          {"corruption",
           {{"type", r.corruption.type == MissingType::MCAR ? "mcar" : "bm"},
            {"param", r.corruption.param},
            {"seed", r.corruption.seed}}},
          {"mae", r.mae},
          {"rmse", r.rmse},
          {"n", r.n},
          {"period", r.period},
          {"mean_od", r.mean_od()},
          {"mean_sd", r.mean_sd()},
          {"per_inverter_od",
           [&] {
             std::vector<double> v;
             for (const auto& s : r.inverters) v.push_back(s.od);
             return v;
           }()},
          {"per_inverter_sd",
           [&] {
             std::vector<double> v;
             for (const auto& s : r.inverters) v.push_back(s.sd);
             return v;
           }()},
          {"inverters", inv}};
}

inline void write_report_json(const std::filesystem::path& path, const EvalReport& r) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write " + path.string());
  os << to_json(r).dump(2) << '\n';
}

/// One row per inverter followed by a "fleet" row.
inline void write_report_csv(const std::filesystem::path& path, const EvalReport& r) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write " + path.string());
  auto num = [](double v) { return std::isfinite(v) ? format_number(v) : std::string(); };
  os << "method,scenario,inverter_id,n,mae,rmse,od,sd\n";
  for (const auto& s : r.inverters) {
    os << r.method << ',' << r.scenario << ',' << s.id << ',' << s.n << ',' << num(s.mae) << ',' << num(s.rmse)
       << ',' << num(s.od) << ',' << num(s.sd) << '\n';
  }
  os << r.method << ',' << r.scenario << ",fleet," << r.n << ',' << num(r.mae) << ',' << num(r.rmse) << ','
     << num(r.mean_od()) << ',' << num(r.mean_sd()) << '\n';
}

}  // namespace solarmend

#endif  // SOLARMEND_EVALUATION_HPP
