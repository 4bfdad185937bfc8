#ifndef SOLARMEND_SERIES_HPP
#define SOLARMEND_SERIES_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "solarmend/graph.hpp"
#include "solarmend/tensor.hpp"

namespace solarmend {

inline constexpr std::int64_t kStepSeconds = 300;
inline constexpr std::size_t kStepsPerDay = 288;
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Parses "YYYY-MM-DDTHH:MM:SS[.fff][Z|+00:00]" (a space may replace 'T')
/// into UTC epoch seconds.
inline double parse_timestamp(std::string_view text) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0;
  double s = 0.0;
  char sep = 0;
  std::string buf(text);
  int consumed = 0;
  if (std::sscanf(buf.c_str(), "%4d-%2d-%2d%c%2d:%2d:%lf%n", &y, &mo, &d, &sep, &h, &mi, &s,
                  &consumed) != 7 ||
      (sep != 'T' && sep != ' ')) {
    throw DataError("unparseable timestamp '" + buf + "'");
  }
  std::string_view rest = text.substr(static_cast<std::size_t>(consumed));
  if (!(rest.empty() || rest == "Z" || rest == "+00:00" || rest == "+0000")) {
    throw DataError("timestamp '" + buf + "' is not UTC");
  }
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s < 0 || s >= 61) {
    throw DataError("invalid timestamp '" + buf + "'");
  }
  const auto days = sys_days{ymd}.time_since_epoch().count();
  return static_cast<double>(days) * 86400.0 + h * 3600.0 + mi * 60.0 + s;
}

inline std::string format_timestamp(std::int64_t epoch_seconds) {
  using namespace std::chrono;
  const auto tp = sys_seconds{seconds{epoch_seconds}};
  const auto dp = floor<days>(tp);
  const year_month_day ymd{dp};
  const hh_mm_ss hms{tp - dp};
  char out[64];
  std::snprintf(out, sizeof out, "%04d-%02u-%02uT%02ld:%02ld:%02lldZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<long>(hms.hours().count()), static_cast<long>(hms.minutes().count()),
                static_cast<long long>(hms.seconds().count()));
  return out;
}

/// Module and warranty parameters of one inverter (watts, 1/degC).
struct PhysicsParams {
  double p_nameplate = 0.0;
  double p_norm = 0.0;
  double gamma_t = 0.0;

  /// P_nameplate >= P_norm >= 0.8 P_nameplate.
  bool warranty_ok() const {
    return p_nameplate >= p_norm && p_norm >= 0.8 * p_nameplate && p_norm >= 0.0;
  }

  void validate() const {
    if (!warranty_ok()) {
      throw DataError("physics: p_norm " + std::to_string(p_norm) +
                      " outside warranty range [0.8, 1] x p_nameplate " +
                      std::to_string(p_nameplate));
    }
  }
};

/// Affine maps from normalized power to the export unit and to watts.
struct PowerScale {
  double offset = 0.0;
  double scale = 1.0;
  double watt_offset = 0.0;
  double watt_scale = 1.0;

  double to_export(double v) const { return offset + scale * v; }
  double from_export(double x) const { return (x - offset) / scale; }
  double to_watts(double v) const { return watt_offset + watt_scale * v; }
  double from_watts(double w) const { return (w - watt_offset) / watt_scale; }
};

/// Fleet power on a regular 5-minute grid: values[t, i, 0] is normalized
/// power of inverter i at step t. Per-(t, i) arrays are stored t-major.
struct PvFleetSeries {
  Tensor values;                       // T x n x 1
  std::vector<std::uint8_t> observed;  // T x n, 1 = observed
  std::vector<std::int64_t> timestamps;
  std::vector<std::string> inverter_ids;
  std::vector<std::string> site_ids;
  std::vector<GeoPoint> locations;
  std::vector<PhysicsParams> physics;  // empty when unknown
  std::vector<PowerScale> scales;
  std::vector<double> raw;       // original measurement in export units, NaN if none
  std::vector<double> g_poa;     // W/m^2, T x n, empty when not supplied
  std::vector<double> t_module;  // degC, T x n, empty when not supplied

  std::size_t steps() const noexcept { return timestamps.size(); }
  std::size_t nodes() const noexcept { return inverter_ids.size(); }
  std::size_t days() const noexcept { return steps() / kStepsPerDay; }
  std::size_t index(std::size_t t, std::size_t i) const noexcept { return t * nodes() + i; }

  double value(std::size_t t, std::size_t i) const { return values[index(t, i)]; }
  double& value(std::size_t t, std::size_t i) { return values[index(t, i)]; }
  bool is_observed(std::size_t t, std::size_t i) const { return observed[index(t, i)] != 0; }
  bool has_aux() const noexcept { return !g_poa.empty(); }
  bool has_physics() const noexcept { return !physics.empty(); }

  std::size_t observed_count() const {
    std::size_t c = 0;
    for (auto o : observed) c += o;
    return c;
  }
  bool fully_observed() const { return observed_count() == observed.size(); }

  /// Value in export units; the original measurement when one exists.
  double export_value(std::size_t t, std::size_t i) const {
    const double r = raw.empty() ? kNaN : raw[index(t, i)];
    return std::isfinite(r) ? r : scales[i].to_export(value(t, i));
  }

  void validate() const {
    const std::size_t T = steps(), n = nodes();
    if (values.shape() != Shape{T, n, 1}) {
      throw DataError("series: values shape " + shape_string(values.shape()) +
                      " does not match T x n x 1 = " + shape_string({T, n, 1}));
    }
    if (observed.size() != T * n) throw DataError("series: observed mask size mismatch");
    if (site_ids.size() != n || locations.size() != n || scales.size() != n) {
      throw DataError("series: per-inverter metadata size mismatch");
    }
    if (!physics.empty() && physics.size() != n) throw DataError("series: physics size mismatch");
    if (!raw.empty() && raw.size() != T * n) throw DataError("series: raw size mismatch");
    if (!g_poa.empty() && (g_poa.size() != T * n || t_module.size() != T * n)) {
      throw DataError("series: auxiliary column size mismatch");
    }
    for (std::size_t t = 1; t < T; ++t) {
      if (timestamps[t] - timestamps[t - 1] != kStepSeconds) {
        throw DataError("series: timestamps not on a 300 s grid at step " + std::to_string(t));
      }
    }
    for (std::size_t k = 0; k < T * n; ++k) {
      if (observed[k] && !(std::isfinite(values[k]) && values[k] >= 0.0)) {
        throw DataError("series: observed value at flat index " + std::to_string(k) +
                        " is negative or non-finite");
      }
    }
  }
};

/// Steps [begin, begin + count) of a series.
inline PvFleetSeries slice_steps(const PvFleetSeries& s, std::size_t begin, std::size_t count) {
  if (begin + count > s.steps()) throw DataError("slice_steps: range beyond series end");
  const std::size_t n = s.nodes();
  PvFleetSeries out = s;
  out.timestamps.assign(s.timestamps.begin() + begin, s.timestamps.begin() + begin + count);
  out.values = Tensor(Shape{count, n, 1});
  out.observed.assign(s.observed.begin() + begin * n, s.observed.begin() + (begin + count) * n);
  std::copy(s.values.storage().begin() + begin * n, s.values.storage().begin() + (begin + count) * n,
            out.values.storage().begin());
  auto cut = [&](const std::vector<double>& v) {
    return v.empty() ? v
                     : std::vector<double>(v.begin() + begin * n, v.begin() + (begin + count) * n);
  };
  out.raw = cut(s.raw);
  out.g_poa = cut(s.g_poa);
  out.t_module = cut(s.t_module);
  return out;
}

inline PvFleetSeries slice_days(const PvFleetSeries& s, std::size_t first_day, std::size_t n_days) {
  return slice_steps(s, first_day * kStepsPerDay, n_days * kStepsPerDay);
}

/// Day counts of the train/validation/test split, in the 240/60/60 ratio of
/// a 360-day year.
struct DaySplit {
  std::size_t train = 0, validation = 0, test = 0;
};

inline DaySplit split_days(std::size_t days) {
  DaySplit s;
  s.train = days * 240 / 360;
  s.validation = days * 60 / 360;
  s.test = days - s.train - s.validation;
  return s;
}

}  // namespace solarmend

#endif  // SOLARMEND_SERIES_HPP
