#ifndef SOLARMEND_DATA_PIPELINE_HPP
#define SOLARMEND_DATA_PIPELINE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "solarmend/baselines.hpp"
#include "solarmend/random.hpp"
#include "solarmend/series.hpp"

namespace solarmend {

// ---------------------------------------------------------------------------
// Missing-pattern census

struct MissingPattern {
  std::vector<bool> present;  // one flag per attribute
  std::size_t count = 0;
};

struct MissingProfile {
  std::vector<std::string> attributes;
  std::vector<MissingPattern> patterns;  // sorted by count, descending
  std::size_t records = 0;
  double power_missing_fraction = 0.0;  // attribute 0 is power

  std::string label(const MissingPattern& p) const {
    std::string s;
    for (std::size_t a = 0; a < attributes.size(); ++a) {
      if (a) s += ',';
      s += attributes[a] + (p.present[a] ? "=1" : "=0");
    }
    return s;
  }
};

/// Counts distinct presence/absence patterns over a table of records.
/// presence[r][a] tells whether attribute a of record r is present.
inline MissingProfile profile_missing_patterns(const std::vector<std::string>& attributes,
                                               const std::vector<std::vector<bool>>& presence) {
  MissingProfile p;
  p.attributes = attributes;
  p.records = presence.size();
  std::map<std::vector<bool>, std::size_t> counts;
  std::size_t power_missing = 0;
  for (const auto& row : presence) {
    if (row.size() != attributes.size()) throw DataError("profile: record width mismatch");
    ++counts[row];
    if (!row.empty() && !row[0]) ++power_missing;
  }
  for (const auto& [bits, c] : counts) p.patterns.push_back({bits, c});
  std::stable_sort(p.patterns.begin(), p.patterns.end(),
                   [](const MissingPattern& a, const MissingPattern& b) { return a.count > b.count; });
  p.power_missing_fraction =
      p.records ? static_cast<double>(power_missing) / static_cast<double>(p.records) : 0.0;
  return p;
}

/// One record per grid position (t, inverter); attributes are power and,
/// when present, g_poa and t_module.
inline MissingProfile profile_missing_patterns(const PvFleetSeries& s) {
  std::vector<std::string> attrs{"power"};
  if (s.has_aux()) {
    attrs.push_back("g_poa");
    attrs.push_back("t_module");
  }
  std::vector<std::vector<bool>> presence;
  presence.reserve(s.steps() * s.nodes());
  for (std::size_t k = 0; k < s.steps() * s.nodes(); ++k) {
    std::vector<bool> row{s.observed[k] != 0};
    if (s.has_aux()) {
      row.push_back(std::isfinite(s.g_poa[k]));
      row.push_back(std::isfinite(s.t_module[k]));
    }
    presence.push_back(std::move(row));
  }
  return profile_missing_patterns(attrs, presence);
}

// ---------------------------------------------------------------------------
// Domain-knowledge validation

enum class TemperatureModel {
  AsPublished,     // P = G/1000 * P_norm / (1 + gamma (T - 25))
  Multiplicative,  // P = G/1000 * P_norm * (1 + gamma (T - 25))
};

struct ValidatorOptions {
  double band = 0.25;
  TemperatureModel temperature = TemperatureModel::AsPublished;
};

/// Irradiance/temperature-scaled power estimate in watts. NaN when the
/// temperature factor is not positive.
inline double predicted_power(double g_poa, double t_module, const PhysicsParams& physics,
                              TemperatureModel model = TemperatureModel::AsPublished) {
  const double factor = 1.0 + physics.gamma_t * (t_module - 25.0);
  if (!(factor > 0.0)) return kNaN;
  const double base = g_poa / 1000.0 * physics.p_norm;
  return model == TemperatureModel::AsPublished ? base / factor : base * factor;
}

struct Validation {
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool clamped = false;
  bool physics_skipped = false;  // weather missing or temperature factor <= 0
};

/// Admissible range for a normalized power candidate: a band around the
/// predicted power when irradiance and module temperature are known, the
/// static range [0, nameplate] otherwise. Out-of-range candidates are
/// clamped.
inline Validation validate_value(double candidate, double g_poa, double t_module,
                                 const PhysicsParams& physics, const PowerScale& scale,
                                 const ValidatorOptions& options = {}) {
  physics.validate();
  Validation v;
  const double p = (std::isfinite(g_poa) && std::isfinite(t_module))
                       ? predicted_power(g_poa, t_module, physics, options.temperature)
                       : kNaN;
  if (std::isfinite(p)) {
    v.lower = std::max(0.0, scale.from_watts(std::max(0.0, (1.0 - options.band) * p)));
    v.upper = std::max(v.lower, scale.from_watts((1.0 + options.band) * p));
  } else {
    v.physics_skipped = true;
    v.lower = 0.0;
    v.upper = std::max(0.0, scale.from_watts(physics.p_nameplate));
  }
  v.value = std::clamp(candidate, v.lower, v.upper);
  v.clamped = v.value != candidate;
  return v;
}

/// Validates entry (t, i) of a series; series without physics use [0, 1].
inline Validation validate_entry(const PvFleetSeries& s, std::size_t t, std::size_t i,
                                 double candidate, const ValidatorOptions& options) {
  if (!s.has_physics()) {
    Validation v;
    v.physics_skipped = true;
    v.lower = 0.0;
    v.upper = 1.0;
    v.value = std::clamp(candidate, 0.0, 1.0);
    v.clamped = v.value != candidate;
    return v;
  }
  const std::size_t k = s.index(t, i);
  return validate_value(candidate, s.has_aux() ? s.g_poa[k] : kNaN,
                        s.has_aux() ? s.t_module[k] : kNaN, s.physics[i], s.scales[i], options);
}

// ---------------------------------------------------------------------------
// Augmentation

struct AugmentOptions {
  ImputerMethod imputer = ImputerMethod::KNN;
  bool domain_knowledge = true;
  ValidatorOptions validator;
  int knn_k = 5;
  int mice_iterations = 10;
};

struct AugmentResult {
  PvFleetSeries series;               // fully observed D_A
  std::vector<std::uint8_t> filled;   // T x n, 1 where a value was imputed
  std::size_t filled_count = 0;
  std::size_t clamped_count = 0;
  std::size_t physics_skipped = 0;
};

/// Fills every unobserved entry with a library imputer (LI, KNN or MICE)
/// and passes the filled values through the domain validator.
inline AugmentResult augment(const PvFleetSeries& s, const AugmentOptions& options = {}) {
  if (options.imputer != ImputerMethod::LI && options.imputer != ImputerMethod::KNN &&
      options.imputer != ImputerMethod::MICE) {
    throw Error(std::string("augment: imputer must be li, knn or mice, got ") +
                method_name(options.imputer));
  }
  AugmentResult r;
  r.filled.assign(s.observed.size(), 0);
  if (s.fully_observed()) {
    r.series = s;
    return r;
  }
  ImputerSpec spec;
  spec.method = options.imputer;
  spec.knn_k = options.knn_k;
  spec.mice_iterations = options.mice_iterations;
  r.series = impute_baseline(s, spec);
  for (std::size_t t = 0; t < s.steps(); ++t) {
    for (std::size_t i = 0; i < s.nodes(); ++i) {
      const std::size_t k = s.index(t, i);
      if (s.observed[k]) continue;
      r.filled[k] = 1;
      ++r.filled_count;
      if (!options.domain_knowledge) continue;
      const Validation v = validate_entry(s, t, i, r.series.values[k], options.validator);
      r.series.values[k] = v.value;
      r.clamped_count += v.clamped;
      r.physics_skipped += v.physics_skipped;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Corruption

enum class MissingType { MCAR, BM };

/// (missing type, parameter): MCAR rate in [0, 1], or BM block length in
/// 5-minute steps within [1, 288].
struct CorruptionConfig {
  MissingType type = MissingType::MCAR;
  double param = 0.0;
  std::uint64_t seed = 0;

  void validate() const {
    if (type == MissingType::MCAR && !(param >= 0.0 && param <= 1.0)) {
      throw Error("corruption: MCAR rate must lie in [0, 1]");
    }
    if (type == MissingType::BM &&
        !(param >= 1.0 && param <= static_cast<double>(kStepsPerDay) && param == std::floor(param))) {
      throw Error("corruption: BM block length must be an integer in [1, 288] steps");
    }
  }

  std::size_t block_length() const { return static_cast<std::size_t>(param); }

  /// Scenario label, e.g. "mcar-40" or "bm-6h".
  std::string id() const {
    if (type == MissingType::MCAR) return "mcar-" + std::to_string(std::lround(param * 100));
    const double hours = param / 12.0;
    if (hours == std::floor(hours)) return "bm-" + std::to_string(static_cast<long>(hours)) + "h";
    return "bm-" + std::to_string(static_cast<long>(param)) + "steps";
  }
};

struct MissingMask {
  std::vector<std::uint8_t> keep;  // T x n, 1 = kept, 0 = corrupted
  CorruptionConfig provenance;

  std::size_t corrupted() const {
    return static_cast<std::size_t>(std::count(keep.begin(), keep.end(), std::uint8_t{0}));
  }
};

inline MissingMask make_mask(std::size_t steps, std::size_t nodes, const CorruptionConfig& config) {
  config.validate();
  MissingMask m;
  m.provenance = config;
  m.keep.assign(steps * nodes, 1);
  Rng rng(config.seed);
  if (config.type == MissingType::MCAR) {
    for (auto& k : m.keep) k = rng.uniform() < config.param ? 0 : 1;
    return m;
  }
  if (steps % kStepsPerDay != 0) throw DataError("corruption: BM requires whole days");
  const std::size_t len = config.block_length();
  for (std::size_t i = 0; i < nodes; ++i) {
    for (std::size_t d = 0; d < steps / kStepsPerDay; ++d) {
      const std::size_t start = rng.below(kStepsPerDay - len + 1);
      for (std::size_t h = start; h < start + len; ++h) m.keep[(d * kStepsPerDay + h) * nodes + i] = 0;
    }
  }
  return m;
}

/// Applies a mask: D_C = D_A (element-wise product) mask. Corrupted entries
/// become unobserved zeros.
inline PvFleetSeries apply_mask(const PvFleetSeries& s, const std::vector<std::uint8_t>& keep) {
  if (keep.size() != s.observed.size()) throw DataError("apply_mask: mask size mismatch");
  PvFleetSeries out = s;
  for (std::size_t k = 0; k < keep.size(); ++k) {
    if (keep[k]) continue;
    out.values[k] = 0.0;
    out.observed[k] = 0;
    if (!out.raw.empty()) out.raw[k] = kNaN;
  }
  return out;
}

struct Corruption {
  PvFleetSeries series;
  MissingMask mask;
};

inline Corruption corrupt(const PvFleetSeries& d_a, const CorruptionConfig& config) {
  Corruption c;
  c.mask = make_mask(d_a.steps(), d_a.nodes(), config);
  c.series = apply_mask(d_a, c.mask.keep);
  return c;
}

// ---------------------------------------------------------------------------
// Sliding windows

struct Window {
  std::size_t start = 0;
  Tensor values;                       // window x n x 1
  std::vector<std::uint8_t> observed;  // window x n
};

inline std::vector<Window> slide_windows(const PvFleetSeries& s, std::size_t window = kStepsPerDay,
                                         std::size_t step = kStepsPerDay) {
  if (window == 0 || step == 0) throw Error("slide_windows: window and step must be positive");
  if (s.steps() < window) {
    throw DataError("slide_windows: series of " + std::to_string(s.steps()) +
                    " steps is shorter than the window " + std::to_string(window));
  }
  const std::size_t n = s.nodes();
  std::vector<Window> out;
  for (std::size_t start = 0; start + window <= s.steps(); start += step) {
    Window w;
    w.start = start;
    w.values = Tensor(Shape{window, n, 1});
    std::copy_n(s.values.storage().begin() + start * n, window * n, w.values.storage().begin());
    w.observed.assign(s.observed.begin() + start * n, s.observed.begin() + (start + window) * n);
    out.push_back(std::move(w));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Synthetic fleet

struct SynthOptions {
  std::size_t n_sites = 8;
  std::size_t inverters_per_site = 4;
  std::size_t n_days = 90;
  std::uint64_t seed = 0;
  double site_jitter_deg = 0.0;  // 0: inverters share their site's coordinates
  bool with_weather = false;     // expose g_poa / t_module columns
  std::int64_t start_epoch = 1441065600;  // 2015-09-01T00:00:00Z
};

/// Fully observed synthetic fleet: clear-sky daily bell (zero at night) x
/// seasonal amplitude x site-level cloud transmittance (shared within a
/// site, independent across sites) x inverter gain, plus small noise.
inline PvFleetSeries generate_synthetic_fleet(const SynthOptions& o) {
  if (o.n_sites < 1 || o.inverters_per_site < 1 || o.n_days < 1) {
    throw Error("generate_synthetic_fleet: counts must be >= 1");
  }
  constexpr double kPi = 3.14159265358979323846;
  Rng rng(o.seed);
  const std::size_t n = o.n_sites * o.inverters_per_site;
  const std::size_t T = o.n_days * kStepsPerDay;
  PvFleetSeries s;
  s.timestamps.resize(T);
  for (std::size_t k = 0; k < T; ++k) s.timestamps[k] = o.start_epoch + static_cast<std::int64_t>(k) * kStepSeconds;

  std::vector<GeoPoint> site_loc(o.n_sites);
  for (auto& p : site_loc) p = {rng.uniform(-81.0, -74.0), rng.uniform(42.5, 46.5)};
  std::vector<double> gain(n);
  for (std::size_t site = 0; site < o.n_sites; ++site) {
    for (std::size_t j = 0; j < o.inverters_per_site; ++j) {
      const std::size_t i = site * o.inverters_per_site + j;
      char id[32];
      std::snprintf(id, sizeof id, "S%02zu-INV%02zu", site + 1, j + 1);
      s.inverter_ids.emplace_back(id);
      std::snprintf(id, sizeof id, "S%02zu", site + 1);
      s.site_ids.emplace_back(id);
      GeoPoint p = site_loc[site];
      if (o.site_jitter_deg > 0.0) {
        p.lon += rng.uniform(-o.site_jitter_deg, o.site_jitter_deg);
        p.lat += rng.uniform(-o.site_jitter_deg, o.site_jitter_deg);
      }
      s.locations.push_back(p);
      const double nameplate = 50000.0 * std::round(rng.uniform(1.0, 4.0));
      s.physics.push_back({nameplate, nameplate * rng.uniform(0.85, 0.97), rng.uniform(-0.0045, -0.0035)});
      s.scales.push_back({0.0, nameplate, 0.0, nameplate});
      gain[i] = rng.uniform(0.9, 1.0);
    }
  }
  s.values = Tensor(Shape{T, n, 1});
  s.observed.assign(T * n, 1);
  s.raw.assign(T * n, kNaN);
  std::vector<double> g_poa(T * n, 0.0), t_mod(T * n, 0.0);

  const auto start_days = static_cast<double>(o.start_epoch / 86400);
  for (std::size_t site = 0; site < o.n_sites; ++site) {
    double z = rng.normal();
    for (std::size_t d = 0; d < o.n_days; ++d) {
      // day of year relative to Jan 1 of an average year
      const double doy = std::fmod(start_days + static_cast<double>(d) - 10957.0 + 365.25 * 100, 365.25);
      const double day_len = 12.0 + 3.5 * std::sin(2.0 * kPi * (doy - 80.0) / 365.25);
      const double noon = 12.0 - (site_loc[site].lon + 77.5) / 15.0;
      const double amplitude = 0.7 + 0.3 * std::cos(2.0 * kPi * (doy - 172.0) / 365.25);
      const double u = rng.uniform();
      const double cloudiness = std::sqrt(u);
      const double t_amb = 8.0 + 12.0 * std::cos(2.0 * kPi * (doy - 200.0) / 365.25) + 3.0 * rng.normal();
      for (std::size_t h = 0; h < kStepsPerDay; ++h) {
        z = 0.85 * z + 0.527 * rng.normal();
        const double hour = (static_cast<double>(h) + 0.5) / 12.0;
        const double x = (hour - (noon - day_len / 2.0)) / day_len;
        const double bell = (x > 0.0 && x < 1.0) ? std::pow(std::sin(kPi * x), 1.3) : 0.0;
        const double transmittance = 1.0 - 0.95 * cloudiness * sigmoid_value(5.0 * z);
        const double g = 1000.0 * bell * amplitude * transmittance;
        const std::size_t t = d * kStepsPerDay + h;
        for (std::size_t j = 0; j < o.inverters_per_site; ++j) {
          const std::size_t i = site * o.inverters_per_site + j;
          const std::size_t k = t * n + i;
          g_poa[k] = g;
          t_mod[k] = t_amb + 0.03 * g;
          double v = 0.0;
          if (bell > 0.0) {
            const PhysicsParams& ph = s.physics[i];
            v = g / 1000.0 * ph.p_norm / ph.p_nameplate * gain[i] + 0.01 * rng.normal();
            v = std::clamp(v, 0.0, 1.0);
          }
          s.values[k] = v;
          s.raw[k] = v * s.physics[i].p_nameplate;
        }
      }
    }
  }
  if (o.with_weather) {
    s.g_poa = std::move(g_poa);
    s.t_module = std::move(t_mod);
  }
  s.validate();
  return s;
}

/// Natural outages for realistic synthetic inputs: isolated missing points
/// at `point_rate`, and per inverter-day with probability `block_prob` one
/// outage of 6 to 48 steps. Weather values, when present, stay observed
/// except for a 0.5% independent dropout.
inline PvFleetSeries plant_outages(const PvFleetSeries& s, double point_rate, double block_prob,
                                   std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::uint8_t> keep(s.observed.size(), 1);
  const std::size_t n = s.nodes();
  for (auto& k : keep) k = rng.uniform() < point_rate ? 0 : 1;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < s.days(); ++d) {
      if (rng.uniform() >= block_prob) continue;
      const std::size_t len = 6 + rng.below(43);
      const std::size_t start = rng.below(kStepsPerDay - len + 1);
      for (std::size_t h = start; h < start + len; ++h) keep[(d * kStepsPerDay + h) * n + i] = 0;
    }
  }
  PvFleetSeries out = apply_mask(s, keep);
  if (out.has_aux()) {
    for (std::size_t k = 0; k < out.g_poa.size(); ++k) {
      if (rng.uniform() < 0.005) out.g_poa[k] = kNaN;
      if (rng.uniform() < 0.005) out.t_module[k] = kNaN;
    }
  }
  return out;
}

}  // namespace solarmend

#endif  // SOLARMEND_DATA_PIPELINE_HPP
