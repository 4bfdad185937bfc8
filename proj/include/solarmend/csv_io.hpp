#ifndef SOLARMEND_CSV_IO_HPP
#define SOLARMEND_CSV_IO_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "solarmend/series.hpp"

namespace solarmend {

/// Shortest representation that parses back to the same double.
inline std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw Error("format_number failed");
  return std::string(buf, end);
}

inline double parse_number(std::string_view field, std::string_view what) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) {
    throw DataError("cannot parse " + std::string(what) + " value '" + std::string(field) + "'");
  }
  return v;
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    std::string_view f = line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                            : comma - start);
    while (!f.empty() && (f.back() == '\r' || f.back() == ' ')) f.remove_suffix(1);
    while (!f.empty() && f.front() == ' ') f.remove_prefix(1);
    fields.push_back(f);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::string> lines;  // raw data lines, header excluded
};

inline CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + ": empty file");
  for (auto f : split_csv_line(line)) t.header.emplace_back(f);
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    t.lines.push_back(line);
  }
  return t;
}

enum class PowerUnit { Watts, Normalized };

struct InverterMeta {
  std::string inverter_id;
  std::string site_id;
  GeoPoint location;
  PhysicsParams physics;
};

inline std::vector<InverterMeta> read_metadata_csv(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  const std::vector<std::string> expected{"inverter_id", "site_id", "lon", "lat",
                                          "p_nameplate", "p_norm", "gamma_t"};
  if (t.header != expected) {
    throw DataError(path.string() +
                    ": metadata header must be inverter_id,site_id,lon,lat,p_nameplate,p_norm,gamma_t");
  }
  std::vector<InverterMeta> out;
  for (std::size_t r = 0; r < t.lines.size(); ++r) {
    const auto f = split_csv_line(t.lines[r]);
    if (f.size() != expected.size()) {
      throw DataError(path.string() + ": line " + std::to_string(r + 2) + " has " +
                      std::to_string(f.size()) + " fields");
    }
    InverterMeta m;
    m.inverter_id = std::string(f[0]);
    m.site_id = std::string(f[1]);
    m.location = {parse_number(f[2], "lon"), parse_number(f[3], "lat")};
    m.physics = {parse_number(f[4], "p_nameplate"), parse_number(f[5], "p_norm"),
                 parse_number(f[6], "gamma_t")};
    for (const auto& prev : out) {
      if (prev.inverter_id == m.inverter_id) {
        throw DataError(path.string() + ": duplicate inverter_id " + m.inverter_id);
      }
    }
    out.push_back(std::move(m));
  }
  if (out.empty()) throw DataError(path.string() + ": no inverters");
  return out;
}

inline void write_metadata_csv(const std::filesystem::path& path, const PvFleetSeries& s) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "inverter_id,site_id,lon,lat,p_nameplate,p_norm,gamma_t\n";
  for (std::size_t i = 0; i < s.nodes(); ++i) {
    const PhysicsParams p = s.has_physics() ? s.physics[i] : PhysicsParams{1.0, 1.0, 0.0};
    out << s.inverter_ids[i] << ',' << s.site_ids[i] << ',' << format_number(s.locations[i].lon)
        << ',' << format_number(s.locations[i].lat) << ',' << format_number(p.p_nameplate) << ','
        << format_number(p.p_norm) << ',' << format_number(p.gamma_t) << '\n';
  }
}

struct IngestOptions {
  PowerUnit unit = PowerUnit::Watts;
  /// Number of leading grid steps used to fit the min-max normalization;
  /// 0 fits over the whole series.
  std::size_t fit_steps = 0;
  /// Reuse these per-inverter scales instead of fitting (one per metadata row).
  std::vector<PowerScale> scales;
};

/// Per-inverter min-max normalization fitted on steps [0, fit_steps).
inline void fit_normalization(PvFleetSeries& s, PowerUnit unit, std::size_t fit_steps) {
  const std::size_t T = s.steps(), n = s.nodes();
  const std::size_t fit = fit_steps == 0 ? T : std::min(fit_steps, T);
  s.scales.assign(n, PowerScale{});
  for (std::size_t i = 0; i < n; ++i) {
    PowerScale& sc = s.scales[i];
    if (unit == PowerUnit::Normalized) {
      sc = {0.0, 1.0, 0.0, s.has_physics() ? s.physics[i].p_nameplate : 1.0};
      continue;
    }
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t t = 0; t < fit; ++t) {
      const double r = s.raw[s.index(t, i)];
      if (std::isfinite(r)) {
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
    }
    if (!std::isfinite(lo)) lo = hi = 0.0;
    lo = std::min(lo, 0.0);
    const double span = hi > lo ? hi - lo : 1.0;
    sc = {lo, span, lo, span};
  }
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t k = s.index(t, i);
      s.values[k] = s.observed[k] ? s.scales[i].from_export(s.raw[k]) : 0.0;
    }
  }
}

/// Normalizes raw values with given per-inverter scales.
inline void apply_scales(PvFleetSeries& s, const std::vector<PowerScale>& scales) {
  if (scales.size() != s.nodes()) throw DataError("apply_scales: expected one scale per inverter");
  s.scales = scales;
  for (std::size_t k = 0; k < s.observed.size(); ++k) {
    s.values[k] = s.observed[k] ? s.scales[k % s.nodes()].from_export(s.raw[k]) : 0.0;
  }
}

/// Reads a data CSV (timestamp,inverter_id,power[,g_poa,t_module]) and a
/// metadata CSV onto a regular 5-minute grid spanning whole UTC days.
/// Grid positions without a power value are unobserved.
inline PvFleetSeries ingest_csv(const std::filesystem::path& data_path,
                                const std::filesystem::path& metadata_path,
                                const IngestOptions& options = {}) {
  const auto meta = read_metadata_csv(metadata_path);
  const CsvTable t = read_csv(data_path);
  const bool aux = t.header.size() == 5;
  const std::vector<std::string> base{"timestamp", "inverter_id", "power"};
  if (!(t.header.size() == 3 || aux) || !std::equal(base.begin(), base.end(), t.header.begin()) ||
      (aux && (t.header[3] != "g_poa" || t.header[4] != "t_module"))) {
    throw DataError(data_path.string() +
                    ": data header must be timestamp,inverter_id,power[,g_poa,t_module]");
  }
  std::unordered_map<std::string, std::size_t> id_index;
  for (std::size_t i = 0; i < meta.size(); ++i) id_index[meta[i].inverter_id] = i;

  struct Row {
    double ts;
    std::size_t inv;
    double power, g, tm;
  };
  std::vector<Row> rows;
  rows.reserve(t.lines.size());
  double tmin = std::numeric_limits<double>::infinity(), tmax = -tmin;
  for (std::size_t r = 0; r < t.lines.size(); ++r) {
    const auto f = split_csv_line(t.lines[r]);
    if (f.size() != t.header.size()) {
      throw DataError(data_path.string() + ": line " + std::to_string(r + 2) + " has " +
                      std::to_string(f.size()) + " fields, expected " +
                      std::to_string(t.header.size()));
    }
    auto it = id_index.find(std::string(f[1]));
    if (it == id_index.end()) {
      throw DataError(data_path.string() + ": line " + std::to_string(r + 2) +
                      ": unknown inverter_id '" + std::string(f[1]) + "'");
    }
    auto opt = [&](std::string_view v, const char* what) {
      return v.empty() ? kNaN : parse_number(v, what);
    };
    Row row{parse_timestamp(f[0]), it->second, opt(f[2], "power"), aux ? opt(f[3], "g_poa") : kNaN,
            aux ? opt(f[4], "t_module") : kNaN};
    tmin = std::min(tmin, row.ts);
    tmax = std::max(tmax, row.ts);
    rows.push_back(row);
  }
  if (rows.empty()) throw DataError(data_path.string() + ": no data rows");

  const auto origin = static_cast<std::int64_t>(std::floor(tmin / 86400.0)) * 86400;
  const auto last_day = static_cast<std::int64_t>(std::floor((tmax + 1.0) / 86400.0));
  const std::size_t days = static_cast<std::size_t>(last_day - origin / 86400 + 1);
  const std::size_t T = days * kStepsPerDay, n = meta.size();

  PvFleetSeries s;
  s.timestamps.resize(T);
  for (std::size_t k = 0; k < T; ++k) s.timestamps[k] = origin + static_cast<std::int64_t>(k) * kStepSeconds;
  for (const auto& m : meta) {
    s.inverter_ids.push_back(m.inverter_id);
    s.site_ids.push_back(m.site_id);
    s.locations.push_back(m.location);
    s.physics.push_back(m.physics);
  }
  s.values = Tensor(Shape{T, n, 1});
  s.observed.assign(T * n, 0);
  s.raw.assign(T * n, kNaN);
  if (aux) {
    s.g_poa.assign(T * n, kNaN);
    s.t_module.assign(T * n, kNaN);
  }
  std::vector<std::uint8_t> seen(T * n, 0);
  for (const auto& row : rows) {
    const double rel = row.ts - static_cast<double>(origin);
    const double step = std::round(rel / kStepSeconds);
    if (std::abs(rel - step * kStepSeconds) > 1.0) {
      throw DataError(data_path.string() + ": timestamp " +
                      format_timestamp(static_cast<std::int64_t>(std::llround(row.ts))) +
                      " is off the 5-minute grid by more than 1 s");
    }
    const auto k = static_cast<std::size_t>(step) * n + row.inv;
    if (seen[k]) {
      throw DataError(data_path.string() + ": duplicate row for inverter " +
                      meta[row.inv].inverter_id + " at " +
                      format_timestamp(origin + static_cast<std::int64_t>(step) * kStepSeconds));
    }
    seen[k] = 1;
    if (std::isfinite(row.power)) {
      if (row.power < 0.0) {
        throw DataError(data_path.string() + ": negative power for inverter " +
                        meta[row.inv].inverter_id);
      }
      s.raw[k] = row.power;
      s.observed[k] = 1;
    }
    if (aux) {
      s.g_poa[k] = row.g;
      s.t_module[k] = row.tm;
    }
  }
  if (options.scales.empty()) {
    fit_normalization(s, options.unit, options.fit_steps);
  } else {
    apply_scales(s, options.scales);
  }
  s.validate();
  return s;
}

/// Writes the series in the data CSV schema. Observed positions carry the
/// original measurement when present, the denormalized value otherwise;
/// unobserved positions are written only when auxiliary values exist.
inline void write_data_csv(const std::filesystem::path& path, const PvFleetSeries& s) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  const bool aux = s.has_aux();
  out << "timestamp,inverter_id,power" << (aux ? ",g_poa,t_module" : "") << '\n';
  auto opt = [](double v) { return std::isfinite(v) ? format_number(v) : std::string(); };
  for (std::size_t t = 0; t < s.steps(); ++t) {
    const std::string ts = format_timestamp(s.timestamps[t]);
    for (std::size_t i = 0; i < s.nodes(); ++i) {
      const std::size_t k = s.index(t, i);
      const bool obs = s.observed[k] != 0;
      const bool has_aux = aux && (std::isfinite(s.g_poa[k]) || std::isfinite(s.t_module[k]));
      if (!obs && !has_aux) continue;
      out << ts << ',' << s.inverter_ids[i] << ',' << (obs ? format_number(s.export_value(t, i)) : "");
      if (aux) out << ',' << opt(s.g_poa[k]) << ',' << opt(s.t_module[k]);
      out << '\n';
    }
  }
}

/// Writes a keep/corrupt mask as timestamp,inverter_id,kept rows.
inline void write_mask_csv(const std::filesystem::path& path, const PvFleetSeries& like,
                           const std::vector<std::uint8_t>& keep) {
  if (keep.size() != like.steps() * like.nodes()) throw DataError("write_mask_csv: size mismatch");
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "timestamp,inverter_id,kept\n";
  for (std::size_t t = 0; t < like.steps(); ++t) {
    const std::string ts = format_timestamp(like.timestamps[t]);
    for (std::size_t i = 0; i < like.nodes(); ++i) {
      out << ts << ',' << like.inverter_ids[i] << ',' << int(keep[like.index(t, i)]) << '\n';
    }
  }
}

/// Reads a mask written by write_mask_csv onto the grid of `like`. Grid
/// positions absent from the file are kept.
inline std::vector<std::uint8_t> read_mask_csv(const std::filesystem::path& path,
                                               const PvFleetSeries& like) {
  const CsvTable t = read_csv(path);
  if (t.header != std::vector<std::string>{"timestamp", "inverter_id", "kept"}) {
    throw DataError(path.string() + ": mask header must be timestamp,inverter_id,kept");
  }
  std::unordered_map<std::string, std::size_t> id_index;
  for (std::size_t i = 0; i < like.nodes(); ++i) id_index[like.inverter_ids[i]] = i;
  std::vector<std::uint8_t> keep(like.steps() * like.nodes(), 1);
  const double origin = like.timestamps.empty() ? 0.0 : static_cast<double>(like.timestamps[0]);
  for (const auto& line : t.lines) {
    const auto f = split_csv_line(line);
    if (f.size() != 3) throw DataError(path.string() + ": malformed mask line '" + line + "'");
    auto it = id_index.find(std::string(f[1]));
    if (it == id_index.end()) {
      throw DataError(path.string() + ": unknown inverter_id '" + std::string(f[1]) + "'");
    }
    const double step = std::round((parse_timestamp(f[0]) - origin) / kStepSeconds);
    if (step < 0 || step >= static_cast<double>(like.steps())) {
      throw DataError(path.string() + ": mask timestamp outside the series grid");
    }
    if (f[2] != "0" && f[2] != "1") throw DataError(path.string() + ": kept must be 0 or 1");
    keep[static_cast<std::size_t>(step) * like.nodes() + it->second] = f[2] == "1";
  }
  return keep;
}

}  // namespace solarmend

#endif  // SOLARMEND_CSV_IO_HPP
