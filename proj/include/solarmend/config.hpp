#ifndef SOLARMEND_CONFIG_HPP
#define SOLARMEND_CONFIG_HPP

// Run configuration: JSON file sections with documented defaults. Unknown
// keys are rejected and type errors name the offending key.

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "solarmend/baselines.hpp"
#include "solarmend/data_pipeline.hpp"
#include "solarmend/stdgae.hpp"

namespace solarmend {

struct ConfigError : Error {
  using Error::Error;
};

/// Imputation method name: "std-gae" or a baseline name.
inline constexpr const char* kStdGae = "std-gae";

struct AugmentSettings {
  bool enabled = true;
  std::string imputer = "knn";
  double band = 0.25;
  bool domain_knowledge = true;
  std::string temperature_model = "as-published";  // or "multiplicative"
};

struct RunConfig {
  std::string data;
  std::string metadata;
  std::string out = "out";
  std::string unit = "watts";  // or "normalized"
  std::uint64_t seed = 0;
  TrainConfig train;
  std::string corruption_type = "mcar";  // "mcar" or "bm"
  double corruption_param = 0.4;         // MCAR fraction, or BM block length in hours
  std::string method = kStdGae;
  std::vector<std::string> methods;  // experiment: empty = all seven
  ImputerSpec imputer;
  AugmentSettings augmentation;
  std::size_t period = kStepsPerDay;

  CorruptionConfig corruption(std::uint64_t corruption_seed) const {
    CorruptionConfig c;
    if (corruption_type == "mcar") {
      c.type = MissingType::MCAR;
      c.param = corruption_param;
    } else if (corruption_type == "bm") {
      c.type = MissingType::BM;
      c.param = std::round(corruption_param * 12.0);
    } else {
      throw ConfigError("corruption.type must be \"mcar\" or \"bm\", got \"" + corruption_type + "\"");
    }
    c.seed = corruption_seed;
    c.validate();
    return c;
  }

  ValidatorOptions validator() const {
    ValidatorOptions v;
    v.band = augmentation.band;
    v.temperature = augmentation.temperature_model == "multiplicative" ? TemperatureModel::Multiplicative
                                                                       : TemperatureModel::AsPublished;
    return v;
  }

  AugmentOptions augment_options() const {
    AugmentOptions a;
    a.imputer = parse_method(augmentation.imputer);
    a.domain_knowledge = augmentation.domain_knowledge;
    a.validator = validator();
    a.knn_k = imputer.knn_k;
    a.mice_iterations = imputer.mice_iterations;
    return a;
  }

  void validate() const {
    train.validate();
    (void)corruption(0);
    if (method != kStdGae) (void)parse_method(method);
    for (const auto& m : methods)
      if (m != kStdGae) (void)parse_method(m);
    const auto aug = parse_method(augmentation.imputer);
    if (aug != ImputerMethod::LI && aug != ImputerMethod::KNN && aug != ImputerMethod::MICE) {
      throw ConfigError("augmentation.imputer must be li, knn or mice");
    }
    if (!(augmentation.band >= 0.0)) throw ConfigError("augmentation.band must be non-negative");
    if (augmentation.temperature_model != "as-published" && augmentation.temperature_model != "multiplicative") {
      throw ConfigError("augmentation.temperature_model must be \"as-published\" or \"multiplicative\"");
    }
    if (unit != "watts" && unit != "normalized") throw ConfigError("paths.unit must be \"watts\" or \"normalized\"");
    if (period < 2) throw ConfigError("evaluation.period must be at least 2");
    if (imputer.knn_k < 1 || imputer.mice_iterations < 1) {
      throw ConfigError("imputer.knn_k and imputer.mice_iterations must be positive");
    }
  }
};

namespace detail {

class SectionReader {
 public:
  SectionReader(const nlohmann::json& j, std::string prefix) : j_(j), prefix_(std::move(prefix)) {
    if (!j_.is_object()) {
      throw ConfigError("config: '" + (prefix_.empty() ? std::string("<root>") : prefix_) + "' must be an object");
    }
    for (auto it = j_.begin(); it != j_.end(); ++it) keys_.insert(it.key());
  }

  template <class T>
  void read(const char* key, T& target, const char* expected) {
    if (!j_.contains(key)) return;
    keys_.erase(key);
    const auto& v = j_.at(key);
    bool ok;
    if constexpr (std::is_same_v<T, bool>) {
      ok = v.is_boolean();
    } else if constexpr (std::is_same_v<T, std::string>) {
      ok = v.is_string();
    } else if constexpr (std::is_floating_point_v<T>) {
      ok = v.is_number();
    } else if constexpr (std::is_unsigned_v<T>) {
      ok = v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0);
    } else {
      ok = v.is_number_integer();
    }
    if (!ok) throw ConfigError("config: '" + name(key) + "' must be " + expected + ", got " + v.dump());
    target = v.get<T>();
  }

  const nlohmann::json* section(const char* key) {
    if (!j_.contains(key)) return nullptr;
    keys_.erase(key);
    return &j_.at(key);
  }

  std::string name(const std::string& key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

  void finish() const {
    if (!keys_.empty()) throw ConfigError("config: unknown key '" + name(*keys_.begin()) + "'");
  }

 private:
  const nlohmann::json& j_;
  std::string prefix_;
  std::set<std::string> keys_;
};

}  // namespace detail

/// Overlays a JSON document onto `c`.
inline void apply_config_json(RunConfig& c, const nlohmann::json& j) {
  detail::SectionReader root(j, "");
  root.read("seed", c.seed, "a non-negative integer");
  if (auto* p = root.section("paths")) {
    detail::SectionReader r(*p, "paths");
    r.read("data", c.data, "a string");
    r.read("metadata", c.metadata, "a string");
    r.read("out", c.out, "a string");
    r.read("unit", c.unit, "a string");
    r.finish();
  }
  if (auto* p = root.section("train")) {
    detail::SectionReader r(*p, "train");
    auto& t = c.train;
    r.read("cheb_k", t.cheb_k, "an integer");
    r.read("batch_size", t.batch_size, "an integer");
    r.read("epochs", t.epochs, "an integer");
    r.read("lr", t.lr, "a number");
    r.read("decay", t.decay, "a number");
    r.read("epsilon", t.epsilon_graph, "a number");
    r.read("window", t.window, "a non-negative integer");
    r.read("step", t.step, "a non-negative integer");
    r.read("st_blocks", t.st_blocks, "an integer");
    r.read("hidden", t.hidden, "an integer");
    r.read("two_filter_glu", t.two_filter_glu, "a boolean");
    r.read("mask_channel", t.mask_channel, "a boolean");
    r.finish();
  }
  if (auto* p = root.section("corruption")) {
    detail::SectionReader r(*p, "corruption");
    r.read("type", c.corruption_type, "a string");
    r.read("param", c.corruption_param, "a number");
    r.finish();
  }
  if (auto* p = root.section("imputer")) {
    detail::SectionReader r(*p, "imputer");
    r.read("method", c.method, "a string");
    if (auto* m = r.section("methods")) {
      if (!m->is_array()) throw ConfigError("config: 'imputer.methods' must be an array of strings");
      c.methods.clear();
      for (const auto& v : *m) {
        if (!v.is_string()) throw ConfigError("config: 'imputer.methods' must be an array of strings");
        c.methods.push_back(v.get<std::string>());
      }
    }
    r.read("knn_k", c.imputer.knn_k, "an integer");
    r.read("mice_iterations", c.imputer.mice_iterations, "an integer");
    if (auto* m = r.section("mida")) {
      detail::SectionReader q(*m, "imputer.mida");
      q.read("layers", c.imputer.mida.layers, "an integer");
      q.read("width_step", c.imputer.mida.width_step, "an integer");
      q.read("epochs", c.imputer.mida.epochs, "an integer");
      q.read("batch_rows", c.imputer.mida.batch_rows, "an integer");
      q.read("drop_rate", c.imputer.mida.drop_rate, "a number");
      q.read("lr", c.imputer.mida.lr, "a number");
      q.finish();
    }
    if (auto* m = r.section("lrtc")) {
      detail::SectionReader q(*m, "imputer.lrtc");
      q.read("truncation", c.imputer.lrtc.truncation, "a number");
      q.read("tolerance", c.imputer.lrtc.tolerance, "a number");
      q.read("max_iterations", c.imputer.lrtc.max_iterations, "an integer");
      q.read("rho_scale", c.imputer.lrtc.rho_scale, "a number");
      q.read("rho_growth", c.imputer.lrtc.rho_growth, "a number");
      q.read("rho_max", c.imputer.lrtc.rho_max, "a number");
      q.finish();
    }
    r.finish();
  }
  if (auto* p = root.section("augmentation")) {
    detail::SectionReader r(*p, "augmentation");
    r.read("enabled", c.augmentation.enabled, "a boolean");
    r.read("imputer", c.augmentation.imputer, "a string");
    r.read("band", c.augmentation.band, "a number");
    r.read("domain_knowledge", c.augmentation.domain_knowledge, "a boolean");
    r.read("temperature_model", c.augmentation.temperature_model, "a string");
    r.finish();
  }
  if (auto* p = root.section("evaluation")) {
    detail::SectionReader r(*p, "evaluation");
    r.read("period", c.period, "a non-negative integer");
    r.finish();
  }
  root.finish();
}

inline RunConfig parse_config_text(const std::string& text) {
  RunConfig c;
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return c;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  apply_config_json(c, j);
  c.validate();
  return c;
}

inline RunConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("config: cannot open " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config_text(ss.str());
}

inline nlohmann::json to_json(const RunConfig& c) {
  const auto& t = c.train;
  const auto& m = c.imputer.mida;
  const auto& l = c.imputer.lrtc;
  return {{"seed", c.seed},
          {"paths", {{"data", c.data}, {"metadata", c.metadata}, {"out", c.out}, {"unit", c.unit}}},
          {"train",
           {{"cheb_k", t.cheb_k},
            {"batch_size", t.batch_size},
            {"epochs", t.epochs},
            {"lr", t.lr},
            {"decay", t.decay},
            {"epsilon", t.epsilon_graph},
            {"window", t.window},
            {"step", t.step},
            {"st_blocks", t.st_blocks},
            {"hidden", t.hidden},
            {"two_filter_glu", t.two_filter_glu},
            {"mask_channel", t.mask_channel}}},
          {"corruption", {{"type", c.corruption_type}, {"param", c.corruption_param}}},
          {"imputer",
           {{"method", c.method},
            {"methods", c.methods},
            {"knn_k", c.imputer.knn_k},
            {"mice_iterations", c.imputer.mice_iterations},
            {"mida",
             {{"layers", m.layers},
              {"width_step", m.width_step},
              {"epochs", m.epochs},
              {"batch_rows", m.batch_rows},
              {"drop_rate", m.drop_rate},
              {"lr", m.lr}}},
            {"lrtc",
             {{"truncation", l.truncation},
              {"tolerance", l.tolerance},
              {"max_iterations", l.max_iterations},
              {"rho_scale", l.rho_scale},
              {"rho_growth", l.rho_growth},
              {"rho_max", l.rho_max}}}}},
          {"augmentation",
           {{"enabled", c.augmentation.enabled},
            {"imputer", c.augmentation.imputer},
            {"band", c.augmentation.band},
            {"domain_knowledge", c.augmentation.domain_knowledge},
            {"temperature_model", c.augmentation.temperature_model}}},
          {"evaluation", {{"period", c.period}}}};
}

}  // namespace solarmend

#endif  // SOLARMEND_CONFIG_HPP
