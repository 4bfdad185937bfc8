#ifndef SOLARMEND_PIPELINE_HPP
#define SOLARMEND_PIPELINE_HPP

// End-to-end experiment: augment D_O into D_A, corrupt D_A per scenario,
// train and run imputers on the test split, score against D_A on entries
// that were both corrupted and originally observed.

#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "solarmend/config.hpp"
#include "solarmend/evaluation.hpp"
#include "solarmend/graph.hpp"
#include "solarmend/stdgae.hpp"

namespace solarmend {

inline constexpr const char* kVersion = "1.0.0";

struct Scenario {
  std::string type;  // "mcar" or "bm"
  double param = 0;  // fraction, or hours
};

/// MCAR 10..60 % and BM 2..12 h.
inline std::vector<Scenario> default_scenarios() {
  std::vector<Scenario> s;
  for (int p = 1; p <= 6; ++p) s.push_back({"mcar", p / 10.0});
  for (int h = 2; h <= 12; h += 2) s.push_back({"bm", static_cast<double>(h)});
  return s;
}

inline std::vector<double> epsilon_sweep_values() { return {0.0, 0.25, 0.5, 0.75, 1.0}; }

inline const std::vector<std::string>& all_methods() {
  static const std::vector<std::string> m{kStdGae, "mean", "li", "knn", "mice", "mida", "lrtc-tnn"};
  return m;
}

struct ExperimentOptions {
  std::vector<Scenario> scenarios = default_scenarios();
  bool train = true;
  std::optional<ModelParams> model;  // used when train is false
  bool epsilon_sweep = false;
  std::function<void(const std::string&)> log;
};

struct ExperimentResult {
  std::vector<EvalReport> reports;
  std::vector<std::pair<std::string, ModelParams>> models;  // (scenario/method, params)
  nlohmann::json manifest;
};

struct PreparedData {
  PvFleetSeries observed;   // D_O
  PvFleetSeries augmented;  // D_A, fully observed
  DaySplit split;
};

inline PreparedData prepare_data(const PvFleetSeries& d_o, const RunConfig& cfg) {
  PreparedData p;
  p.observed = d_o;
  p.split = split_days(d_o.days());
  if (p.split.test < 1 || p.split.train < 1) {
    throw DataError("experiment: series of " + std::to_string(d_o.days()) + " days is too short to split");
  }
  p.augmented = augment(d_o, cfg.augment_options()).series;
  return p;
}

/// Series of the given days whose values come from `values` and whose
/// observed mask comes from `observed`.
inline PvFleetSeries with_observed(const PvFleetSeries& values, const std::vector<std::uint8_t>& observed) {
  PvFleetSeries out = values;
  out.observed = observed;
  for (std::size_t k = 0; k < observed.size(); ++k)
    if (!observed[k]) out.values[k] = 0.0;
  return out;
}

inline MissingMask slice_mask(const MissingMask& m, std::size_t nodes, std::size_t first_day, std::size_t days) {
  MissingMask out;
  out.provenance = m.provenance;
  const std::size_t begin = first_day * kStepsPerDay * nodes;
  out.keep.assign(m.keep.begin() + static_cast<long>(begin),
                  m.keep.begin() + static_cast<long>(begin + days * kStepsPerDay * nodes));
  return out;
}

inline std::string method_label(const std::string& method, std::optional<double> epsilon) {
  if (!epsilon) return method;
  return method + "-eps" + format_number(*epsilon);
}

inline ExperimentResult run_experiment(const PvFleetSeries& d_o, const RunConfig& cfg,
                                       const ExperimentOptions& opt = {}) {
  cfg.validate();
  auto log = [&](const std::string& msg) {
    if (opt.log) opt.log(msg);
  };
  const std::vector<std::string> methods = cfg.methods.empty() ? all_methods() : cfg.methods;
  const bool wants_gae = std::find(methods.begin(), methods.end(), kStdGae) != methods.end();
  if (wants_gae && !opt.train && !opt.model) {
    throw Error("experiment: std-gae needs a trained checkpoint or --train");
  }
  log("augmenting " + std::to_string(d_o.nodes()) + " inverters x " + std::to_string(d_o.days()) + " days");
  const PreparedData data = prepare_data(d_o, cfg);
  const std::size_t n = d_o.nodes(), T = d_o.steps();
  const std::size_t test_first = data.split.train + data.split.validation;
  const PvFleetSeries truth_full = [&] {
    PvFleetSeries t = data.augmented;
    t.observed = d_o.observed;
    return t;
  }();
  const PvFleetSeries test_truth = slice_days(truth_full, test_first, data.split.test);

  std::vector<std::optional<double>> epsilons{std::nullopt};
  if (opt.epsilon_sweep) {
    epsilons.clear();
    for (double e : epsilon_sweep_values()) epsilons.emplace_back(e);
  }

  ExperimentResult result;
  nlohmann::json scen_manifest = nlohmann::json::array();
  for (const auto& sc : opt.scenarios) {
    RunConfig scfg = cfg;
    scfg.corruption_type = sc.type;
    scfg.corruption_param = sc.param;
    const std::string id = scfg.corruption(0).id();
    const std::uint64_t sseed = derive_seed(cfg.seed, id);
    const CorruptionConfig cc = scfg.corruption(derive_seed(sseed, "mask"));
    const MissingMask mask = make_mask(T, n, cc);
    const PvFleetSeries d_c = apply_mask(data.augmented, mask.keep);
    const PvFleetSeries test_input = slice_days(d_c, test_first, data.split.test);
    const MissingMask test_mask = slice_mask(mask, n, test_first, data.split.test);
    nlohmann::json sm{{"scenario", id}, {"seed", sseed}, {"mask_seed", cc.seed}, {"corrupted", mask.corrupted()},
                      {"methods", nlohmann::json::array()}};
    log("scenario " + id);

    for (const auto& method : methods) {
      if (method != kStdGae) {
        ImputerSpec spec = cfg.imputer;
        spec.method = parse_method(method);
        spec.seed = derive_seed(sseed, method);
        nlohmann::json mm{{"method", method}};
        PvFleetSeries d_r;
        if (spec.method == ImputerMethod::LRTC_TNN) {
          bool converged = false;
          d_r = impute_lrtc_tnn(test_input, spec.lrtc, &converged);
          mm["converged"] = converged;
        } else {
          d_r = impute_baseline(test_input, spec);
        }
        EvalOptions eo{cfg.period, method};
        result.reports.push_back(evaluate_run(d_r, test_truth, test_mask, eo));
        sm["methods"].push_back(mm);
        log("  " + method + " rmse " + format_number(result.reports.back().rmse));
        continue;
      }
      for (const auto& eps : epsilons) {
        TrainConfig tc = cfg.train;
        if (eps) tc.epsilon_graph = *eps;
        tc.seed = derive_seed(sseed, "model");
        const FleetGraph graph = make_graph(d_o.locations, tc.epsilon_graph);
        const ChebBasis basis = cheb_basis(graph, tc.cheb_k);
        const std::string label = method_label(method, eps);
        nlohmann::json mm{{"method", label}, {"epsilon", tc.epsilon_graph}, {"edges", graph.edge_count()},
                          {"lambda_max", graph.lambda_max}, {"lambda_fallback", graph.lambda_fallback}};
        ModelParams params;
        if (opt.train) {
          const bool aug = cfg.augmentation.enabled;
          const PvFleetSeries targets = aug ? data.augmented : d_o;
          std::vector<std::uint8_t> in_obs = mask.keep;
          if (!aug)
            for (std::size_t k = 0; k < in_obs.size(); ++k) in_obs[k] &= d_o.observed[k];
          const PvFleetSeries inputs = with_observed(data.augmented, in_obs);
          const TrainSet set = make_train_set(targets, inputs, tc, !aug);
          const TrainResult tr = train(set, basis, tc, [&](std::size_t e, double tl, double vl) {
            log("  " + label + " epoch " + std::to_string(e) + " train " + format_number(tl) + " val " +
                format_number(vl));
          });
          params = tr.params;
          mm["best_epoch"] = tr.history.best_epoch;
          mm["best_val_loss"] = tr.history.best_val_loss;
          mm["train_windows"] = set.train_inputs.size();
          result.models.emplace_back(id + "/" + label, params);
        } else {
          params = *opt.model;
          if (params.config.cheb_k != tc.cheb_k) throw Error("experiment: checkpoint Chebyshev order differs");
        }
        ImputeOptions io;
        io.domain_knowledge = cfg.augmentation.domain_knowledge;
        io.validator = cfg.validator();
        const PvFleetSeries d_r = impute(test_input, basis, params, io);
        EvalOptions eo{cfg.period, label};
        result.reports.push_back(evaluate_run(d_r, test_truth, test_mask, eo));
        sm["methods"].push_back(mm);
        log("  " + label + " rmse " + format_number(result.reports.back().rmse));
      }
    }
    scen_manifest.push_back(sm);
  }
  result.manifest = {{"tool", "solarmend"},
                     {"version", kVersion},
                     {"seed", cfg.seed},
                     {"config", to_json(cfg)},
                     {"trained", opt.train},
                     {"epsilon_sweep", opt.epsilon_sweep},
                     {"data",
                      {{"inverters", n},
                       {"steps", T},
                       {"days", d_o.days()},
                       {"observed", d_o.observed_count()},
                       {"split", {data.split.train, data.split.validation, data.split.test}}}},
                     {"scenarios", scen_manifest}};
  return result;
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write " + path.string());
  os << j.dump(2) << '\n';
}

/// Writes <dir>/<scenario>/<method>/report.{json,csv}, the combined
/// report.json, comparison.csv and manifest.json.
inline void write_experiment(const std::filesystem::path& dir, const ExperimentResult& r) {
  std::filesystem::create_directories(dir);
  nlohmann::json all = nlohmann::json::array();
  std::ofstream cmp(dir / "comparison.csv", std::ios::binary);
  cmp << "scenario,method,n,mae,rmse,mean_od,mean_sd\n";
  for (const auto& rep : r.reports) {
    const auto sub = dir / rep.scenario / rep.method;
    std::filesystem::create_directories(sub);
    write_report_json(sub / "report.json", rep);
    write_report_csv(sub / "report.csv", rep);
    all.push_back(to_json(rep));
    cmp << rep.scenario << ',' << rep.method << ',' << rep.n << ',' << format_number(rep.mae) << ','
        << format_number(rep.rmse) << ',' << format_number(rep.mean_od()) << ',' << format_number(rep.mean_sd())
        << '\n';
  }
  for (const auto& [key, params] : r.models) save_checkpoint(dir / key / "checkpoint.bin", params);
  write_json(dir / "report.json", all);
  write_json(dir / "manifest.json", r.manifest);
}

}  // namespace solarmend

#endif  // SOLARMEND_PIPELINE_HPP
