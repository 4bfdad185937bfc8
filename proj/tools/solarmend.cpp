// solarmend command-line interface.
//
//   solarmend synth      --out DIR [--sites N --inverters N --days N --weather --outages]
//   solarmend ingest     --data CSV --metadata CSV --out DIR
//   solarmend profile    --data CSV --metadata CSV --out DIR
//   solarmend augment    --data CSV --metadata CSV --out DIR
//   solarmend corrupt    --data CSV --metadata CSV --out DIR --missing-type bm --missing-param 6
//   solarmend train      --data CSV --metadata CSV --out DIR
//   solarmend impute     --data CSV --metadata CSV --out DIR [--checkpoint FILE | --method NAME]
//   solarmend evaluate   --data CSV --truth CSV --mask CSV --metadata CSV --out DIR
//   solarmend experiment --data CSV --metadata CSV --out DIR --train

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "solarmend/solarmend.hpp"

namespace fs = std::filesystem;
using namespace solarmend;

namespace {

struct Flags {
  std::string config;
  std::optional<std::string> data, metadata, out, method, missing_type;
  std::optional<std::uint64_t> seed;
  std::optional<double> missing_param, epsilon;
  std::optional<int> epochs;
  bool no_domain_knowledge = false;
  bool no_augmentation = false;
  bool epsilon_sweep = false;
  bool train = false;
  bool quiet = false;
  std::string checkpoint, truth, mask, scenarios;
  // synth
  std::size_t sites = 8, inverters = 4, days = 90;
  bool weather = false, outages = false;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "JSON run configuration");
  app->add_option("--data", f.data, "data CSV (timestamp,inverter_id,power[,g_poa,t_module])");
  app->add_option("--metadata", f.metadata, "inverter metadata CSV");
  app->add_option("--out", f.out, "output directory");
  app->add_option("--seed", f.seed, "root seed");
  app->add_option("--method", f.method, "std-gae, mean, li, knn, mice, mida or lrtc-tnn");
  app->add_option("--missing-type", f.missing_type, "corruption type")->check(CLI::IsMember({"mcar", "bm"}));
  app->add_option("--missing-param", f.missing_param, "MCAR fraction in [0,1], or BM block length in hours");
  app->add_option("--epsilon", f.epsilon, "graph sparsity threshold in [0,1]");
  app->add_option("--epochs", f.epochs, "training epochs");
  app->add_flag("--no-domain-knowledge", f.no_domain_knowledge, "disable the physics validator");
  app->add_flag("--no-augmentation", f.no_augmentation, "train against the observed data only");
  app->add_flag("--quiet", f.quiet, "suppress progress messages");
}

RunConfig resolve(const Flags& f) {
  RunConfig c = f.config.empty() ? RunConfig{} : parse_config_file(f.config);
  if (f.data) c.data = *f.data;
  if (f.metadata) c.metadata = *f.metadata;
  if (f.out) c.out = *f.out;
  if (f.seed) c.seed = *f.seed;
  if (f.method) c.method = *f.method;
  if (f.missing_type) c.corruption_type = *f.missing_type;
  if (f.missing_param) c.corruption_param = *f.missing_param;
  if (f.epsilon) c.train.epsilon_graph = *f.epsilon;
  if (f.epochs) c.train.epochs = *f.epochs;
  if (f.no_domain_knowledge) c.augmentation.domain_knowledge = false;
  if (f.no_augmentation) c.augmentation.enabled = false;
  c.validate();
  return c;
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw ConfigError(std::string("missing required ") + flag);
}

IngestOptions ingest_options(const RunConfig& c) {
  IngestOptions o;
  o.unit = c.unit == "normalized" ? PowerUnit::Normalized : PowerUnit::Watts;
  return o;
}

/// Reads the data file; normalization is fitted on the training days.
PvFleetSeries load(const RunConfig& c, const std::string& path, std::vector<PowerScale> scales = {}) {
  require(path, "--data");
  require(c.metadata, "--metadata");
  IngestOptions o = ingest_options(c);
  if (scales.empty()) {
    const PvFleetSeries probe = ingest_csv(path, c.metadata, o);
    o.fit_steps = split_days(probe.days()).train * kStepsPerDay;
    if (o.fit_steps == 0) return probe;
  } else {
    o.scales = std::move(scales);
  }
  return ingest_csv(path, c.metadata, o);
}

fs::path out_dir(const RunConfig& c) {
  fs::path d = c.out;
  fs::create_directories(d);
  return d;
}

nlohmann::json manifest(const RunConfig& c, const std::string& command, nlohmann::json extra = {}) {
  nlohmann::json m{{"tool", "solarmend"}, {"version", kVersion}, {"command", command}, {"seed", c.seed},
                   {"config", to_json(c)}};
  if (!extra.is_null()) m["outputs"] = std::move(extra);
  return m;
}

nlohmann::json scales_json(const PvFleetSeries& s) {
  nlohmann::json a = nlohmann::json::array();
  for (std::size_t i = 0; i < s.nodes(); ++i) {
    a.push_back({{"id", s.inverter_ids[i]}, {"offset", s.scales[i].offset}, {"scale", s.scales[i].scale},
                 {"watt_offset", s.scales[i].watt_offset}, {"watt_scale", s.scales[i].watt_scale}});
  }
  return a;
}

std::vector<PowerScale> scales_from_json(const nlohmann::json& j, const PvFleetSeries& like) {
  std::vector<PowerScale> out;
  if (!j.is_array() || j.size() != like.nodes()) return out;
  for (std::size_t i = 0; i < like.nodes(); ++i) {
    if (j[i].at("id").get<std::string>() != like.inverter_ids[i]) return {};
    out.push_back({j[i].at("offset").get<double>(), j[i].at("scale").get<double>(),
                   j[i].at("watt_offset").get<double>(), j[i].at("watt_scale").get<double>()});
  }
  return out;
}

int cmd_synth(const Flags& f) {
  RunConfig c = resolve(f);
  SynthOptions o;
  o.n_sites = f.sites;
  o.inverters_per_site = f.inverters;
  o.n_days = f.days;
  o.seed = c.seed;
  o.with_weather = f.weather;
  PvFleetSeries s = generate_synthetic_fleet(o);
  if (f.outages) s = plant_outages(s, 0.01, 0.05, derive_seed(c.seed, "outages"));
  const fs::path d = out_dir(c);
  write_data_csv(d / "data.csv", s);
  write_metadata_csv(d / "metadata.csv", s);
  write_json(d / "manifest.json",
             manifest(c, "synth",
                      {{"sites", f.sites}, {"inverters_per_site", f.inverters}, {"days", f.days},
                       {"weather", f.weather}, {"outages", f.outages}}));
  std::cout << "wrote " << s.nodes() << " inverters x " << s.days() << " days to " << d.string() << '\n';
  return 0;
}

int cmd_ingest(const Flags& f) {
  RunConfig c = resolve(f);
  const PvFleetSeries s = load(c, c.data);
  const FleetGraph g = make_graph(s.locations, c.train.epsilon_graph);
  nlohmann::json summary{{"inverters", s.nodes()},
                         {"steps", s.steps()},
                         {"days", s.days()},
                         {"first", format_timestamp(s.timestamps.front())},
                         {"observed", s.observed_count()},
                         {"observed_fraction", static_cast<double>(s.observed_count()) /
                                                   static_cast<double>(s.observed.size())},
                         {"aux", s.has_aux()},
                         {"graph", {{"epsilon", g.epsilon}, {"edges", g.edge_count()},
                                    {"components", connected_components(g)}, {"lambda_max", g.lambda_max}}},
                         {"scales", scales_json(s)}};
  const fs::path d = out_dir(c);
  write_json(d / "ingest.json", summary);
  write_json(d / "manifest.json", manifest(c, "ingest"));
  std::cout << summary.dump(2) << '\n';
  return 0;
}

int cmd_profile(const Flags& f) {
  RunConfig c = resolve(f);
  const PvFleetSeries s = load(c, c.data);
  const MissingProfile p = profile_missing_patterns(s);
  nlohmann::json j{{"attributes", p.attributes}, {"records", p.records}, {"patterns", nlohmann::json::array()}};
  for (const auto& pat : p.patterns) {
    j["patterns"].push_back({{"present", pat.present}, {"count", pat.count}, {"label", p.label(pat)}});
  }
  const fs::path d = out_dir(c);
  write_json(d / "profile.json", j);
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_augment(const Flags& f) {
  RunConfig c = resolve(f);
  const PvFleetSeries s = load(c, c.data);
  const AugmentResult r = augment(s, c.augment_options());
  const fs::path d = out_dir(c);
  write_data_csv(d / "augmented.csv", r.series);
  write_json(d / "manifest.json", manifest(c, "augment",
                                           {{"filled", r.filled_count}, {"clamped", r.clamped_count},
                                            {"physics_skipped", r.physics_skipped}}));
  std::cout << "filled " << r.filled_count << " entries (" << r.clamped_count << " clamped)\n";
  return 0;
}

int cmd_corrupt(const Flags& f) {
  RunConfig c = resolve(f);
  const PvFleetSeries s = load(c, c.data);
  const CorruptionConfig cc = c.corruption(derive_seed(c.seed, c.corruption(0).id()));
  const Corruption r = corrupt(s, cc);
  const fs::path d = out_dir(c);
  write_data_csv(d / "corrupted.csv", r.series);
  write_mask_csv(d / "mask.csv", s, r.mask.keep);
  write_json(d / "manifest.json", manifest(c, "corrupt", {{"scenario", cc.id()}, {"mask_seed", cc.seed},
                                                          {"corrupted", r.mask.corrupted()}}));
  std::cout << cc.id() << ": corrupted " << r.mask.corrupted() << " entries\n";
  return 0;
}

int cmd_train(const Flags& f) {
  RunConfig c = resolve(f);
  const PvFleetSeries d_o = load(c, c.data);
  const PvFleetSeries d_a = augment(d_o, c.augment_options()).series;
  const CorruptionConfig cc = c.corruption(derive_seed(c.seed, c.corruption(0).id()));
  const MissingMask mask = make_mask(d_o.steps(), d_o.nodes(), cc);
  TrainConfig tc = c.train;
  tc.seed = derive_seed(c.seed, "model");
  const bool aug = c.augmentation.enabled;
  std::vector<std::uint8_t> in_obs = mask.keep;
  if (!aug)
    for (std::size_t k = 0; k < in_obs.size(); ++k) in_obs[k] &= d_o.observed[k];
  const TrainSet set = make_train_set(aug ? d_a : d_o, with_observed(d_a, in_obs), tc, !aug);
  const ChebBasis basis = cheb_basis(make_graph(d_o.locations, tc.epsilon_graph), tc.cheb_k);
  const TrainResult r = train(set, basis, tc, [&](std::size_t e, double tl, double vl) {
    if (!f.quiet) std::fprintf(stderr, "epoch %zu train %.6g val %.6g\n", e, tl, vl);
  });
  const fs::path d = out_dir(c);
  save_checkpoint(d / "checkpoint.bin", r.params, {{"scales", scales_json(d_o)}});
  write_json(d / "manifest.json",
             manifest(c, "train", {{"scenario", cc.id()}, {"best_epoch", r.history.best_epoch},
                                   {"best_val_loss", r.history.best_val_loss},
                                   {"train_loss", r.history.train_loss}, {"val_loss", r.history.val_loss}}));
  std::cout << "best epoch " << r.history.best_epoch << " val loss " << r.history.best_val_loss << '\n';
  return 0;
}

int cmd_impute(const Flags& f) {
  RunConfig c = resolve(f);
  const fs::path d = out_dir(c);
  PvFleetSeries out;
  nlohmann::json info;
  if (c.method == kStdGae) {
    if (f.checkpoint.empty()) throw ConfigError("impute with std-gae needs --checkpoint (a trained model)");
    const Checkpoint ck = load_checkpoint(f.checkpoint);
    PvFleetSeries probe = load(c, c.data);
    const auto scales = scales_from_json(ck.extra.value("scales", nlohmann::json()), probe);
    const PvFleetSeries s = scales.empty() ? probe : load(c, c.data, scales);
    const ChebBasis basis =
        cheb_basis(make_graph(s.locations, ck.params.config.epsilon_graph), ck.params.config.cheb_k);
    ImputeOptions io;
    io.domain_knowledge = c.augmentation.domain_knowledge;
    io.validator = c.validator();
    out = impute(s, basis, ck.params, io);
    info = {{"checkpoint", f.checkpoint}};
  } else {
    const PvFleetSeries s = load(c, c.data);
    ImputerSpec spec = c.imputer;
    spec.method = parse_method(c.method);
    spec.seed = derive_seed(c.seed, c.method);
    out = impute_baseline(s, spec);
  }
  info["method"] = c.method;
  write_data_csv(d / "imputed.csv", out);
  write_json(d / "manifest.json", manifest(c, "impute", info));
  std::cout << "wrote " << (d / "imputed.csv").string() << '\n';
  return 0;
}

int cmd_evaluate(const Flags& f) {
  RunConfig c = resolve(f);
  require(f.truth, "--truth");
  require(f.mask, "--mask");
  const PvFleetSeries truth_o = load(c, f.truth);
  const PvFleetSeries imputed = load(c, c.data, truth_o.scales);
  if (!imputed.fully_observed()) throw DataError("evaluate: imputed data has missing entries");
  PvFleetSeries truth = augment(truth_o, c.augment_options()).series;
  truth.observed = truth_o.observed;
  MissingMask mask;
  mask.keep = read_mask_csv(f.mask, truth);
  mask.provenance = c.corruption(0);
  EvalOptions eo{c.period, c.method};
  EvalReport r = evaluate_run(imputed, truth, mask, eo);
  // corrupt writes its scenario id next to the mask; prefer it over the config
  const fs::path mask_manifest = fs::path(f.mask).parent_path() / "manifest.json";
  if (std::ifstream is(mask_manifest); is) {
    const auto j = nlohmann::json::parse(is, nullptr, false);
    if (j.is_object() && j.value("command", "") == "corrupt" && j.contains("outputs") &&
        j["outputs"].is_object() && j["outputs"].contains("scenario") && j["outputs"]["scenario"].is_string())
      r.scenario = j["outputs"]["scenario"].get<std::string>();
  }
  const fs::path d = out_dir(c);
  write_report_json(d / "report.json", r);
  write_report_csv(d / "report.csv", r);
  write_json(d / "manifest.json", manifest(c, "evaluate"));
  std::cout << "mae " << format_number(r.mae) << " rmse " << format_number(r.rmse) << " n " << r.n << '\n';
  return 0;
}

std::vector<Scenario> parse_scenarios(const std::string& text) {
  if (text.empty()) return default_scenarios();
  std::vector<Scenario> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError("--scenarios items look like mcar:0.4 or bm:6");
    out.push_back({item.substr(0, colon), parse_number(item.substr(colon + 1), "--scenarios parameter")});
  }
  return out;
}

int cmd_experiment(const Flags& f) {
  RunConfig c = resolve(f);
  const PvFleetSeries d_o = load(c, c.data);
  ExperimentOptions opt;
  opt.scenarios = parse_scenarios(f.scenarios);
  opt.train = f.train;
  opt.epsilon_sweep = f.epsilon_sweep;
  if (!f.checkpoint.empty()) opt.model = load_checkpoint(f.checkpoint).params;
  if (!f.quiet) opt.log = [](const std::string& m) { std::fprintf(stderr, "%s\n", m.c_str()); };
  const ExperimentResult r = run_experiment(d_o, c, opt);
  write_experiment(out_dir(c), r);
  std::cout << "wrote " << r.reports.size() << " reports to " << c.out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"solarmend: graph-autoencoder imputation for PV fleet timeseries"};
  app.require_subcommand(1);
  Flags f;
  auto* synth = app.add_subcommand("synth", "generate a synthetic PV fleet");
  auto* ingest = app.add_subcommand("ingest", "validate and summarize a data set");
  auto* profile = app.add_subcommand("profile", "tabulate missing-data patterns");
  auto* aug = app.add_subcommand("augment", "fill gaps with a library imputer and the domain validator");
  auto* corr = app.add_subcommand("corrupt", "apply an MCAR or block-missing mask");
  auto* tr = app.add_subcommand("train", "train the graph autoencoder");
  auto* imp = app.add_subcommand("impute", "impute missing entries");
  auto* ev = app.add_subcommand("evaluate", "score an imputation");
  auto* ex = app.add_subcommand("experiment", "run the scenario grid over all imputers");
  for (auto* s : {synth, ingest, profile, aug, corr, tr, imp, ev, ex}) add_common(s, f);
  synth->add_option("--sites", f.sites, "number of sites");
  synth->add_option("--inverters", f.inverters, "inverters per site");
  synth->add_option("--days", f.days, "number of days");
  synth->add_flag("--weather", f.weather, "include g_poa and t_module columns");
  synth->add_flag("--outages", f.outages, "plant natural outages");
  imp->add_option("--checkpoint", f.checkpoint, "trained model checkpoint");
  ev->add_option("--truth", f.truth, "ground-truth data CSV");
  ev->add_option("--mask", f.mask, "mask CSV written by corrupt");
  ex->add_flag("--train", f.train, "train the autoencoder per scenario");
  ex->add_option("--checkpoint", f.checkpoint, "use a trained checkpoint instead of --train");
  ex->add_flag("--epsilon-sweep", f.epsilon_sweep, "sweep epsilon over 0, 0.25, 0.5, 0.75, 1");
  ex->add_option("--scenarios", f.scenarios, "comma list such as mcar:0.4,bm:6 (default: all 12)");
  CLI11_PARSE(app, argc, argv);

  const std::pair<CLI::App*, int (*)(const Flags&)> commands[] = {
      {synth, cmd_synth}, {ingest, cmd_ingest}, {profile, cmd_profile}, {aug, cmd_augment},  {corr, cmd_corrupt},
      {tr, cmd_train},    {imp, cmd_impute},    {ev, cmd_evaluate},     {ex, cmd_experiment}};
  for (const auto& [sub, fn] : commands) {
    if (!sub->parsed()) continue;
    try {
      return fn(f);
    } catch (const std::exception& e) {
      std::fprintf(stderr, "solarmend %s: error: %s\n", sub->get_name().c_str(), e.what());
      return 1;
    }
  }
  return 1;
}
