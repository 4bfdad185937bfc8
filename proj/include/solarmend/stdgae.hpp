#ifndef SOLARMEND_STDGAE_HPP
#define SOLARMEND_STDGAE_HPP

// Spatio-temporal denoising graph autoencoder.
//
// Encoder ST-block: gated temporal conv (length / 2) -> Chebyshev graph conv
// at every timestep -> gated temporal conv (length / 2). The decoder block
// mirrors it with transposed convolutions; the last layer is linear and
// collapses to one channel. Temporal layers act on each node independently
// and the graph layer on each timestep independently.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <string>
#include <numeric>
#include <vector>

#include <json.hpp>

#include "solarmend/autodiff.hpp"
#include "solarmend/data_pipeline.hpp"
#include "solarmend/graph.hpp"
#include "solarmend/parallel.hpp"
#include "solarmend/random.hpp"
#include "solarmend/series.hpp"

namespace solarmend {

inline constexpr std::size_t kTemporalKernel = 4;
inline constexpr std::size_t kTemporalStride = 2;
inline constexpr std::size_t kTemporalPadding = 1;

struct TrainConfig {
  int cheb_k = 3;
  int batch_size = 2;
  int epochs = 50;
  double lr = 1e-3;
  double decay = 0.02;
  double epsilon_graph = 1.0;
  std::size_t window = kStepsPerDay;
  std::size_t step = kStepsPerDay;
  std::uint64_t seed = 0;
  // architecture
  int st_blocks = 2;           // 2 = one encoder + one decoder block; 4 for the deep variant
  int hidden = 16;             // channels after the first temporal layer
  bool two_filter_glu = false; // separate gate filter instead of the shared one
  bool mask_channel = false;   // feed the observation mask as a second input channel

  void validate() const {
    if (cheb_k < 1 || batch_size < 1 || epochs < 1 || !(lr > 0) || decay < 0 || window < 1 ||
        step < 1 || hidden < 1) {
      throw Error("train config: cheb_k, batch_size, epochs, lr, window, step, hidden must be positive");
    }
    if (!(epsilon_graph >= 0 && epsilon_graph <= 1)) throw Error("train config: epsilon must lie in [0, 1]");
    if (st_blocks != 2 && st_blocks != 4) throw Error("train config: st_blocks must be 2 or 4");
  }
};

inline nlohmann::json to_json(const TrainConfig& c) {
  return {{"cheb_k", c.cheb_k},       {"batch_size", c.batch_size},   {"epochs", c.epochs},
          {"lr", c.lr},               {"decay", c.decay},             {"epsilon", c.epsilon_graph},
          {"window", c.window},       {"step", c.step},               {"seed", c.seed},
          {"st_blocks", c.st_blocks}, {"hidden", c.hidden},           {"two_filter_glu", c.two_filter_glu},
          {"mask_channel", c.mask_channel}};
}

/// Named trainable tensors plus the architecture they belong to.
struct ModelParams {
  TrainConfig config;  // architecture fields are authoritative
  std::vector<std::string> names;
  std::vector<Tensor> tensors;

  std::size_t index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return i;
    throw Error("model: no parameter named " + name);
  }
  Tensor& operator[](const std::string& name) { return tensors[index_of(name)]; }
  const Tensor& operator[](const std::string& name) const { return tensors[index_of(name)]; }
  std::size_t count() const {
    std::size_t c = 0;
    for (const auto& t : tensors) c += t.size();
    return c;
  }
};

namespace detail {

struct BlockWidths {
  std::size_t in, hidden, out, dec_out;
};

inline std::vector<BlockWidths> block_widths(const TrainConfig& c) {
  std::vector<BlockWidths> w;
  std::size_t in = c.mask_channel ? 2 : 1;
  const int blocks = c.st_blocks / 2;
  for (int b = 0; b < blocks; ++b) {
    const std::size_t h = static_cast<std::size_t>(c.hidden) << b;
    w.push_back({in, h, 2 * h, b == 0 ? std::size_t{1} : in});
    in = 2 * h;
  }
  return w;
}

}  // namespace detail

/// Parameter layout for a config, zero-initialized.
inline ModelParams zero_params(const TrainConfig& c) {
  c.validate();
  ModelParams p;
  p.config = c;
  const std::size_t K = static_cast<std::size_t>(c.cheb_k);
  auto add = [&](std::string name, Shape shape) {
    p.names.push_back(std::move(name));
    p.tensors.emplace_back(std::move(shape), 0.0);
  };
  auto gated = [&](const std::string& prefix, Shape w, std::size_t out) {
    add(prefix + ".w", w);
    add(prefix + ".b", {out});
    if (c.two_filter_glu) {
      add(prefix + ".gate.w", w);
      add(prefix + ".gate.b", {out});
    }
  };
  const auto widths = detail::block_widths(c);
  for (std::size_t b = 0; b < widths.size(); ++b) {
    const auto& w = widths[b];
    const std::string e = "enc" + std::to_string(b);
    gated(e + ".t1", {w.hidden, w.in, kTemporalKernel}, w.hidden);
    add(e + ".cheb.theta", {K, w.hidden, w.hidden});
    add(e + ".cheb.b", {w.hidden});
    gated(e + ".t2", {w.out, w.hidden, kTemporalKernel}, w.out);
  }
  for (std::size_t b = widths.size(); b-- > 0;) {
    const auto& w = widths[b];
    const std::string d = "dec" + std::to_string(b);
    gated(d + ".t1", {w.out, w.hidden, kTemporalKernel}, w.hidden);
    add(d + ".cheb.theta", {K, w.hidden, w.hidden});
    add(d + ".cheb.b", {w.hidden});
    if (b == 0) {
      add(d + ".t2.w", {w.hidden, w.dec_out, kTemporalKernel});
      add(d + ".t2.b", {w.dec_out});
    } else {
      gated(d + ".t2", {w.hidden, w.dec_out, kTemporalKernel}, w.dec_out);
    }
  }
  return p;
}

/// Weights uniform in [-sqrt(1/fan_in), sqrt(1/fan_in)]; biases zero.
inline ModelParams init_params(const TrainConfig& c) {
  ModelParams p = zero_params(c);
  Rng rng(derive_seed(c.seed, "init"));
  for (std::size_t i = 0; i < p.names.size(); ++i) {
    Tensor& t = p.tensors[i];
    if (t.rank() != 3) continue;  // biases
    const bool cheb = p.names[i].find(".cheb.") != std::string::npos;
    const bool transposed = p.names[i].rfind("dec", 0) == 0 && !cheb;
    const double fan_in = cheb ? static_cast<double>(t.dim(0) * t.dim(1))
                               : static_cast<double>((transposed ? t.dim(0) : t.dim(1)) * t.dim(2));
    const double bound = std::sqrt(1.0 / fan_in);
    for (auto& v : t.storage()) v = rng.uniform(-bound, bound);
  }
  return p;
}

/// Parameters registered on a tape, addressable by name.
struct ParamVars {
  const ModelParams* params = nullptr;
  std::vector<Var> vars;

  Var operator[](const std::string& name) const { return vars[params->index_of(name)]; }
};

inline ParamVars register_params(Tape& tape, const ModelParams& p, bool trainable) {
  ParamVars v;
  v.params = &p;
  for (const auto& t : p.tensors) v.vars.push_back(trainable ? tape.parameter(t) : tape.constant(t));
  return v;
}

/// Gated linear unit with one shared filter: c * sigmoid(c), c = x conv w.
inline Var glu(Var x, Var filter, Var bias, bool transposed = false,
               std::size_t stride = kTemporalStride, std::size_t padding = kTemporalPadding) {
  Var c = transposed ? conv1d_transpose(x, filter, stride, padding) : conv1d(x, filter, stride, padding);
  c = add_channel_bias(c, bias);
  return hadamard(c, sigmoid(c));
}

namespace detail {

inline Var gated_layer(const ParamVars& p, const std::string& prefix, Var x, bool transposed,
                       bool two_filter) {
  if (!two_filter) return glu(x, p[prefix + ".w"], p[prefix + ".b"], transposed);
  auto conv = [&](Var w) {
    return transposed ? conv1d_transpose(x, w, kTemporalStride, kTemporalPadding)
                      : conv1d(x, w, kTemporalStride, kTemporalPadding);
  };
  Var a = add_channel_bias(conv(p[prefix + ".w"]), p[prefix + ".b"]);
  Var g = add_channel_bias(conv(p[prefix + ".gate.w"]), p[prefix + ".gate.b"]);
  return hadamard(a, sigmoid(g));
}

}  // namespace detail

/// Forward pass of a [len x n x c_in] window to a [len x n x 1] output.
inline Var forward(Var window, const ChebBasis& basis, const ParamVars& p) {
  const TrainConfig& c = p.params->config;
  const Tensor& x = window.value();
  const std::size_t in_ch = c.mask_channel ? 2 : 1;
  if (x.rank() != 3 || x.dim(2) != in_ch) {
    throw DimensionError("forward: expected [len x n x " + std::to_string(in_ch) + "], got " +
                         shape_string(x.shape()));
  }
  if (x.dim(1) != basis.nodes()) {
    throw DimensionError("forward: window has " + std::to_string(x.dim(1)) + " nodes, graph has " +
                         std::to_string(basis.nodes()));
  }
  if (basis.order() != static_cast<std::size_t>(c.cheb_k)) {
    throw DimensionError("forward: graph basis has " + std::to_string(basis.order()) +
                         " terms, model expects " + std::to_string(c.cheb_k));
  }
  const std::size_t blocks = static_cast<std::size_t>(c.st_blocks / 2);
  const std::size_t factor = std::size_t{1} << (2 * blocks);
  if (x.dim(0) % factor != 0 || x.dim(0) == 0) {
    throw DimensionError("forward: window length " + std::to_string(x.dim(0)) +
                         " must be a positive multiple of " + std::to_string(factor));
  }
  Var h = window;
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::string e = "enc" + std::to_string(b);
    h = detail::gated_layer(p, e + ".t1", h, false, c.two_filter_glu);
    h = add_channel_bias(cheb_conv(h, basis, p[e + ".cheb.theta"]), p[e + ".cheb.b"]);
    h = detail::gated_layer(p, e + ".t2", h, false, c.two_filter_glu);
  }
  for (std::size_t b = blocks; b-- > 0;) {
    const std::string d = "dec" + std::to_string(b);
    h = detail::gated_layer(p, d + ".t1", h, true, c.two_filter_glu);
    h = add_channel_bias(cheb_conv(h, basis, p[d + ".cheb.theta"]), p[d + ".cheb.b"]);
    if (b == 0) {
      h = add_channel_bias(conv1d_transpose(h, p[d + ".t2.w"], kTemporalStride, kTemporalPadding),
                           p[d + ".t2.b"]);
    } else {
      h = detail::gated_layer(p, d + ".t2", h, true, c.two_filter_glu);
    }
  }
  return h;
}

/// Value-only forward pass.
inline Tensor forward(const Tensor& window, const ChebBasis& basis, const ModelParams& params) {
  Tape tape;
  const ParamVars p = register_params(tape, params, false);
  return forward(tape.constant(window), basis, p).value();
}

/// Model input for a window: values, plus the mask channel when enabled.
inline Tensor model_input(const Tensor& values, const std::vector<std::uint8_t>& observed,
                          bool mask_channel) {
  const std::size_t L = values.dim(0), n = values.dim(1);
  Tensor in(Shape{L, n, std::size_t{mask_channel ? 2u : 1u}});
  for (std::size_t k = 0; k < L * n; ++k) {
    const double v = observed.empty() || observed[k] ? values[k] : 0.0;
    if (mask_channel) {
      in[2 * k] = v;
      in[2 * k + 1] = observed.empty() ? 1.0 : observed[k];
    } else {
      in[k] = v;
    }
  }
  return in;
}

// ---------------------------------------------------------------------------
// Training

/// Corrupted input windows paired index-for-index with augmented targets.
struct TrainSet {
  std::vector<Window> train_inputs, train_targets;
  std::vector<Window> val_inputs, val_targets;
  /// Restrict the loss to entries observed in the target (used when no
  /// augmentation has filled the targets).
  bool loss_on_observed_targets = false;
};

struct TrainHistory {
  std::vector<double> train_loss;
  std::vector<double> val_loss;
  std::size_t best_epoch = 0;
  double best_val_loss = 0.0;
};

struct TrainResult {
  ModelParams params;  // best-validation parameters
  TrainHistory history;
};

namespace detail {

struct WindowGrad {
  double loss = 0.0;
  std::vector<Tensor> grads;
};

inline Tensor loss_weights(const Window& target, bool observed_only) {
  Tensor w(target.values.shape(), 1.0);
  if (observed_only) {
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = target.observed[k] ? 1.0 : 0.0;
  }
  return w;
}

inline WindowGrad window_grad(const ModelParams& params, const ChebBasis& basis, const Window& input,
                              const Window& target, bool observed_only) {
  Tape tape;
  const ParamVars p = register_params(tape, params, true);
  Var x = tape.constant(model_input(input.values, input.observed, params.config.mask_channel));
  Var y = forward(x, basis, p);
  Tensor w = loss_weights(target, observed_only);
  double wsum = 0.0;
  for (double v : w.storage()) wsum += v;
  WindowGrad g;
  if (wsum == 0.0) {
    for (const auto& t : params.tensors) g.grads.emplace_back(t.shape(), 0.0);
    return g;
  }
  Var loss = weighted_mse(y, tape.constant(target.values), w);
  tape.backward(loss);
  g.loss = loss.value().item();
  for (auto v : p.vars) g.grads.push_back(tape.grad(v));
  return g;
}

inline double window_loss(const ModelParams& params, const ChebBasis& basis, const Window& input,
                          const Window& target, bool observed_only) {
  const Tensor y = forward(model_input(input.values, input.observed, params.config.mask_channel),
                           basis, params);
  const Tensor w = loss_weights(target, observed_only);
  double acc = 0.0, wsum = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k) {
    const double r = y[k] - target.values[k];
    acc += w[k] * r * r;
    wsum += w[k];
  }
  return wsum > 0 ? acc / wsum : 0.0;
}

}  // namespace detail

inline double mean_loss(const ModelParams& params, const ChebBasis& basis,
                        const std::vector<Window>& inputs, const std::vector<Window>& targets,
                        bool observed_only = false) {
  if (inputs.size() != targets.size()) throw Error("mean_loss: input and target window counts differ");
  if (inputs.empty()) return 0.0;
  std::vector<double> losses(inputs.size());
  parallel_for(inputs.size(), [&](std::size_t i) {
    losses[i] = detail::window_loss(params, basis, inputs[i], targets[i], observed_only);
  });
  double acc = 0.0;
  for (double l : losses) acc += l;
  return acc / static_cast<double>(losses.size());
}

/// Minimizes the mean squared reconstruction error between forward(input)
/// and the target over all positions. Mini-batches of config.batch_size
/// windows, gradient = mean over the batch; Adam with inverse-time decay.
/// Keeps the parameters with the lowest validation loss (training loss when
/// no validation windows are given).
inline TrainResult train(const TrainSet& data, const ChebBasis& basis, const TrainConfig& config,
                         const std::function<void(std::size_t, double, double)>& on_epoch = {}) {
  config.validate();
  if (data.train_inputs.empty() || data.train_inputs.size() != data.train_targets.size() ||
      data.val_inputs.size() != data.val_targets.size()) {
    throw Error("train: input and target window lists must be non-empty and aligned");
  }
  TrainResult result;
  ModelParams params = init_params(config);
  AdamState adam(AdamConfig{config.lr, config.decay});
  Rng rng(derive_seed(config.seed, "shuffle"));
  std::vector<std::size_t> order(data.train_inputs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  double best = std::numeric_limits<double>::infinity();
  const std::size_t bs = static_cast<std::size_t>(config.batch_size);
  const bool obs_only = data.loss_on_observed_targets;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    double epoch_loss = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += bs) {
      const std::size_t b = std::min(bs, order.size() - start);
      std::vector<detail::WindowGrad> grads(b);
      try {
        parallel_for(b, [&](std::size_t j) {
          const std::size_t w = order[start + j];
          grads[j] = detail::window_grad(params, basis, data.train_inputs[w], data.train_targets[w], obs_only);
        });
      } catch (const NumericError& e) {
        throw NumericError("train: non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
                           std::to_string(batches) + ": " + e.what());
      }
      std::vector<Tensor> mean_grad = grads[0].grads;
      double batch_loss = grads[0].loss;
      for (std::size_t j = 1; j < b; ++j) {
        batch_loss += grads[j].loss;
        for (std::size_t q = 0; q < mean_grad.size(); ++q)
          for (std::size_t k = 0; k < mean_grad[q].size(); ++k) mean_grad[q][k] += grads[j].grads[q][k];
      }
      for (auto& g : mean_grad)
        for (auto& v : g.storage()) v /= static_cast<double>(b);
      batch_loss /= static_cast<double>(b);
      if (!std::isfinite(batch_loss)) {
        throw NumericError("train: non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
                           std::to_string(batches));
      }
      adam.update(params.tensors, mean_grad, static_cast<std::size_t>(epoch));
      epoch_loss += batch_loss;
      ++batches;
    }
    const double train_loss = epoch_loss / static_cast<double>(batches);
    const double val_loss = data.val_inputs.empty()
                                ? mean_loss(params, basis, data.train_inputs, data.train_targets, obs_only)
                                : mean_loss(params, basis, data.val_inputs, data.val_targets, obs_only);
    result.history.train_loss.push_back(train_loss);
    result.history.val_loss.push_back(val_loss);
    if (val_loss < best) {
      best = val_loss;
      result.params = params;
      result.history.best_epoch = static_cast<std::size_t>(epoch);
      result.history.best_val_loss = val_loss;
    }
    if (on_epoch) on_epoch(static_cast<std::size_t>(epoch), train_loss, val_loss);
  }
  return result;
}

/// Builds a TrainSet from aligned augmented/corrupted series using the
/// 240/60/60 day split (train/validation; test days are left out).
inline TrainSet make_train_set(const PvFleetSeries& augmented, const PvFleetSeries& corrupted,
                               const TrainConfig& config, bool loss_on_observed_targets = false) {
  const DaySplit split = split_days(augmented.days());
  TrainSet set;
  set.loss_on_observed_targets = loss_on_observed_targets;
  auto windows = [&](const PvFleetSeries& s, std::size_t first, std::size_t count) {
    if (count == 0) return std::vector<Window>{};
    return slide_windows(slice_days(s, first, count), config.window, config.step);
  };
  set.train_targets = windows(augmented, 0, split.train);
  set.train_inputs = windows(corrupted, 0, split.train);
  set.val_targets = windows(augmented, split.train, split.validation);
  set.val_inputs = windows(corrupted, split.train, split.validation);
  return set;
}

// ---------------------------------------------------------------------------
// Imputation

struct ImputeOptions {
  bool domain_knowledge = true;
  ValidatorOptions validator;
};

/// Reconstructs every unobserved entry; observed entries pass through
/// unchanged. A trailing partial window is zero-padded for the pass.
inline PvFleetSeries impute(const PvFleetSeries& s, const ChebBasis& basis, const ModelParams& params,
                            const ImputeOptions& options = {}) {
  const std::size_t T = s.steps(), n = s.nodes();
  const std::size_t W = params.config.window;
  const std::size_t padded = (T + W - 1) / W * W;
  PvFleetSeries out = s;
  std::fill(out.observed.begin(), out.observed.end(), std::uint8_t{1});
  const std::size_t windows = padded / W;
  std::vector<Tensor> recon(windows);
  parallel_for(windows, [&](std::size_t w) {
    Tensor values(Shape{W, n, 1});
    std::vector<std::uint8_t> obs(W * n, 0);
    for (std::size_t t = 0; t < W && w * W + t < T; ++t) {
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t k = s.index(w * W + t, i);
        obs[t * n + i] = s.observed[k];
        values[t * n + i] = s.observed[k] ? s.values[k] : 0.0;
      }
    }
    recon[w] = forward(model_input(values, obs, params.config.mask_channel), basis, params);
  });
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t k = s.index(t, i);
      if (s.observed[k]) continue;
      double v = recon[t / W][(t % W) * n + i];
      if (options.domain_knowledge) v = validate_entry(s, t, i, v, options.validator).value;
      out.values[k] = v;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Checkpoints: "SMGAECK1" magic, u32 version, u32 json length + config
// JSON, u32 tensor count, then per tensor: u32 name length + name, u32 rank,
// u64 dims, f64 data. Little-endian.

inline constexpr std::uint32_t kCheckpointVersion = 1;

namespace detail {

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!is) throw DataError("checkpoint: truncated file");
  return v;
}

inline TrainConfig config_from_json(const nlohmann::json& j) {
  TrainConfig c;
  c.cheb_k = j.at("cheb_k").get<int>();
  c.batch_size = j.at("batch_size").get<int>();
  c.epochs = j.at("epochs").get<int>();
  c.lr = j.at("lr").get<double>();
  c.decay = j.at("decay").get<double>();
  c.epsilon_graph = j.at("epsilon").get<double>();
  c.window = j.at("window").get<std::size_t>();
  c.step = j.at("step").get<std::size_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.st_blocks = j.at("st_blocks").get<int>();
  c.hidden = j.at("hidden").get<int>();
  c.two_filter_glu = j.at("two_filter_glu").get<bool>();
  c.mask_channel = j.at("mask_channel").get<bool>();
  return c;
}

}  // namespace detail

inline void save_checkpoint(const std::filesystem::path& path, const ModelParams& params,
                            const nlohmann::json& extra = nlohmann::json::object()) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write " + path.string());
  os.write("SMGAECK1", 8);
  detail::put<std::uint32_t>(os, kCheckpointVersion);
  nlohmann::json j{{"model", to_json(params.config)}, {"extra", extra}};
  const std::string js = j.dump();
  detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(js.size()));
  os.write(js.data(), static_cast<std::streamsize>(js.size()));
  detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(params.tensors.size()));
  for (std::size_t i = 0; i < params.tensors.size(); ++i) {
    const auto& name = params.names[i];
    const auto& t = params.tensors[i];
    detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(name.size()));
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
    detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(t.rank()));
    for (auto d : t.shape()) detail::put<std::uint64_t>(os, d);
    os.write(reinterpret_cast<const char*>(t.storage().data()),
             static_cast<std::streamsize>(t.size() * sizeof(double)));
  }
}

struct Checkpoint {
  ModelParams params;
  nlohmann::json extra;
};

inline Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open checkpoint " + path.string());
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, "SMGAECK1", 8) != 0) throw DataError(path.string() + ": not a model checkpoint");
  const auto version = detail::get<std::uint32_t>(is);
  if (version != kCheckpointVersion) {
    throw DataError(path.string() + ": checkpoint version " + std::to_string(version) +
                    " is not supported (expected " + std::to_string(kCheckpointVersion) + ")");
  }
  std::string js(detail::get<std::uint32_t>(is), '\0');
  is.read(js.data(), static_cast<std::streamsize>(js.size()));
  const auto j = nlohmann::json::parse(js);
  Checkpoint ck;
  ck.extra = j.value("extra", nlohmann::json::object());
  ck.params = zero_params(detail::config_from_json(j.at("model")));
  const auto count = detail::get<std::uint32_t>(is);
  if (count != ck.params.tensors.size()) throw DataError(path.string() + ": parameter count mismatch");
  for (std::uint32_t i = 0; i < count; ++i) {
    std::string name(detail::get<std::uint32_t>(is), '\0');
    is.read(name.data(), static_cast<std::streamsize>(name.size()));
    Shape shape(detail::get<std::uint32_t>(is));
    for (auto& d : shape) d = detail::get<std::uint64_t>(is);
    Tensor& t = ck.params[name];
    if (t.shape() != shape) throw DataError(path.string() + ": shape mismatch for " + name);
    is.read(reinterpret_cast<char*>(t.storage().data()), static_cast<std::streamsize>(t.size() * sizeof(double)));
    if (!is) throw DataError(path.string() + ": truncated tensor data");
  }
  return ck;
}

}  // namespace solarmend

#endif  // SOLARMEND_STDGAE_HPP
