#ifndef SOLARMEND_BASELINES_HPP
#define SOLARMEND_BASELINES_HPP

// Reference imputers. Each consumes a series with unobserved entries and
// returns a fully observed copy in which observed entries are untouched.

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "solarmend/autodiff.hpp"
#include "solarmend/random.hpp"
#include "solarmend/series.hpp"

namespace solarmend {

enum class ImputerMethod { Mean, LI, KNN, MICE, MIDA, LRTC_TNN };

inline const char* method_name(ImputerMethod m) {
  switch (m) {
    case ImputerMethod::Mean: return "mean";
    case ImputerMethod::LI: return "li";
    case ImputerMethod::KNN: return "knn";
    case ImputerMethod::MICE: return "mice";
    case ImputerMethod::MIDA: return "mida";
    case ImputerMethod::LRTC_TNN: return "lrtc-tnn";
  }
  return "?";
}

inline ImputerMethod parse_method(std::string name) {
  std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) {
    return c == '_' ? '-' : static_cast<char>(std::tolower(c));
  });
  for (auto m : {ImputerMethod::Mean, ImputerMethod::LI, ImputerMethod::KNN, ImputerMethod::MICE,
                 ImputerMethod::MIDA, ImputerMethod::LRTC_TNN}) {
    if (name == method_name(m)) return m;
  }
  throw Error("unknown imputation method '" + name + "'");
}

struct MidaSpec {
  int layers = 3;
  int width_step = 7;
  int epochs = 100;
  int batch_rows = 256;
  double drop_rate = 0.5;
  double lr = 1e-3;
};

struct LrtcSpec {
  double truncation = 0.1;  // r: fraction of singular values left unpenalized
  double tolerance = 1e-4;
  int max_iterations = 200;
  double rho_scale = 1e-4;   // initial penalty = rho_scale * ||observed||
  double rho_growth = 1.05;  // penalty multiplier per iteration
  double rho_max = 1e5;
};

struct ImputerSpec {
  ImputerMethod method = ImputerMethod::KNN;
  int knn_k = 5;
  int mice_iterations = 10;
  MidaSpec mida;
  LrtcSpec lrtc;
  std::uint64_t seed = 0;
};

namespace detail {

inline void require_observations(const PvFleetSeries& s) {
  for (std::size_t i = 0; i < s.nodes(); ++i) {
    bool any = false;
    for (std::size_t t = 0; t < s.steps() && !any; ++t) any = s.is_observed(t, i);
    if (!any) throw DataError("inverter " + s.inverter_ids[i] + " has no observed values");
  }
}

inline PvFleetSeries completed_copy(const PvFleetSeries& s) {
  PvFleetSeries out = s;
  std::fill(out.observed.begin(), out.observed.end(), std::uint8_t{1});
  return out;
}

}  // namespace detail

/// Column-wise mean of each inverter's observed values.
inline PvFleetSeries impute_mean(const PvFleetSeries& s) {
  detail::require_observations(s);
  PvFleetSeries out = detail::completed_copy(s);
  for (std::size_t i = 0; i < s.nodes(); ++i) {
    double sum = 0.0;
    std::size_t c = 0;
    for (std::size_t t = 0; t < s.steps(); ++t) {
      if (s.is_observed(t, i)) {
        sum += s.value(t, i);
        ++c;
      }
    }
    const double mean = sum / static_cast<double>(c);
    for (std::size_t t = 0; t < s.steps(); ++t) {
      if (!s.is_observed(t, i)) out.value(t, i) = mean;
    }
  }
  return out;
}

/// Linear interpolation between the observed values bracketing each gap;
/// leading and trailing gaps carry the nearest observed value.
inline PvFleetSeries impute_li(const PvFleetSeries& s) {
  detail::require_observations(s);
  PvFleetSeries out = detail::completed_copy(s);
  const std::size_t T = s.steps();
  for (std::size_t i = 0; i < s.nodes(); ++i) {
    std::ptrdiff_t prev = -1;
    for (std::size_t t = 0; t <= T; ++t) {
      if (t < T && !s.is_observed(t, i)) continue;
      const std::size_t gap_begin = static_cast<std::size_t>(prev + 1);
      for (std::size_t g = gap_begin; g < t; ++g) {
        if (prev < 0) {
          out.value(g, i) = s.value(t, i);
        } else if (t == T) {
          out.value(g, i) = s.value(static_cast<std::size_t>(prev), i);
        } else {
          const double a = s.value(static_cast<std::size_t>(prev), i), b = s.value(t, i);
          const double w = static_cast<double>(g - static_cast<std::size_t>(prev)) /
                           static_cast<double>(t - static_cast<std::size_t>(prev));
          out.value(g, i) = a + (b - a) * w;
        }
      }
      prev = static_cast<std::ptrdiff_t>(t);
    }
  }
  return out;
}

/// Distance between two inverters over their co-observed steps, scaled up
/// to the full length (nan-euclidean). Infinite when never co-observed.
inline double inverter_distance(const PvFleetSeries& s, std::size_t i, std::size_t j) {
  double acc = 0.0;
  std::size_t co = 0;
  for (std::size_t t = 0; t < s.steps(); ++t) {
    if (s.is_observed(t, i) && s.is_observed(t, j)) {
      const double d = s.value(t, i) - s.value(t, j);
      acc += d * d;
      ++co;
    }
  }
  if (co == 0) return std::numeric_limits<double>::infinity();
  return std::sqrt(static_cast<double>(s.steps()) / static_cast<double>(co) * acc);
}

/// Inverter-space KNN: a missing (t, i) becomes the mean of the k inverters
/// nearest to i (by inverter_distance) that are observed at t. Entries with
/// no candidate fall back to linear interpolation.
inline PvFleetSeries impute_knn(const PvFleetSeries& s, int k) {
  if (k < 1) throw Error("impute_knn: k must be >= 1");
  detail::require_observations(s);
  const std::size_t n = s.nodes(), T = s.steps();
  std::vector<std::vector<std::size_t>> ranked(n);
  {
    Eigen::MatrixXd dist = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) dist(i, j) = dist(j, i) = inverter_distance(s, i, j);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i && std::isfinite(dist(i, j))) ranked[i].push_back(j);
      }
      std::stable_sort(ranked[i].begin(), ranked[i].end(),
                       [&](std::size_t a, std::size_t b) { return dist(i, a) < dist(i, b); });
    }
  }
  PvFleetSeries out = detail::completed_copy(s);
  PvFleetSeries fallback;
  bool have_fallback = false;
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      if (s.is_observed(t, i)) continue;
      double sum = 0.0;
      int used = 0;
      for (std::size_t j : ranked[i]) {
        if (!s.is_observed(t, j)) continue;
        sum += s.value(t, j);
        if (++used == k) break;
      }
      if (used > 0) {
        out.value(t, i) = sum / used;
      } else {
        if (!have_fallback) {
          fallback = impute_li(s);
          have_fallback = true;
        }
        out.value(t, i) = fallback.value(t, i);
      }
    }
  }
  return out;
}

/// Chained-equation imputation, single chain. Columns are inverters; each
/// sweep regresses every incomplete inverter (with intercept) on all others
/// over its observed rows and refills its missing rows from the fit.
inline PvFleetSeries impute_mice(const PvFleetSeries& s, int iterations) {
  if (iterations < 1) throw Error("impute_mice: iterations must be >= 1");
  PvFleetSeries out = impute_mean(s);
  const std::size_t n = s.nodes(), T = s.steps();
  if (n < 2) return out;
  Eigen::MatrixXd x(T, n);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t i = 0; i < n; ++i) x(t, i) = out.value(t, i);
  const auto p = static_cast<Eigen::Index>(n);  // intercept + (n - 1) predictors
  for (int it = 0; it < iterations; ++it) {
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<Eigen::Index> obs, miss;
      for (std::size_t t = 0; t < T; ++t) (s.is_observed(t, j) ? obs : miss).push_back(t);
      if (miss.empty()) continue;
      auto design_row = [&](Eigen::Index t) {
        Eigen::VectorXd r(p);
        r(0) = 1.0;
        Eigen::Index c = 1;
        for (std::size_t o = 0; o < n; ++o)
          if (o != j) r(c++) = x(t, o);
        return r;
      };
      Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(p, p);
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(p);
      for (auto t : obs) {
        const Eigen::VectorXd r = design_row(t);
        gram.selfadjointView<Eigen::Lower>().rankUpdate(r);
        rhs += r * x(t, j);
      }
      gram = gram.selfadjointView<Eigen::Lower>();
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(gram);
      Eigen::VectorXd beta;
      if (qr.rank() < p) {
        beta = (gram + 1e-6 * Eigen::MatrixXd::Identity(p, p)).ldlt().solve(rhs);
      } else {
        beta = qr.solve(rhs);
      }
      for (auto t : miss) x(t, j) = design_row(t).dot(beta);
    }
  }
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t i = 0; i < n; ++i)
      if (!s.is_observed(t, i)) out.value(t, i) = x(t, i);
  return out;
}

// ---------------------------------------------------------------------------
// MIDA: overcomplete fully connected denoising autoencoder over the fleet
// cross-section at each timestep.

struct MidaModel {
  std::vector<std::size_t> widths;  // n, n+7, ..., n
  std::vector<Tensor> params;       // W0, b0, W1, b1, ...
  std::vector<double> loss_history;
};

/// Layer widths: `layers` encoder layers widening by width_step, mirrored
/// decoder back to n.
inline std::vector<std::size_t> mida_widths(std::size_t n, const MidaSpec& spec) {
  std::vector<std::size_t> w{n};
  for (int l = 1; l <= spec.layers; ++l) w.push_back(n + static_cast<std::size_t>(l * spec.width_step));
  for (int l = spec.layers - 1; l >= 0; --l) w.push_back(n + static_cast<std::size_t>(l * spec.width_step));
  return w;
}

inline Var mida_forward(Tape& tape, Var x, const std::vector<Var>& p) {
  Var h = x;
  const std::size_t layers = p.size() / 2;
  for (std::size_t l = 0; l < layers; ++l) {
    h = add_channel_bias(matmul(h, p[2 * l]), p[2 * l + 1]);
    if (l + 1 < layers) h = tanh(h);
  }
  (void)tape;
  return h;
}

/// Trains MIDA on rows of `data` ([rows x n], missing already mean-filled).
/// The loss is restricted to entries with weight 1.
inline MidaModel train_mida(const Tensor& data, const Tensor& weights, const MidaSpec& spec,
                            std::uint64_t seed) {
  if (data.rank() != 2) throw DimensionError("train_mida: data must be [rows x n]");
  require_same_shape(data, weights, "train_mida");
  const std::size_t rows = data.dim(0), n = data.dim(1);
  Rng rng(seed);
  MidaModel model;
  model.widths = mida_widths(n, spec);
  for (std::size_t l = 0; l + 1 < model.widths.size(); ++l) {
    const std::size_t fin = model.widths[l], fout = model.widths[l + 1];
    const double bound = std::sqrt(1.0 / static_cast<double>(fin));
    Tensor w(Shape{fin, fout});
    for (auto& v : w.storage()) v = rng.uniform(-bound, bound);
    model.params.push_back(std::move(w));
    model.params.emplace_back(Shape{fout}, 0.0);
  }
  AdamState adam(AdamConfig{spec.lr, 0.0});
  const std::size_t batch = std::max<std::size_t>(1, std::min<std::size_t>(rows, spec.batch_rows));
  std::vector<std::size_t> order(rows);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (int epoch = 0; epoch < spec.epochs; ++epoch) {
    for (std::size_t i = rows; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    double loss_sum = 0.0;
    std::size_t loss_batches = 0;
    for (std::size_t start = 0; start < rows; start += batch) {
      const std::size_t b = std::min(batch, rows - start);
      Tensor in(Shape{b, n}), target(Shape{b, n}), w(Shape{b, n});
      double wsum = 0.0;
      for (std::size_t r = 0; r < b; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
          const std::size_t src = order[start + r] * n + c;
          target[r * n + c] = data[src];
          w[r * n + c] = weights[src];
          wsum += weights[src];
          in[r * n + c] = (spec.drop_rate > 0.0 && rng.uniform() < spec.drop_rate) ? 0.0 : data[src];
        }
      }
      if (wsum == 0.0) continue;
      Tape tape;
      std::vector<Var> pv;
      for (const auto& p : model.params) pv.push_back(tape.parameter(p));
      Var out = mida_forward(tape, tape.constant(in), pv);
      Var loss = weighted_mse(out, tape.constant(target), w);
      if (!std::isfinite(loss.value().item())) {
        throw NumericError("mida: non-finite loss at epoch " + std::to_string(epoch));
      }
      tape.backward(loss);
      std::vector<Tensor> grads;
      for (auto v : pv) grads.push_back(tape.grad(v));
      adam.update(model.params, grads, static_cast<std::size_t>(epoch));
      loss_sum += loss.value().item();
      ++loss_batches;
    }
    model.loss_history.push_back(loss_batches ? loss_sum / loss_batches : 0.0);
  }
  return model;
}

inline Tensor mida_reconstruct(const MidaModel& model, const Tensor& data) {
  Tape tape;
  std::vector<Var> pv;
  for (const auto& p : model.params) pv.push_back(tape.constant(p));
  return mida_forward(tape, tape.constant(data), pv).value();
}

inline PvFleetSeries impute_mida(const PvFleetSeries& s, const MidaSpec& spec, std::uint64_t seed) {
  PvFleetSeries filled = impute_mean(s);
  const std::size_t T = s.steps(), n = s.nodes();
  Tensor data(Shape{T, n}), weights(Shape{T, n});
  for (std::size_t k = 0; k < T * n; ++k) {
    data[k] = filled.values[k];
    weights[k] = s.observed[k] ? 1.0 : 0.0;
  }
  const MidaModel model = train_mida(data, weights, spec, seed);
  const Tensor recon = mida_reconstruct(model, data);
  PvFleetSeries out = detail::completed_copy(s);
  for (std::size_t k = 0; k < T * n; ++k) {
    if (!s.observed[k]) out.values[k] = recon[k];
  }
  return out;
}

// ---------------------------------------------------------------------------
// LRTC-TNN: low-rank completion of the location x day x time-of-day tensor.

/// Dense 3-way array, first index slowest.
struct Array3 {
  std::array<std::size_t, 3> dims{};
  std::vector<double> data;

  Array3() = default;
  explicit Array3(std::array<std::size_t, 3> d, double fill = 0.0)
      : dims(d), data(d[0] * d[1] * d[2], fill) {}
  double& operator()(std::size_t a, std::size_t b, std::size_t c) {
    return data[(a * dims[1] + b) * dims[2] + c];
  }
  double operator()(std::size_t a, std::size_t b, std::size_t c) const {
    return data[(a * dims[1] + b) * dims[2] + c];
  }
};

/// Mode-k unfolding: rows index mode k, columns the remaining two modes in
/// their original order.
inline Eigen::MatrixXd unfold(const Array3& x, int mode) {
  const auto& d = x.dims;
  const std::size_t o1 = mode == 0 ? 1 : 0, o2 = mode == 2 ? 1 : 2;
  Eigen::MatrixXd m(d[mode], d[o1] * d[o2]);
  std::array<std::size_t, 3> idx{};
  for (idx[0] = 0; idx[0] < d[0]; ++idx[0])
    for (idx[1] = 0; idx[1] < d[1]; ++idx[1])
      for (idx[2] = 0; idx[2] < d[2]; ++idx[2])
        m(idx[mode], idx[o1] * d[o2] + idx[o2]) = x(idx[0], idx[1], idx[2]);
  return m;
}

inline Array3 fold(const Eigen::MatrixXd& m, std::array<std::size_t, 3> dims, int mode) {
  Array3 x(dims);
  const std::size_t o1 = mode == 0 ? 1 : 0, o2 = mode == 2 ? 1 : 2;
  std::array<std::size_t, 3> idx{};
  for (idx[0] = 0; idx[0] < dims[0]; ++idx[0])
    for (idx[1] = 0; idx[1] < dims[1]; ++idx[1])
      for (idx[2] = 0; idx[2] < dims[2]; ++idx[2])
        x(idx[0], idx[1], idx[2]) = m(idx[mode], idx[o1] * dims[o2] + idx[o2]);
  return x;
}

inline std::size_t protected_singular_values(double truncation, const Eigen::MatrixXd& m) {
  const auto min_dim = static_cast<double>(std::min(m.rows(), m.cols()));
  return static_cast<std::size_t>(std::ceil(truncation * min_dim - 1e-12));
}

/// Truncated nuclear norm: sum of singular values beyond the protected top.
inline double truncated_nuclear_norm(const Eigen::MatrixXd& m, double truncation) {
  const Eigen::VectorXd s = Eigen::BDCSVD<Eigen::MatrixXd>(m).singularValues();
  const std::size_t keep = protected_singular_values(truncation, m);
  double acc = 0.0;
  for (Eigen::Index i = static_cast<Eigen::Index>(keep); i < s.size(); ++i) acc += s(i);
  return acc;
}

/// Singular value thresholding that leaves the top singular values intact.
inline Eigen::MatrixXd svt_truncated(const Eigen::MatrixXd& m, double tau, double truncation) {
  const bool wide = m.cols() > m.rows();
  const Eigen::MatrixXd a = wide ? Eigen::MatrixXd(m.transpose()) : m;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXd s = svd.singularValues();
  const std::size_t keep = protected_singular_values(truncation, m);
  for (Eigen::Index i = static_cast<Eigen::Index>(keep); i < s.size(); ++i) {
    s(i) = std::max(s(i) - tau, 0.0);
  }
  Eigen::MatrixXd r = svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
  return wide ? Eigen::MatrixXd(r.transpose()) : r;
}

struct LrtcResult {
  Array3 completed;
  std::vector<double> objective_history;  // weighted TNN of each iterate
  int iterations = 0;
  bool converged = false;
};

/// ADMM completion: per-mode truncated SVT on Z - T_k/rho, consensus update
/// of the missing entries of Z, dual ascent on T_k; observed entries of Z
/// are fixed. The consensus step is backtracked toward the previous Z
/// whenever it would raise the objective, so the history never increases.
inline LrtcResult lrtc_tnn(const Array3& observed_values, const std::vector<std::uint8_t>& observed,
                           const LrtcSpec& spec) {
  if (!(spec.truncation >= 0.0 && spec.truncation < 1.0)) {
    throw Error("lrtc_tnn: truncation rate must lie in [0, 1)");
  }
  const auto dims = observed_values.dims;
  const std::size_t N = observed_values.data.size();
  if (observed.size() != N) throw DimensionError("lrtc_tnn: mask size mismatch");
  double obs_norm = 0.0;
  for (std::size_t k = 0; k < N; ++k)
    if (observed[k]) obs_norm += observed_values.data[k] * observed_values.data[k];
  obs_norm = std::sqrt(obs_norm);
  LrtcResult res;
  Array3 z(dims);
  for (std::size_t k = 0; k < N; ++k) z.data[k] = observed[k] ? observed_values.data[k] : 0.0;
  res.completed = z;
  if (obs_norm == 0.0) {
    res.converged = true;
    return res;
  }
  const double alpha = 1.0 / 3.0;
  auto objective = [&](const Array3& x) {
    double o = 0.0;
    for (int m = 0; m < 3; ++m) o += alpha * truncated_nuclear_norm(unfold(x, m), spec.truncation);
    return o;
  };
  std::array<Array3, 3> xs{Array3(dims), Array3(dims), Array3(dims)};
  std::array<Array3, 3> duals{Array3(dims), Array3(dims), Array3(dims)};
  double rho = spec.rho_scale * obs_norm;
  double current = objective(z);
  for (res.iterations = 1; res.iterations <= spec.max_iterations; ++res.iterations) {
    rho = std::min(rho * spec.rho_growth, spec.rho_max);
    for (int m = 0; m < 3; ++m) {
      Array3 shifted(dims);
      for (std::size_t k = 0; k < N; ++k) shifted.data[k] = z.data[k] - duals[m].data[k] / rho;
      xs[m] = fold(svt_truncated(unfold(shifted, m), alpha / rho, spec.truncation), dims, m);
    }
    Array3 candidate = z;
    for (std::size_t k = 0; k < N; ++k) {
      if (observed[k]) continue;
      double acc = 0.0;
      for (int m = 0; m < 3; ++m) acc += xs[m].data[k] + duals[m].data[k] / rho;
      candidate.data[k] = acc / 3.0;
    }
    double step = 0.0;
    for (std::size_t k = 0; k < N; ++k) step += (candidate.data[k] - z.data[k]) * (candidate.data[k] - z.data[k]);

    // Backtrack toward the current iterate until the objective does not rise.
    double obj = objective(candidate);
    Array3 trial = candidate;
    for (int halving = 0; obj > current && halving < 30; ++halving) {
      const double t = std::ldexp(1.0, -(halving + 1));
      for (std::size_t k = 0; k < N; ++k) trial.data[k] = z.data[k] + t * (candidate.data[k] - z.data[k]);
      obj = objective(trial);
    }
    if (obj <= current) {
      z = trial;
      current = obj;
    }
    res.objective_history.push_back(current);
    for (int m = 0; m < 3; ++m)
      for (std::size_t k = 0; k < N; ++k) duals[m].data[k] += rho * (xs[m].data[k] - z.data[k]);
    if (std::sqrt(step) / obs_norm < spec.tolerance) {
      res.converged = true;
      break;
    }
  }
  res.completed = z;
  res.iterations = std::min(res.iterations, spec.max_iterations);
  return res;
}

inline PvFleetSeries impute_lrtc_tnn(const PvFleetSeries& s, const LrtcSpec& spec,
                                     bool* converged = nullptr) {
  detail::require_observations(s);
  if (s.steps() % kStepsPerDay != 0) {
    throw DataError("impute_lrtc_tnn: series length must be a multiple of 288");
  }
  const std::size_t n = s.nodes(), days = s.days();
  Array3 x({n, days, kStepsPerDay});
  std::vector<std::uint8_t> mask(x.data.size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t d = 0; d < days; ++d)
      for (std::size_t h = 0; h < kStepsPerDay; ++h) {
        const std::size_t t = d * kStepsPerDay + h;
        x(i, d, h) = s.value(t, i);
        mask[(i * days + d) * kStepsPerDay + h] = s.observed[s.index(t, i)];
      }
  const LrtcResult r = lrtc_tnn(x, mask, spec);
  if (converged) *converged = r.converged;
  PvFleetSeries out = detail::completed_copy(s);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t d = 0; d < days; ++d)
      for (std::size_t h = 0; h < kStepsPerDay; ++h) {
        const std::size_t t = d * kStepsPerDay + h;
        if (!s.is_observed(t, i)) out.value(t, i) = r.completed(i, d, h);
      }
  return out;
}

/// Dispatches to the imputer selected by spec.method.
inline PvFleetSeries impute_baseline(const PvFleetSeries& s, const ImputerSpec& spec) {
  switch (spec.method) {
    case ImputerMethod::Mean: return impute_mean(s);
    case ImputerMethod::LI: return impute_li(s);
    case ImputerMethod::KNN: return impute_knn(s, spec.knn_k);
    case ImputerMethod::MICE: return impute_mice(s, spec.mice_iterations);
    case ImputerMethod::MIDA: return impute_mida(s, spec.mida, spec.seed);
    case ImputerMethod::LRTC_TNN: return impute_lrtc_tnn(s, spec.lrtc);
  }
  throw Error("impute_baseline: unknown method");
}

}  // namespace solarmend

#endif  // SOLARMEND_BASELINES_HPP
