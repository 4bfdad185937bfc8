#ifndef SOLARMEND_AUTODIFF_HPP
#define SOLARMEND_AUTODIFF_HPP

// Reverse-mode differentiation over dense tensors.
//
// A Tape records every operation in execution order, so the node list is a
// valid topological order and backward() is a single reverse sweep. Gradients
// accumulate additively into input slots, which makes shared inputs work
// without special handling.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "solarmend/tensor.hpp"

namespace solarmend {

class Tape;

/// Handle to a node on a tape.
struct Var {
  Tape* tape = nullptr;
  std::size_t id = 0;

  const Tensor& value() const;
  const Shape& shape() const { return value().shape(); }
};

class Tape {
 public:
  /// Receives the tape and the id of the node being differentiated; reads
  /// grad(self) and accumulates into the grad slots of the node's inputs.
  using BackwardFn = std::function<void(Tape&, std::size_t)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Tensor value) { return push(std::move(value), false, {}, "constant"); }

  Var parameter(Tensor value) { return push(std::move(value), true, {}, "parameter"); }

  /// Records an operation. Throws NumericError when the forward value is not
  /// finite.
  Var record(std::string op, Tensor value, std::vector<std::size_t> inputs,
             BackwardFn backward) {
    if (!value.all_finite()) {
      throw NumericError(op + ": non-finite value in forward pass");
    }
    bool needs = false;
    for (std::size_t in : inputs) needs = needs || nodes_.at(in).needs_grad;
    std::size_t id = nodes_.size();
    nodes_.push_back(Node{std::move(value), Tensor{}, needs ? std::move(backward) : nullptr,
                          std::move(inputs), needs, std::move(op)});
    return Var{this, id};
  }

  const Tensor& value(std::size_t id) const { return nodes_.at(id).value; }
  bool needs_grad(std::size_t id) const { return nodes_.at(id).needs_grad; }
  const std::vector<std::size_t>& inputs(std::size_t id) const { return nodes_.at(id).inputs; }
  std::size_t size() const noexcept { return nodes_.size(); }

  /// Gradient slot of a node, allocated as zeros on first access.
  Tensor& grad_slot(std::size_t id) {
    Node& n = nodes_.at(id);
    if (n.grad.shape() != n.value.shape() || n.grad.size() != n.value.size()) {
      n.grad = Tensor(n.value.shape(), 0.0);
    }
    return n.grad;
  }

  /// Accumulated gradient; zeros for nodes the loss does not depend on.
  Tensor grad(Var v) { return grad_slot(v.id); }

  void backward(Var loss) {
    if (loss.tape != this) throw Error("backward: loss belongs to another tape");
    if (value(loss.id).size() != 1) {
      throw DimensionError("backward: loss must be scalar, got shape " +
                           shape_string(value(loss.id).shape()));
    }
    for (auto& n : nodes_) n.grad = Tensor{};
    grad_slot(loss.id)[0] = 1.0;
    for (std::size_t id = loss.id + 1; id-- > 0;) {
      Node& n = nodes_[id];
      if (!n.backward || n.grad.empty()) continue;
      n.backward(*this, id);
      for (std::size_t in : n.inputs) {
        const Node& src = nodes_[in];
        if (!src.grad.empty() && !src.grad.all_finite()) {
          throw NumericError(n.op + ": non-finite gradient in backward pass");
        }
      }
    }
  }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    BackwardFn backward;
    std::vector<std::size_t> inputs;
    bool needs_grad = false;
    std::string op;
  };

  Var push(Tensor value, bool needs, std::vector<std::size_t> inputs, std::string op) {
    if (!value.all_finite()) throw NumericError(op + ": non-finite leaf value");
    nodes_.push_back(Node{std::move(value), Tensor{}, nullptr, std::move(inputs), needs,
                          std::move(op)});
    return Var{this, nodes_.size() - 1};
  }

  std::vector<Node> nodes_;
};

inline const Tensor& Var::value() const { return tape->value(id); }

namespace detail {

inline void require_same_tape(Var a, Var b, const char* op) {
  if (a.tape != b.tape || a.tape == nullptr) {
    throw Error(std::string(op) + ": operands live on different tapes");
  }
}

// Views a rank-2 [len x ch] or rank-3 [len x nodes x ch] tensor as 3-D.
struct SeqDims {
  std::size_t len, nodes, ch;
};

inline SeqDims seq_dims(const Tensor& x, const char* op) {
  if (x.rank() == 2) return {x.dim(0), 1, x.dim(1)};
  if (x.rank() == 3) return {x.dim(0), x.dim(1), x.dim(2)};
  throw DimensionError(std::string(op) + ": expected [len x ch] or [len x nodes x ch], got " +
                       shape_string(x.shape()));
}

inline Shape seq_shape(const Tensor& like, std::size_t len, std::size_t ch) {
  if (like.rank() == 2) return {len, ch};
  return {len, like.dim(1), ch};
}

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatMap = Eigen::Map<RowMatrix>;
using ConstMatMap = Eigen::Map<const RowMatrix>;

}  // namespace detail

inline Var add(Var a, Var b) {
  detail::require_same_tape(a, b, "add");
  require_same_shape(a.value(), b.value(), "add");
  Tensor out = a.value();
  const auto& bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += bv[i];
  return a.tape->record("add", std::move(out), {a.id, b.id}, [](Tape& t, std::size_t self) {
    const auto ins = t.inputs(self);
    const Tensor g = t.grad_slot(self);
    for (std::size_t in : ins) {
      if (!t.needs_grad(in)) continue;
      Tensor& gi = t.grad_slot(in);
      for (std::size_t i = 0; i < g.size(); ++i) gi[i] += g[i];
    }
  });
}

inline Var hadamard(Var a, Var b) {
  detail::require_same_tape(a, b, "hadamard");
  require_same_shape(a.value(), b.value(), "hadamard");
  Tensor out = a.value();
  const auto& bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= bv[i];
  return a.tape->record("hadamard", std::move(out), {a.id, b.id},
                        [](Tape& t, std::size_t self) {
                          const std::size_t ia = t.inputs(self)[0], ib = t.inputs(self)[1];
                          const Tensor g = t.grad_slot(self);
                          const Tensor av = t.value(ia), bv = t.value(ib);
                          if (t.needs_grad(ia)) {
                            Tensor& ga = t.grad_slot(ia);
                            for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * bv[i];
                          }
                          if (t.needs_grad(ib)) {
                            Tensor& gb = t.grad_slot(ib);
                            for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * av[i];
                          }
                        });
}

inline double sigmoid_value(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

inline Var sigmoid(Var a) {
  Tensor out = a.value();
  for (auto& v : out.storage()) v = sigmoid_value(v);
  return a.tape->record("sigmoid", std::move(out), {a.id}, [](Tape& t, std::size_t self) {
    const std::size_t ia = t.inputs(self)[0];
    const Tensor& s = t.value(self);
    const Tensor g = t.grad_slot(self);
    Tensor& ga = t.grad_slot(ia);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * s[i] * (1.0 - s[i]);
  });
}

inline Var tanh(Var a) {
  Tensor out = a.value();
  for (auto& v : out.storage()) v = std::tanh(v);
  return a.tape->record("tanh", std::move(out), {a.id}, [](Tape& t, std::size_t self) {
    const std::size_t ia = t.inputs(self)[0];
    const Tensor& y = t.value(self);
    const Tensor g = t.grad_slot(self);
    Tensor& ga = t.grad_slot(ia);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * (1.0 - y[i] * y[i]);
  });
}

inline Var scale(Var a, double s) {
  Tensor out = a.value();
  for (auto& v : out.storage()) v *= s;
  return a.tape->record("scale", std::move(out), {a.id}, [s](Tape& t, std::size_t self) {
    const std::size_t ia = t.inputs(self)[0];
    const Tensor g = t.grad_slot(self);
    Tensor& ga = t.grad_slot(ia);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += s * g[i];
  });
}

/// Adds bias[c] to every element whose last-axis index is c.
inline Var add_channel_bias(Var x, Var bias) {
  detail::require_same_tape(x, bias, "add_channel_bias");
  const Tensor& xv = x.value();
  const Tensor& bv = bias.value();
  if (xv.rank() == 0 || bv.rank() != 1 || bv.dim(0) != xv.shape().back()) {
    throw DimensionError("add_channel_bias: bias " + shape_string(bv.shape()) +
                         " does not match last axis of " + shape_string(xv.shape()));
  }
  const std::size_t ch = bv.dim(0);
  Tensor out = xv;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += bv[i % ch];
  return x.tape->record("add_channel_bias", std::move(out), {x.id, bias.id},
                        [ch](Tape& t, std::size_t self) {
                          const std::size_t ix = t.inputs(self)[0], ib = t.inputs(self)[1];
                          const Tensor g = t.grad_slot(self);
                          if (t.needs_grad(ix)) {
                            Tensor& gx = t.grad_slot(ix);
                            for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i];
                          }
                          if (t.needs_grad(ib)) {
                            Tensor& gb = t.grad_slot(ib);
                            for (std::size_t i = 0; i < g.size(); ++i) gb[i % ch] += g[i];
                          }
                        });
}

/// Matrix product of [m x k] and [k x n].
inline Var matmul(Var a, Var b) {
  detail::require_same_tape(a, b, "matmul");
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  if (av.rank() != 2 || bv.rank() != 2 || av.dim(1) != bv.dim(0)) {
    throw DimensionError("matmul: incompatible shapes " + shape_string(av.shape()) + " and " +
                         shape_string(bv.shape()));
  }
  const auto m = static_cast<Eigen::Index>(av.dim(0));
  const auto k = static_cast<Eigen::Index>(av.dim(1));
  const auto n = static_cast<Eigen::Index>(bv.dim(1));
  Tensor out(Shape{av.dim(0), bv.dim(1)});
  detail::MatMap(out.storage().data(), m, n).noalias() =
      detail::ConstMatMap(av.storage().data(), m, k) *
      detail::ConstMatMap(bv.storage().data(), k, n);
  return a.tape->record("matmul", std::move(out), {a.id, b.id},
                        [m, k, n](Tape& t, std::size_t self) {
                          const std::size_t ia = t.inputs(self)[0], ib = t.inputs(self)[1];
                          const Tensor g = t.grad_slot(self);
                          detail::ConstMatMap G(g.storage().data(), m, n);
                          if (t.needs_grad(ia)) {
                            const Tensor& bv = t.value(ib);
                            detail::MatMap(t.grad_slot(ia).storage().data(), m, k).noalias() +=
                                G * detail::ConstMatMap(bv.storage().data(), k, n).transpose();
                          }
                          if (t.needs_grad(ib)) {
                            const Tensor& av = t.value(ia);
                            detail::MatMap(t.grad_slot(ib).storage().data(), k, n).noalias() +=
                                detail::ConstMatMap(av.storage().data(), m, k).transpose() * G;
                          }
                        });
}

inline std::size_t conv1d_output_length(std::size_t len, std::size_t kernel, std::size_t stride,
                                        std::size_t padding) {
  if (stride < 1) throw DimensionError("conv1d: stride must be >= 1");
  if (len + 2 * padding < kernel) {
    throw DimensionError("conv1d: input length " + std::to_string(len) +
                         " too short for kernel " + std::to_string(kernel));
  }
  return (len + 2 * padding - kernel) / stride + 1;
}

inline std::size_t conv1d_transpose_output_length(std::size_t len, std::size_t kernel,
                                                  std::size_t stride, std::size_t padding) {
  if (stride < 1) throw DimensionError("conv1d_transpose: stride must be >= 1");
  if (len == 0 || (len - 1) * stride + kernel < 2 * padding + 1) {
    throw DimensionError("conv1d_transpose: output length would be empty");
  }
  return (len - 1) * stride + kernel - 2 * padding;
}

/// Cross-correlation along axis 0 with zero padding, applied independently to
/// each node when x is [len x nodes x ch_in]. kernel is [ch_out x ch_in x K].
inline Var conv1d(Var x, Var kernel, std::size_t stride, std::size_t padding) {
  detail::require_same_tape(x, kernel, "conv1d");
  const Tensor& xv = x.value();
  const Tensor& kv = kernel.value();
  const auto d = detail::seq_dims(xv, "conv1d");
  if (kv.rank() != 3 || kv.dim(1) != d.ch) {
    throw DimensionError("conv1d: kernel " + shape_string(kv.shape()) +
                         " incompatible with input " + shape_string(xv.shape()));
  }
  const std::size_t cout = kv.dim(0), cin = d.ch, K = kv.dim(2);
  const std::size_t lout = conv1d_output_length(d.len, K, stride, padding);
  Tensor out(detail::seq_shape(xv, lout, cout));
  const auto& X = xv.storage();
  const auto& W = kv.storage();
  auto& Y = out.storage();
  for (std::size_t lo = 0; lo < lout; ++lo) {
    for (std::size_t k = 0; k < K; ++k) {
      const std::ptrdiff_t li = static_cast<std::ptrdiff_t>(lo * stride + k) -
                                static_cast<std::ptrdiff_t>(padding);
      if (li < 0 || li >= static_cast<std::ptrdiff_t>(d.len)) continue;
      for (std::size_t n = 0; n < d.nodes; ++n) {
        const double* xr = &X[(static_cast<std::size_t>(li) * d.nodes + n) * cin];
        double* yr = &Y[(lo * d.nodes + n) * cout];
        for (std::size_t co = 0; co < cout; ++co) {
          const double* w = &W[co * cin * K + k];
          double acc = 0.0;
          for (std::size_t ci = 0; ci < cin; ++ci) acc += w[ci * K] * xr[ci];
          yr[co] += acc;
        }
      }
    }
  }
  return x.tape->record(
      "conv1d", std::move(out), {x.id, kernel.id},
      [d, cout, cin, K, lout, stride, padding](Tape& t, std::size_t self) {
        const std::size_t ix = t.inputs(self)[0], ik = t.inputs(self)[1];
        const Tensor g = t.grad_slot(self);
        const auto& G = g.storage();
        const auto& X = t.value(ix).storage();
        const auto& W = t.value(ik).storage();
        const bool gx_on = t.needs_grad(ix), gw_on = t.needs_grad(ik);
        std::vector<double>* GX = gx_on ? &t.grad_slot(ix).storage() : nullptr;
        std::vector<double>* GW = gw_on ? &t.grad_slot(ik).storage() : nullptr;
        for (std::size_t lo = 0; lo < lout; ++lo) {
          for (std::size_t k = 0; k < K; ++k) {
            const std::ptrdiff_t li = static_cast<std::ptrdiff_t>(lo * stride + k) -
                                      static_cast<std::ptrdiff_t>(padding);
            if (li < 0 || li >= static_cast<std::ptrdiff_t>(d.len)) continue;
            for (std::size_t n = 0; n < d.nodes; ++n) {
              const std::size_t xo = (static_cast<std::size_t>(li) * d.nodes + n) * cin;
              const double* gr = &G[(lo * d.nodes + n) * cout];
              for (std::size_t co = 0; co < cout; ++co) {
                const double gv = gr[co];
                if (gv == 0.0) continue;
                const std::size_t wo = co * cin * K + k;
                for (std::size_t ci = 0; ci < cin; ++ci) {
                  if (GX) (*GX)[xo + ci] += gv * W[wo + ci * K];
                  if (GW) (*GW)[wo + ci * K] += gv * X[xo + ci];
                }
              }
            }
          }
        }
      });
}

/// Transposed convolution (the adjoint of conv1d). kernel is
/// [ch_in x ch_out x K]; output length is (len-1)*stride - 2*padding + K.
inline Var conv1d_transpose(Var x, Var kernel, std::size_t stride, std::size_t padding) {
  detail::require_same_tape(x, kernel, "conv1d_transpose");
  const Tensor& xv = x.value();
  const Tensor& kv = kernel.value();
  const auto d = detail::seq_dims(xv, "conv1d_transpose");
  if (kv.rank() != 3 || kv.dim(0) != d.ch) {
    throw DimensionError("conv1d_transpose: kernel " + shape_string(kv.shape()) +
                         " incompatible with input " + shape_string(xv.shape()));
  }
  const std::size_t cin = d.ch, cout = kv.dim(1), K = kv.dim(2);
  const std::size_t lout = conv1d_transpose_output_length(d.len, K, stride, padding);
  Tensor out(detail::seq_shape(xv, lout, cout));
  const auto& X = xv.storage();
  const auto& W = kv.storage();
  auto& Y = out.storage();
  for (std::size_t li = 0; li < d.len; ++li) {
    for (std::size_t k = 0; k < K; ++k) {
      const std::ptrdiff_t lo = static_cast<std::ptrdiff_t>(li * stride + k) -
                                static_cast<std::ptrdiff_t>(padding);
      if (lo < 0 || lo >= static_cast<std::ptrdiff_t>(lout)) continue;
      for (std::size_t n = 0; n < d.nodes; ++n) {
        const double* xr = &X[(li * d.nodes + n) * cin];
        double* yr = &Y[(static_cast<std::size_t>(lo) * d.nodes + n) * cout];
        for (std::size_t ci = 0; ci < cin; ++ci) {
          const double xval = xr[ci];
          if (xval == 0.0) continue;
          const double* w = &W[ci * cout * K + k];
          for (std::size_t co = 0; co < cout; ++co) yr[co] += xval * w[co * K];
        }
      }
    }
  }
  return x.tape->record(
      "conv1d_transpose", std::move(out), {x.id, kernel.id},
      [d, cout, cin, K, lout, stride, padding](Tape& t, std::size_t self) {
        const std::size_t ix = t.inputs(self)[0], ik = t.inputs(self)[1];
        const Tensor g = t.grad_slot(self);
        const auto& G = g.storage();
        const auto& X = t.value(ix).storage();
        const auto& W = t.value(ik).storage();
        std::vector<double>* GX = t.needs_grad(ix) ? &t.grad_slot(ix).storage() : nullptr;
        std::vector<double>* GW = t.needs_grad(ik) ? &t.grad_slot(ik).storage() : nullptr;
        for (std::size_t li = 0; li < d.len; ++li) {
          for (std::size_t k = 0; k < K; ++k) {
            const std::ptrdiff_t lo = static_cast<std::ptrdiff_t>(li * stride + k) -
                                      static_cast<std::ptrdiff_t>(padding);
            if (lo < 0 || lo >= static_cast<std::ptrdiff_t>(lout)) continue;
            for (std::size_t n = 0; n < d.nodes; ++n) {
              const std::size_t xo = (li * d.nodes + n) * cin;
              const double* gr = &G[(static_cast<std::size_t>(lo) * d.nodes + n) * cout];
              for (std::size_t ci = 0; ci < cin; ++ci) {
                const std::size_t wo = ci * cout * K + k;
                double acc = 0.0;
                for (std::size_t co = 0; co < cout; ++co) {
                  acc += gr[co] * W[wo + co * K];
                  if (GW) (*GW)[wo + co * K] += gr[co] * X[xo + ci];
                }
                if (GX) (*GX)[xo + ci] += acc;
              }
            }
          }
        }
      });
}

/// Weighted mean squared error: sum(w * (a-b)^2) / sum(w). Weights are
/// constants (not differentiated).
inline Var weighted_mse(Var a, Var b, const Tensor& weights) {
  detail::require_same_tape(a, b, "weighted_mse");
  require_same_shape(a.value(), b.value(), "weighted_mse");
  require_same_shape(a.value(), weights, "weighted_mse");
  if (a.value().empty()) throw DimensionError("weighted_mse: empty tensors");
  double wsum = 0.0, acc = 0.0;
  const auto& av = a.value();
  const auto& bv = b.value();
  for (std::size_t i = 0; i < av.size(); ++i) {
    const double r = av[i] - bv[i];
    acc += weights[i] * r * r;
    wsum += weights[i];
  }
  if (wsum <= 0.0) throw DimensionError("weighted_mse: weights sum to zero");
  return a.tape->record("weighted_mse", Tensor::scalar(acc / wsum), {a.id, b.id},
                        [weights, wsum](Tape& t, std::size_t self) {
                          const std::size_t ia = t.inputs(self)[0], ib = t.inputs(self)[1];
                          const double g = t.grad_slot(self)[0];
                          const auto& av = t.value(ia);
                          const auto& bv = t.value(ib);
                          const bool ga_on = t.needs_grad(ia), gb_on = t.needs_grad(ib);
                          Tensor* ga = ga_on ? &t.grad_slot(ia) : nullptr;
                          Tensor* gb = gb_on ? &t.grad_slot(ib) : nullptr;
                          for (std::size_t i = 0; i < av.size(); ++i) {
                            const double d = 2.0 * g * weights[i] * (av[i] - bv[i]) / wsum;
                            if (ga) (*ga)[i] += d;
                            if (gb) (*gb)[i] -= d;
                          }
                        });
}

/// (1/N) * sum((a-b)^2) over all N elements.
inline Var mse(Var a, Var b) {
  if (a.value().empty()) throw DimensionError("mse: empty tensors");
  return weighted_mse(a, b, Tensor(a.value().shape(), 1.0));
}

/// Inverse-time decayed Adam. The rate used at epoch e is lr / (1 + decay*e).
struct AdamConfig {
  double lr = 1e-3;
  double decay = 0.02;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

class AdamState {
 public:
  AdamState() = default;
  explicit AdamState(AdamConfig config) : config_(config) {
    if (!(config.beta1 > 0 && config.beta1 < 1 && config.beta2 > 0 && config.beta2 < 1)) {
      throw Error("adam: beta1 and beta2 must lie in (0, 1)");
    }
  }

  const AdamConfig& config() const noexcept { return config_; }
  std::size_t step() const noexcept { return step_; }

  double learning_rate(std::size_t epoch) const {
    return config_.lr / (1.0 + config_.decay * static_cast<double>(epoch));
  }

  void update(std::vector<Tensor>& params, const std::vector<Tensor>& grads, std::size_t epoch) {
    if (params.size() != grads.size()) throw DimensionError("adam: params/grads count mismatch");
    if (first_.empty()) {
      for (const auto& p : params) {
        first_.emplace_back(p.shape(), 0.0);
        second_.emplace_back(p.shape(), 0.0);
      }
    }
    if (first_.size() != params.size()) throw DimensionError("adam: parameter set changed");
    for (std::size_t i = 0; i < params.size(); ++i) {
      require_same_shape(params[i], grads[i], "adam");
      require_same_shape(params[i], first_[i], "adam");
      if (!grads[i].all_finite()) {
        throw NumericError("adam: non-finite gradient for parameter " + std::to_string(i) +
                           " at step " + std::to_string(step_));
      }
    }
    ++step_;
    const double lr = learning_rate(epoch);
    const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(step_));
    const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(step_));
    for (std::size_t i = 0; i < params.size(); ++i) {
      auto& p = params[i].storage();
      const auto& g = grads[i].storage();
      auto& m = first_[i].storage();
      auto& v = second_[i].storage();
      for (std::size_t j = 0; j < p.size(); ++j) {
        m[j] = config_.beta1 * m[j] + (1.0 - config_.beta1) * g[j];
        v[j] = config_.beta2 * v[j] + (1.0 - config_.beta2) * g[j] * g[j];
        const double mhat = m[j] / bc1;
        const double vhat = v[j] / bc2;
        p[j] -= lr * mhat / (std::sqrt(vhat) + config_.eps);
      }
    }
  }

 private:
  AdamConfig config_{};
  std::vector<Tensor> first_;
  std::vector<Tensor> second_;
  std::size_t step_ = 0;
};

inline void adam_step(std::vector<Tensor>& params, const std::vector<Tensor>& grads,
                      AdamState& state, std::size_t epoch = 0) {
  state.update(params, grads, epoch);
}

}  // namespace solarmend

#endif  // SOLARMEND_AUTODIFF_HPP
