#ifndef SOLARMEND_GRAPH_HPP
#define SOLARMEND_GRAPH_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "solarmend/autodiff.hpp"
#include "solarmend/tensor.hpp"

namespace solarmend {

struct GeoPoint {
  double lon = 0.0;
  double lat = 0.0;
  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

enum class DistanceMetric {
  Planar,     // Euclidean distance on (lon, lat) in degrees
  Haversine,  // great-circle distance in km
};

inline double distance(const GeoPoint& a, const GeoPoint& b, DistanceMetric metric) {
  if (metric == DistanceMetric::Planar) return std::hypot(a.lon - b.lon, a.lat - b.lat);
  constexpr double kEarthRadiusKm = 6371.0088;
  constexpr double kRad = 3.14159265358979323846 / 180.0;
  const double dlat = (b.lat - a.lat) * kRad;
  const double dlon = (b.lon - a.lon) * kRad;
  const double h = std::sin(dlat / 2) * std::sin(dlat / 2) +
                   std::cos(a.lat * kRad) * std::cos(b.lat * kRad) * std::sin(dlon / 2) *
                       std::sin(dlon / 2);
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

/// Undirected weighted inverter graph plus its Laplacians.
///
/// edge_index/edge_weight store each undirected edge once (i < j); the
/// adjacency matrix holds both directions. laplacian/scaled_laplacian are
/// empty until with_scaled_laplacian() has run.
struct FleetGraph {
  std::size_t n = 0;
  std::vector<std::array<std::size_t, 2>> edge_index;
  std::vector<double> edge_weight;
  Eigen::MatrixXd adjacency;
  Eigen::MatrixXd degree;
  Eigen::MatrixXd laplacian;
  Eigen::MatrixXd scaled_laplacian;
  double lambda_max = 0.0;
  bool lambda_fallback = false;  // power iteration failed; lambda_max = 2
  double epsilon = 0.0;
  double sigma_d = 0.0;

  std::size_t edge_count() const noexcept { return edge_index.size(); }
  bool has_laplacian() const noexcept { return laplacian.rows() == static_cast<Eigen::Index>(n) && n > 0; }

  /// Edge index as a 2 x m array (row 0 = source, row 1 = target).
  std::array<std::vector<std::size_t>, 2> edge_index_rows() const {
    std::array<std::vector<std::size_t>, 2> rows;
    for (const auto& e : edge_index) {
      rows[0].push_back(e[0]);
      rows[1].push_back(e[1]);
    }
    return rows;
  }
};

/// Gaussian-kernel edge weights W_ij = exp(-d_ij^2 / sigma^2), kept when
/// i != j and the weight is >= epsilon. sigma is the population standard
/// deviation of all pairwise distances; when it is zero (every node
/// co-located) all off-diagonal weights are 1.
inline FleetGraph build_graph(std::span<const GeoPoint> locations, double epsilon,
                              DistanceMetric metric = DistanceMetric::Planar) {
  if (locations.empty()) throw Error("build_graph: at least one node is required");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw Error("build_graph: epsilon must lie in [0, 1]");
  FleetGraph g;
  g.n = locations.size();
  g.epsilon = epsilon;
  const std::size_t n = g.n;
  Eigen::MatrixXd dist = Eigen::MatrixXd::Zero(n, n);
  std::vector<double> pair;
  pair.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      dist(i, j) = dist(j, i) = distance(locations[i], locations[j], metric);
      pair.push_back(dist(i, j));
    }
  }
  if (!pair.empty()) {
    const double mean = std::accumulate(pair.begin(), pair.end(), 0.0) / pair.size();
    double var = 0.0;
    for (double d : pair) var += (d - mean) * (d - mean);
    g.sigma_d = std::sqrt(var / pair.size());
  }
  g.adjacency = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double w = g.sigma_d > 0.0
                           ? std::exp(-(dist(i, j) * dist(i, j)) / (g.sigma_d * g.sigma_d))
                           : 1.0;
      if (w >= epsilon && w > 0.0) {
        g.edge_index.push_back({i, j});
        g.edge_weight.push_back(w);
        g.adjacency(i, j) = g.adjacency(j, i) = w;
      }
    }
  }
  g.degree = g.adjacency.rowwise().sum().asDiagonal();
  return g;
}

struct PowerIterationResult {
  double value = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
};

/// Dominant eigenvalue of a symmetric positive semidefinite matrix. Stops
/// when the eigen-residual ||Mv - lambda v|| drops below tol.
inline PowerIterationResult power_iteration(const Eigen::MatrixXd& m, double tol = 1e-8,
                                            std::size_t max_iter = 10000) {
  const Eigen::Index n = m.rows();
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = 1.0 + 0.1 * std::sin(1.0 + 2.3 * i);
  v.normalize();
  PowerIterationResult r;
  for (r.iterations = 1; r.iterations <= max_iter; ++r.iterations) {
    Eigen::VectorXd w = m * v;
    r.value = v.dot(w);
    const double residual = (w - r.value * v).norm();
    const double norm = w.norm();
    if (residual < tol) {
      r.converged = true;
      return r;
    }
    if (norm == 0.0) {
      r.value = 0.0;
      r.converged = true;
      return r;
    }
    v = w / norm;
  }
  r.iterations = max_iter;
  return r;
}

/// Populates L = I - D^-1/2 A D^-1/2, lambda_max and L~ = 2L/lambda_max - I.
/// Zero-degree nodes get D^-1/2 = 0, so their Laplacian row is e_i.
inline FleetGraph with_scaled_laplacian(FleetGraph g) {
  const auto n = static_cast<Eigen::Index>(g.n);
  Eigen::VectorXd dinv(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = g.degree(i, i);
    dinv(i) = d > 0.0 ? 1.0 / std::sqrt(d) : 0.0;
  }
  g.laplacian = Eigen::MatrixXd::Identity(n, n) - dinv.asDiagonal() * g.adjacency * dinv.asDiagonal();
  const auto pi = power_iteration(g.laplacian);
  g.lambda_fallback = !pi.converged || !(pi.value > 0.0);
  g.lambda_max = g.lambda_fallback ? 2.0 : pi.value;
  g.scaled_laplacian = (2.0 / g.lambda_max) * g.laplacian - Eigen::MatrixXd::Identity(n, n);
  return g;
}

inline FleetGraph make_graph(std::span<const GeoPoint> locations, double epsilon,
                             DistanceMetric metric = DistanceMetric::Planar) {
  return with_scaled_laplacian(build_graph(locations, epsilon, metric));
}

inline std::size_t connected_components(const FleetGraph& g) {
  std::vector<std::size_t> parent(g.n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : g.edge_index) parent[find(e[0])] = find(e[1]);
  std::size_t count = 0;
  for (std::size_t i = 0; i < g.n; ++i) count += find(i) == i;
  return count;
}

/// Chebyshev polynomials T_0..T_{K-1} of the scaled Laplacian.
struct ChebBasis {
  std::vector<Eigen::MatrixXd> terms;

  std::size_t order() const noexcept { return terms.size(); }
  std::size_t nodes() const noexcept { return terms.empty() ? 0 : terms.front().rows(); }
};

inline ChebBasis cheb_basis(const FleetGraph& g, int k) {
  if (k < 1) throw Error("cheb_basis: K must be >= 1, got " + std::to_string(k));
  if (!g.has_laplacian()) throw Error("cheb_basis: scaled Laplacian not populated");
  const auto n = static_cast<Eigen::Index>(g.n);
  ChebBasis b;
  b.terms.push_back(Eigen::MatrixXd::Identity(n, n));
  if (k >= 2) b.terms.push_back(g.scaled_laplacian);
  for (int i = 2; i < k; ++i) {
    b.terms.push_back(2.0 * g.scaled_laplacian * b.terms[i - 1] - b.terms[i - 2]);
  }
  return b;
}

/// sum_i T_i(L~) x theta_i, applied at every timestep when x is
/// [len x nodes x c_in]; x may also be a single [nodes x c_in] snapshot.
/// theta is [K x c_in x c_out].
inline Var cheb_conv(Var x, const ChebBasis& basis, Var theta) {
  detail::require_same_tape(x, theta, "cheb_conv");
  const Tensor& xv = x.value();
  const Tensor& tv = theta.value();
  const bool snapshot = xv.rank() == 2;
  if (!snapshot && xv.rank() != 3) {
    throw DimensionError("cheb_conv: expected [nodes x c] or [len x nodes x c], got " +
                         shape_string(xv.shape()));
  }
  const std::size_t len = snapshot ? 1 : xv.dim(0);
  const std::size_t n = snapshot ? xv.dim(0) : xv.dim(1);
  const std::size_t cin = xv.shape().back();
  if (tv.rank() != 3 || tv.dim(1) != cin) {
    throw DimensionError("cheb_conv: theta " + shape_string(tv.shape()) +
                         " incompatible with input " + shape_string(xv.shape()));
  }
  if (tv.dim(0) != basis.order()) {
    throw DimensionError("cheb_conv: theta has " + std::to_string(tv.dim(0)) +
                         " terms, basis has " + std::to_string(basis.order()));
  }
  if (basis.nodes() != n) {
    throw DimensionError("cheb_conv: input has " + std::to_string(n) + " nodes, graph has " +
                         std::to_string(basis.nodes()));
  }
  const std::size_t K = basis.order(), cout = tv.dim(2);
  using detail::ConstMatMap;
  using detail::MatMap;
  using detail::RowMatrix;
  const auto N = static_cast<Eigen::Index>(n);
  const auto LC = static_cast<Eigen::Index>(len * cin);
  const auto NL = static_cast<Eigen::Index>(n * len);

  // P[i, t*cin + c] = x[t, i, c]
  RowMatrix p(N, LC);
  for (std::size_t t = 0; t < len; ++t)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t c = 0; c < cin; ++c) p(i, t * cin + c) = xv[(t * n + i) * cin + c];

  auto z = std::make_shared<std::vector<RowMatrix>>();
  RowMatrix yp = RowMatrix::Zero(NL, static_cast<Eigen::Index>(cout));
  for (std::size_t k = 0; k < K; ++k) {
    z->push_back(basis.terms[k] * p);
    const ConstMatMap zk(z->back().data(), NL, static_cast<Eigen::Index>(cin));
    const ConstMatMap th(tv.storage().data() + k * cin * cout, static_cast<Eigen::Index>(cin),
                         static_cast<Eigen::Index>(cout));
    yp.noalias() += zk * th;
  }
  Tensor out(snapshot ? Shape{n, cout} : Shape{len, n, cout});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t t = 0; t < len; ++t)
      for (std::size_t c = 0; c < cout; ++c) out[(t * n + i) * cout + c] = yp(i * len + t, c);

  return x.tape->record(
      "cheb_conv", std::move(out), {x.id, theta.id},
      [z, basis_terms = basis.terms, len, n, cin, cout, K](Tape& t, std::size_t self) {
        const std::size_t ix = t.inputs(self)[0], it = t.inputs(self)[1];
        const Tensor& g = t.grad_slot(self);
        const auto N = static_cast<Eigen::Index>(n);
        const auto NL = static_cast<Eigen::Index>(n * len);
        const auto CI = static_cast<Eigen::Index>(cin);
        const auto CO = static_cast<Eigen::Index>(cout);
        RowMatrix gp(NL, CO);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t tt = 0; tt < len; ++tt)
            for (std::size_t c = 0; c < cout; ++c) gp(i * len + tt, c) = g[(tt * n + i) * cout + c];
        const Tensor& tv = t.value(it);
        if (t.needs_grad(it)) {
          Tensor& gt = t.grad_slot(it);
          for (std::size_t k = 0; k < K; ++k) {
            const ConstMatMap zk((*z)[k].data(), NL, CI);
            MatMap(gt.storage().data() + k * cin * cout, CI, CO).noalias() += zk.transpose() * gp;
          }
        }
        if (t.needs_grad(ix)) {
          RowMatrix dp = RowMatrix::Zero(N, static_cast<Eigen::Index>(len * cin));
          for (std::size_t k = 0; k < K; ++k) {
            const ConstMatMap th(tv.storage().data() + k * cin * cout, CI, CO);
            RowMatrix dz = gp * th.transpose();  // [NL x cin] == [N x len*cin]
            const ConstMatMap dzk(dz.data(), N, static_cast<Eigen::Index>(len * cin));
            dp.noalias() += basis_terms[k].transpose() * dzk;
          }
          Tensor& gx = t.grad_slot(ix);
          for (std::size_t tt = 0; tt < len; ++tt)
            for (std::size_t i = 0; i < n; ++i)
              for (std::size_t c = 0; c < cin; ++c) gx[(tt * n + i) * cin + c] += dp(i, tt * cin + c);
        }
      });
}

/// Value-only convenience wrapper.
inline Tensor cheb_conv(const Tensor& x, const ChebBasis& basis, const Tensor& theta) {
  Tape tape;
  return cheb_conv(tape.constant(x), basis, tape.constant(theta)).value();
}

}  // namespace solarmend

#endif  // SOLARMEND_GRAPH_HPP
