#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "catlab/error.hpp"
#include "catlab/format.hpp"
#include "catlab/random.hpp"
#include "catlab/spaces/metric_graph.hpp"
#include "catlab/spaces/model_surface.hpp"
#include "catlab/spaces/tree_space.hpp"

namespace catlab::flows {

using spaces::GraphPoint;
using spaces::MetricGraph;
using spaces::ModelPoint;
using spaces::ModelSurface;
using spaces::TreePoint;
using spaces::TreeSpace;

template <class Space>
struct SpaceTraits;

template <>
struct SpaceTraits<ModelSurface> {
  using Point = ModelPoint;
  static double distance(const ModelSurface& s, const Point& p, const Point& q) { return s.distance(p, q); }
  static Point geodesic(const ModelSurface& s, const Point& p, const Point& q, double t) {
    return s.geodesic_point(p, q, t);
  }
  /// Within distance min(1, convexity radius / 2) of the origin.
  static Point sample(const ModelSurface& s, SplitMix64& rng);
  /// 16 points at distance r in equally spaced directions.
  static std::vector<Point> probes(const ModelSurface& s, const Point& p, double r);
};

template <>
struct SpaceTraits<TreeSpace> {
  using Point = TreePoint;
  static double distance(const TreeSpace& s, const Point& p, const Point& q) { return s.distance(p, q); }
  static Point geodesic(const TreeSpace& s, const Point& p, const Point& q, double t) {
    return s.geodesic_point(p, q, t);
  }
  static Point sample(const TreeSpace& s, SplitMix64& rng) { return s.sample(rng); }
  /// Every direction at radii r k / 16, k = 1..16.
  static std::vector<Point> probes(const TreeSpace& s, const Point& p, double r);
};

/// Graph points are handled as points of the 1-complex. Geodesics are only
/// formed between vertices (shortest paths, arc-length interpolation).
template <>
struct SpaceTraits<MetricGraph> {
  using Point = GraphPoint;
  static double distance(const MetricGraph& s, const Point& p, const Point& q) { return s.distance(p, q); }
  static Point geodesic(const MetricGraph& s, const Point& p, const Point& q, double t);
  static Point sample(const MetricGraph& s, SplitMix64& rng) {
    return GraphPoint::at(static_cast<spaces::VertexId>(rng.below(s.vertex_count())));
  }
  /// Along every edge leaving p, at radii r k / 16, k = 1..16.
  static std::vector<Point> probes(const MetricGraph& s, const Point& p, double r);
};

template <class Space>
using PointOf = typename SpaceTraits<Space>::Point;

/// A function on a space with its claimed convexity modulus and Lipschitz
/// bound. `prox`, when set, is the closed-form resolvent argmin f(y) + d(x,y)^2/(2 tau).
template <class Space>
struct ConvexFunctionHandle {
  using Point = PointOf<Space>;
  const Space* space = nullptr;
  std::function<double(const Point&)> value;
  double lambda = 0.0;
  double lipschitz = std::numeric_limits<double>::infinity();
  std::function<Point(const Point&, double)> prox;
  std::string name;

  double operator()(const Point& p) const { return value(p); }
};

/// f = d(o, .)^2 / 2 on a model surface (|x|^2 / 2 in the plane), claimed
/// 1-convex. Closed-form resolvent x / (1 + tau) in the flat case.
ConvexFunctionHandle<ModelSurface> half_squared_distance(const ModelSurface& s);
/// f = d(v, .), 0-convex and 1-Lipschitz.
ConvexFunctionHandle<TreeSpace> distance_function(const TreeSpace& t, TreePoint v);
/// f = d(v, .)^2, 2-convex, Lipschitz with constant 2 diam.
ConvexFunctionHandle<TreeSpace> squared_distance(const TreeSpace& t, TreePoint v);
/// f = d(v, .) on a graph, 1-Lipschitz.
ConvexFunctionHandle<MetricGraph> distance_function(const MetricGraph& g, spaces::VertexId v);

/// Resolvent of f at x with step tau. Model surfaces: damped Newton in normal
/// coordinates at x. Trees: golden section on every edge. Graphs: best vertex
/// within 2 tau L of x, then golden section on its edges. Throws
/// ProximalDivergence when the inner solve fails.
ModelPoint proximal_step(const ModelSurface& s, const std::function<double(const ModelPoint&)>& f,
                         const ModelPoint& x, double tau, double lipschitz);
TreePoint proximal_step(const TreeSpace& s, const std::function<double(const TreePoint&)>& f, const TreePoint& x,
                        double tau, double lipschitz);
GraphPoint proximal_step(const MetricGraph& s, const std::function<double(const GraphPoint&)>& f,
                         const GraphPoint& x, double tau, double lipschitz);

template <class Space>
PointOf<Space> resolvent(const ConvexFunctionHandle<Space>& f, const PointOf<Space>& x, double tau) {
  if (f.prox) return f.prox(x, tau);
  return proximal_step(*f.space, f.value, x, tau, f.lipschitz);
}

struct ConvexityReport {
  std::size_t samples = 0;
  double lambda = 0.0;
  /// max over samples of f(m) - f(p)/2 - f(q)/2 + (lambda/8) d(p,q)^2
  double worst_defect = -std::numeric_limits<double>::infinity();
  double worst_tolerance = 0.0;  // 1e-9 (1 + |f|) at the worst sample
  double max_lipschitz_ratio = 0.0;
  bool convex = true;
  bool lipschitz = true;

  bool passed() const { return convex && lipschitz; }
};

/// Midpoint test on sampled pairs drawn by `sampler`. A pair fails when its
/// defect exceeds 1e-9 (1 + max |f|).
template <class Space>
ConvexityReport certify_lambda_convex(const ConvexFunctionHandle<Space>& f, std::size_t n_samples, std::uint64_t seed,
                                      const std::function<PointOf<Space>(SplitMix64&)>& sampler) {
  using T = SpaceTraits<Space>;
  ConvexityReport out;
  out.lambda = f.lambda;
  SplitMix64 rng(seed);
  for (std::size_t k = 0; k < n_samples; ++k) {
    const auto p = sampler(rng);
    const auto q = sampler(rng);
    const double d = T::distance(*f.space, p, q);
    const auto m = T::geodesic(*f.space, p, q, 0.5);
    const double fp = f(p), fq = f(q), fm = f(m);
    const double defect = fm - 0.5 * fp - 0.5 * fq + f.lambda / 8.0 * d * d;
    const double tol = 1e-9 * (1.0 + std::max({std::abs(fp), std::abs(fq), std::abs(fm)}));
    if (defect - tol > out.worst_defect - out.worst_tolerance) {
      out.worst_defect = defect;
      out.worst_tolerance = tol;
    }
    if (defect > tol) out.convex = false;
    if (d > 0.0) {
      const double ratio = std::abs(fp - fq) / d;
      out.max_lipschitz_ratio = std::max(out.max_lipschitz_ratio, ratio);
      if (ratio > f.lipschitz * (1.0 + 1e-9) + 1e-12) out.lipschitz = false;
    }
    ++out.samples;
  }
  return out;
}

template <class Space>
ConvexityReport certify_lambda_convex(const ConvexFunctionHandle<Space>& f, std::size_t n_samples,
                                      std::uint64_t seed) {
  const Space& space = *f.space;
  return certify_lambda_convex<Space>(
      f, n_samples, seed, [&space](SplitMix64& rng) { return SpaceTraits<Space>::sample(space, rng); });
}

struct SlopeEstimate {
  double value = 0.0;
  double radius = 0.0;  // probe radius that gave `value`
  std::size_t probes = 0;
};

/// max(0, max over probes of (f(p) - f(x)) / d(p, x)) at radius r_p and again
/// at r_p / 2; the larger estimate is kept. Throws IsolatedPoint.
template <class Space>
SlopeEstimate descending_slope(const ConvexFunctionHandle<Space>& f, const PointOf<Space>& p, double r_p) {
  using T = SpaceTraits<Space>;
  if (!(r_p > 0.0)) raise(ErrorCode::InvalidArgument, "probe radius must be positive");
  const double fp = f(p);
  SlopeEstimate best;
  for (double r : {r_p, 0.5 * r_p}) {
    double value = 0.0;
    std::size_t used = 0;
    for (const auto& x : T::probes(*f.space, p, r)) {
      const double d = T::distance(*f.space, p, x);
      if (!(d > 0.0)) continue;
      value = std::max(value, (fp - f(x)) / d);
      ++used;
    }
    if (used == 0) raise(ErrorCode::IsolatedPoint, "no probe points around p");
    if (best.probes == 0 || value > best.value) best = {value, r, used};
  }
  return best;
}

template <class Space>
struct FlowTrajectory {
  double tau = 0.0;  // actual step T / N
  std::vector<double> times;
  std::vector<PointOf<Space>> points;
  std::vector<double> values;
  /// max over steps of f(x_{k+1}) + d(x_k, x_{k+1})^2 / (2 tau) - f(x_k); <= 0
  /// up to solver tolerance.
  double max_dissipation_excess = 0.0;

  const PointOf<Space>& end() const { return points.back(); }
};

inline std::size_t flow_steps(double T, double tau) {
  if (!(T >= 0.0) || !(tau > 0.0)) raise(ErrorCode::InvalidArgument, "need T >= 0 and tau > 0");
  return static_cast<std::size_t>(std::ceil(T / tau - 1e-9));
}

/// N proximal steps of size T / N, N = ceil(T / tau).
template <class Space>
FlowTrajectory<Space> flow_steps_of(const ConvexFunctionHandle<Space>& f, const PointOf<Space>& x0, double T,
                                    std::size_t n) {
  using T_ = SpaceTraits<Space>;
  FlowTrajectory<Space> out;
  out.tau = n == 0 ? 0.0 : T / static_cast<double>(n);
  out.times.push_back(0.0);
  out.points.push_back(x0);
  out.values.push_back(f(x0));
  for (std::size_t k = 1; k <= n; ++k) {
    const auto next = resolvent(f, out.points.back(), out.tau);
    const double fn = f(next);
    const double d = T_::distance(*f.space, out.points.back(), next);
    out.max_dissipation_excess =
        std::max(out.max_dissipation_excess, fn + d * d / (2.0 * out.tau) - out.values.back());
    out.times.push_back(k == n ? T : out.tau * static_cast<double>(k));
    out.points.push_back(next);
    out.values.push_back(fn);
  }
  return out;
}

template <class Space>
FlowTrajectory<Space> flow(const ConvexFunctionHandle<Space>& f, const PointOf<Space>& x0, double T, double tau) {
  return flow_steps_of(f, x0, T, flow_steps(T, tau));
}

struct ContractionReport {
  double T = 0.0;
  double tau = 0.0;
  double lambda = 0.0;
  double initial_distance = 0.0;
  double final_distance = 0.0;
  double ratio = 0.0;
  double expected = 0.0;   // e^{-lambda T}
  double tolerance = 0.0;  // C tau
  bool passed = false;
};

/// d(x_N, y_N) / d(x_0, y_0) <= e^{-lambda T} + C tau.
template <class Space>
ContractionReport contraction_check(const ConvexFunctionHandle<Space>& f, const PointOf<Space>& x0,
                                    const PointOf<Space>& y0, double T, double tau, double C = 1.0) {
  using T_ = SpaceTraits<Space>;
  ContractionReport out;
  out.T = T;
  out.tau = tau;
  out.lambda = f.lambda;
  out.initial_distance = T_::distance(*f.space, x0, y0);
  if (!(out.initial_distance > 0.0)) raise(ErrorCode::InvalidArgument, "start points must differ");
  const auto fx = flow(f, x0, T, tau);
  const auto fy = flow(f, y0, T, tau);
  out.final_distance = T_::distance(*f.space, fx.end(), fy.end());
  out.ratio = out.final_distance / out.initial_distance;
  out.expected = std::exp(-f.lambda * T);
  out.tolerance = C * tau;
  out.passed = out.ratio <= out.expected + out.tolerance;
  return out;
}

struct VariationOptions {
  double tau = 1e-3;
  double delta = 1e-3;        // central-difference step in s
  double probe_radius = 1e-3;
  double budget_constant = 4.0;
};

struct VariationReport {
  std::vector<double> s;
  std::vector<double> lhs;       // |eta'(s)|^2
  std::vector<double> rhs;       // e^{-2 lambda rho} (|g'|^2 - 2 (f o g)' rho' + slope^2 rho'^2)
  std::vector<double> residual;  // lhs - rhs
  std::vector<double> budget;    // K (tau + delta^2 + r_p) (1 + |g'|^2)
  double max_residual = -std::numeric_limits<double>::infinity();
  double max_excess = -std::numeric_limits<double>::infinity();  // max of residual - budget
  std::string budget_formula;
  bool passed = true;
};

/// Velocity bound for eta(s) = Phi_{rho(s)}(gamma(s)), checked at each s by
/// central differences. All flows use the same step count, chosen from the
/// largest rho on the stencil, so eta is smooth in s.
template <class Space>
VariationReport variation_velocity_check(const ConvexFunctionHandle<Space>& f,
                                         const std::function<PointOf<Space>(double)>& gamma,
                                         const std::function<double(double)>& rho, const std::vector<double>& s_grid,
                                         const VariationOptions& opt = {}) {
  using T_ = SpaceTraits<Space>;
  VariationReport out;
  out.budget_formula = "K * (tau + delta^2 + r_p) * (1 + |gamma'|^2), K = " + format_double(opt.budget_constant);
  double rho_max = 0.0;
  for (double s : s_grid) {
    for (double x : {s - opt.delta, s, s + opt.delta}) {
      const double r = rho(x);
      if (!(r >= 0.0)) raise(ErrorCode::InvalidArgument, "rho must be nonnegative");
      rho_max = std::max(rho_max, r);
    }
  }
  const std::size_t n = flow_steps(rho_max, opt.tau);
  auto eta = [&](double s) {
    const double r = rho(s);
    return flow_steps_of(f, gamma(s), r, r > 0.0 ? n : 0).end();
  };
  const double inv = 1.0 / (2.0 * opt.delta);
  for (double s : s_grid) {
    const auto gm = gamma(s - opt.delta), gp = gamma(s + opt.delta);
    const double g_speed = T_::distance(*f.space, gm, gp) * inv;
    const double eta_speed = T_::distance(*f.space, eta(s - opt.delta), eta(s + opt.delta)) * inv;
    const double fg_prime = (f(gp) - f(gm)) * inv;
    const double rho_prime = (rho(s + opt.delta) - rho(s - opt.delta)) * inv;
    double slope_sq_term = 0.0;
    if (rho_prime != 0.0) {
      const double slope = descending_slope(f, gamma(s), opt.probe_radius).value;
      slope_sq_term = slope * slope * rho_prime * rho_prime;
    }
    const double lhs = eta_speed * eta_speed;
    const double rhs = std::exp(-2.0 * f.lambda * rho(s)) *
                       (g_speed * g_speed - 2.0 * fg_prime * rho_prime + slope_sq_term);
    const double budget =
        opt.budget_constant * (opt.tau + opt.delta * opt.delta + opt.probe_radius) * (1.0 + g_speed * g_speed);
    out.s.push_back(s);
    out.lhs.push_back(lhs);
    out.rhs.push_back(rhs);
    out.residual.push_back(lhs - rhs);
    out.budget.push_back(budget);
    out.max_residual = std::max(out.max_residual, lhs - rhs);
    out.max_excess = std::max(out.max_excess, lhs - rhs - budget);
    if (lhs - rhs > budget) out.passed = false;
  }
  return out;
}

}  // namespace catlab::flows
