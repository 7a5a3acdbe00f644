#include "catlab/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "catlab/error.hpp"
#include "catlab/format.hpp"
#include "catlab/quadrature.hpp"
#include "catlab/random.hpp"

namespace catlab::conformal {

namespace {

void check_bounds(double c, double C) {
  if (!(c <= C) || !std::isfinite(c) || !std::isfinite(C)) {
    raise(ErrorCode::InvalidArgument, "factor bounds must be finite with c <= C");
  }
}

void check_factor(std::span<const double> f, std::size_t expected, double c, double C) {
  check_bounds(c, C);
  if (f.size() != expected) raise(ErrorCode::InvalidArgument, "factor has wrong length");
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (!(f[k] >= c && f[k] <= C)) {
      raise(ErrorCode::UnboundedFactor, "f = " + format_double(f[k]) + " at node " + std::to_string(k) +
                                            " outside [" + format_double(c) + ", " + format_double(C) + "]");
    }
  }
}

std::pair<double, double> range_of(std::span<const double> v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return {*lo, *hi};
}

std::vector<double> distances_from(const MetricGraph& g, VertexId center) {
  if (center >= g.vertex_count()) raise(ErrorCode::InvalidArgument, "center is not a vertex");
  const auto tree = g.shortest_paths(center);
  std::vector<double> d(g.vertex_count());
  for (std::size_t v = 0; v < d.size(); ++v) {
    if (!tree.reached(static_cast<VertexId>(v))) {
      raise(ErrorCode::Disconnected, "vertex " + std::to_string(v) + " unreachable from center");
    }
    d[v] = tree.distance(static_cast<VertexId>(v));
  }
  return d;
}

void check_certificate(const comparison::ComparisonReport* certificate) {
  if (!certificate) raise(ErrorCode::BaseNotCAT0, "no comparison certificate supplied");
  if (certificate->kappa > 0.0) {
    raise(ErrorCode::BaseNotCAT0, "certificate is for kappa = " + format_double(certificate->kappa) + " > 0");
  }
  if (!certificate->passed()) {
    raise(ErrorCode::BaseNotCAT0, "certificate failed: defect " + format_double(certificate->max_defect) +
                                      " > budget " + format_double(certificate->budget));
  }
}

// Backend glue so the two-step construction is written once.
const MetricGraph& graph_of(const MetricGraph& g, MetricGraph&) { return g; }
const MetricGraph& graph_of(const GridDisc& g, MetricGraph& scratch) {
  scratch = spaces::grid_to_graph(g);
  return scratch;
}
MetricGraph restrict_to(const MetricGraph& g, std::span<const VertexId> keep) { return g.induced_subgraph(keep); }
GridDisc restrict_to(const GridDisc& g, std::span<const std::size_t> keep) { return g.restricted(keep); }
std::size_t size_of(const MetricGraph& g) { return g.vertex_count(); }
std::size_t size_of(const GridDisc& g) { return g.node_count(); }

template <class Space, class Index>
MainTransformResult<Space, Index> main_transform_impl(const Space& g, double kappa, Index center, double r,
                                                      const MainTransformOptions& options) {
  if (!(r > 0.0)) raise(ErrorCode::InvalidArgument, "radius must be positive");
  if (!(options.collar >= 0.0)) raise(ErrorCode::InvalidArgument, "collar must be nonnegative");
  if (static_cast<std::size_t>(center) >= size_of(g)) raise(ErrorCode::InvalidArgument, "center out of range");
  MainTransformResult<Space, Index> out;
  out.kappa = kappa;
  out.r = r;
  const std::size_t n = size_of(g);
  MetricGraph scratch;

  std::vector<double> f1(n, 0.0);
  const Space* base = &g;
  Space stepped = g;
  double radius = r;
  if (kappa > 0.0) {
    if (r >= 0.5 * std::numbers::pi / std::sqrt(kappa)) {
      raise(ErrorCode::RadiusTooLarge, "r = " + format_double(r) + " >= pi / (2 sqrt(kappa))");
    }
    out.A = options.A ? *options.A : find_A(r, kappa);
    if (!(out.A > 0.0)) raise(ErrorCode::InvalidArgument, "A must be positive");
    const std::vector<double> d = distances_from(graph_of(g, scratch), static_cast<VertexId>(center));
    for (std::size_t v = 0; v < n; ++v) f1[v] = out.A * d[v] * d[v];
    const auto [lo, hi] = range_of(f1);
    stepped = conformal_change(g, f1, lo, hi);
    base = &stepped;
    const double A = out.A;
    radius = integrate([A](double t) { return std::exp(A * t * t); }, 0.0, r);
  }
  out.step_radius = radius;

  const std::vector<double> d = distances_from(graph_of(*base, scratch), static_cast<VertexId>(center));
  const double cutoff = radius - options.collar;
  std::vector<double> f2;
  for (std::size_t v = 0; v < n; ++v) {
    if (d[v] < cutoff) {
      out.kept.push_back(static_cast<Index>(v));
      f2.push_back(std::log(main_log_factor(radius, d[v])));
      out.f.push_back(f1[v] + f2.back());
    } else {
      ++out.excluded;
    }
  }
  if (out.kept.size() < 2) raise(ErrorCode::NodeOnBoundary, "no nodes strictly inside the ball");
  const Space inner = restrict_to(*base, out.kept);
  const auto [lo, hi] = range_of(f2);
  out.space = conformal_change(inner, f2, lo, hi);
  return out;
}

}  // namespace

MetricGraph conformal_change(const MetricGraph& g, std::span<const double> f, double c, double C) {
  check_factor(f, g.vertex_count(), c, C);
  std::vector<double> weights;
  weights.reserve(g.edge_count());
  for (const spaces::Edge& e : g.edges()) weights.push_back(e.weight * 0.5 * (std::exp(f[e.a]) + std::exp(f[e.b])));
  return g.reweighted(weights);
}

GridDisc conformal_change(const GridDisc& g, std::span<const double> f, double c, double C) {
  check_factor(f, g.node_count(), c, C);
  std::vector<double> phi(g.factor().begin(), g.factor().end());
  for (std::size_t k = 0; k < phi.size(); ++k) phi[k] *= std::exp(f[k]);
  return g.with_factor(std::move(phi));
}

BilipschitzReport bilipschitz_check(const MetricGraph& base, const MetricGraph& changed, double c, double C,
                                    std::size_t n_pairs, std::uint64_t seed) {
  check_bounds(c, C);
  const std::size_t n = base.vertex_count();
  if (changed.vertex_count() != n) raise(ErrorCode::InvalidArgument, "graphs differ in vertex count");
  if (n < 2) raise(ErrorCode::InvalidArgument, "need at least two vertices");
  BilipschitzReport out;
  out.lower = std::exp(c);
  out.upper = std::exp(C);
  out.min_ratio = std::numeric_limits<double>::infinity();
  out.max_ratio = 0.0;
  SplitMix64 rng(seed);
  for (std::size_t k = 0; k < n_pairs; ++k) {
    const auto a = static_cast<VertexId>(rng.below(n));
    auto b = static_cast<VertexId>(rng.below(n - 1));
    if (b >= a) ++b;
    const double ratio = changed.distance(a, b) / base.distance(a, b);
    out.min_ratio = std::min(out.min_ratio, ratio);
    out.max_ratio = std::max(out.max_ratio, ratio);
    ++out.pairs;
  }
  out.passed = out.min_ratio >= out.lower * (1.0 - 1e-12) && out.max_ratio <= out.upper * (1.0 + 1e-12);
  return out;
}

double radial_distance(const RadialProfile& profile, double s) {
  if (!(s >= 0.0 && s < profile.r)) {
    raise(ErrorCode::OutOfDomain, "s = " + format_double(s) + " outside [0, " + format_double(profile.r) + ")");
  }
  return integrate(profile.xi, 0.0, s, 1e-10);
}

double kappa_bar(double c, double C, double kappa, double lambda) {
  check_bounds(c, C);
  const double k = kappa - 4.0 * lambda;
  if (k <= 0.0) return std::exp(-2.0 * C) * k;
  if (lambda > 0.0) return std::exp(-2.0 * c) * k;
  raise(ErrorCode::OnlyLocalBound, "kappa - 4 lambda > 0 with lambda <= 0 gives only a bound on small balls");
}

double kappa_bar_product(double c, double C, double kappa, double mu) {
  check_bounds(c, C);
  const double k = kappa - 2.0 * mu;
  return k <= 0.0 ? std::exp(-2.0 * C) * k : std::exp(-2.0 * c) * k;
}

double grid_laplacian(const GridDisc& g, std::span<const double> values, std::size_t node) {
  const auto n = g.nodes()[node];
  const auto e = g.find(n.i + 1, n.j), w = g.find(n.i - 1, n.j);
  const auto s = g.find(n.i, n.j - 1), nn = g.find(n.i, n.j + 1);
  if (!e || !w || !s || !nn) raise(ErrorCode::InvalidArgument, "node " + std::to_string(node) + " is not interior");
  const double h = g.spacing();
  return (values[*e] + values[*w] + values[*s] + values[*nn] - 4.0 * values[node]) / (h * h);
}

CurvatureEstimate log_subharmonic_residual(const GridDisc& g, double kappa) {
  CurvatureEstimate out;
  out.kappa = kappa;
  out.nodes = g.interior_nodes();
  if (out.nodes.empty()) raise(ErrorCode::InvalidArgument, "grid has no interior nodes");
  std::vector<double> log_phi(g.node_count());
  for (std::size_t k = 0; k < log_phi.size(); ++k) {
    const double phi = g.factor()[k];
    if (!(phi > 0.0)) raise(ErrorCode::NonPositiveFactor, "phi <= 0 at node " + std::to_string(k));
    log_phi[k] = std::log(phi);
  }
  out.curvature.reserve(out.nodes.size());
  out.residual.reserve(out.nodes.size());
  for (std::size_t k : out.nodes) {
    const double lap = grid_laplacian(g, log_phi, k);
    const double phi = g.factor()[k];
    out.curvature.push_back(-lap / (phi * phi));
    out.residual.push_back(lap + 0.5 * kappa * phi * phi);
  }
  return out;
}

DoubleChangeResult double_change(const GridDisc& g, std::span<const double> psi, double mu, double c, double C,
                                 double kappa, double tol) {
  check_factor(psi, g.node_count(), c, C);
  const std::vector<std::size_t> interior = g.interior_nodes();
  if (interior.empty()) raise(ErrorCode::InvalidArgument, "grid has no interior nodes");
  DoubleChangeResult out{g, kappa_bar_product(c, C, kappa, mu)};
  out.min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t k : interior) {
    const double phi = g.factor()[k];
    const double margin = grid_laplacian(g, psi, k) - mu * phi * phi;
    if (margin < out.min_margin) {
      out.min_margin = margin;
      out.worst_node = k;
    }
  }
  if (out.min_margin < -tol) {
    const auto node = g.nodes()[out.worst_node];
    raise(ErrorCode::HypothesisViolated, "Delta psi - mu phi^2 = " + format_double(out.min_margin) + " at node (" +
                                             std::to_string(node.i) + ", " + std::to_string(node.j) + ")");
  }
  const double h = g.spacing();
  for (double phi : g.factor()) out.area += phi * phi * h * h;
  out.area_bound = std::numeric_limits<double>::infinity();
  if (out.kappa_bar > 0.0) {
    out.area_bound = std::exp(-2.0 * C) * 2.0 * std::numbers::pi / out.kappa_bar;
    if (out.area > out.area_bound) {
      raise(ErrorCode::HypothesisViolated,
            "area " + format_double(out.area) + " exceeds e^{-2C} 2 pi / kappa_bar = " + format_double(out.area_bound));
    }
  }
  std::vector<double> phi(g.factor().begin(), g.factor().end());
  for (std::size_t k = 0; k < phi.size(); ++k) phi[k] *= std::exp(psi[k]);
  out.disc = g.with_factor(std::move(phi));
  return out;
}

double nonpos_radius(double R) {
  if (!(R > 0.0) || !std::isfinite(R)) raise(ErrorCode::InvalidArgument, "R must be finite and positive");
  const auto g = [](double r) { return integrate([](double t) { return std::exp(0.5 * t * t); }, 0.0, r); };
  // The integrand is at least 1, so r <= R.
  return bisect_increasing(g, R, 0.0, R, 1e-10);
}

double nonpos_kappa(double R) {
  const double r = nonpos_radius(R);
  return -4.0 * std::exp(-r * r);
}

NonposResult nonpos_transform(const MetricGraph& g, const comparison::ComparisonReport* certificate, VertexId center,
                              double R) {
  check_certificate(certificate);
  NonposResult out;
  out.R = R;
  out.r = nonpos_radius(R);
  out.kappa = -4.0 * std::exp(-out.r * out.r);
  out.f = distances_from(g, center);
  for (double& v : out.f) v = 0.5 * v * v;
  const auto [lo, hi] = range_of(out.f);
  out.graph = conformal_change(g, out.f, lo, hi);
  return out;
}

NonposGridResult nonpos_transform(const GridDisc& g, const comparison::ComparisonReport* certificate,
                                  std::size_t center, double R) {
  check_certificate(certificate);
  NonposGridResult out;
  out.R = R;
  out.r = nonpos_radius(R);
  out.kappa = -4.0 * std::exp(-out.r * out.r);
  out.f = distances_from(spaces::grid_to_graph(g), static_cast<VertexId>(center));
  for (double& v : out.f) v = 0.5 * v * v;
  const auto [lo, hi] = range_of(out.f);
  out.disc = conformal_change(g, out.f, lo, hi);
  return out;
}

double main_log_factor(double r, double d) {
  if (!(d < r)) {
    raise(ErrorCode::NodeOnBoundary, "distance " + format_double(d) + " not inside radius " + format_double(r));
  }
  return 2.0 / ((r - d) * (r + d));
}

double main_radial_distance(double r, double s) {
  const RadialProfile profile{[r](double t) { return 2.0 / ((r - t) * (r + t)); }, r};
  return radial_distance(profile, s);
}

double main_radial_distance_exact(double r, double s) {
  if (!(s >= 0.0 && s < r)) raise(ErrorCode::OutOfDomain, "s outside [0, r)");
  return std::log((r + s) / (r - s)) / r;
}

double main_radial_distance_variant(double r, double s) {
  if (!(s >= 0.0 && s < r)) raise(ErrorCode::OutOfDomain, "s outside [0, r)");
  return integrate([r](double t) { return -std::log(0.5 * (r - t) * (r + t)); }, 0.0, s);
}

double sphere_midpoint_margin(double A, double r, double kappa, std::size_t samples, std::uint64_t seed) {
  const spaces::ModelSurface sphere(kappa);
  const spaces::ModelPoint o = sphere.origin();
  SplitMix64 rng(seed);
  auto draw = [&] {
    const double rho = r * std::sqrt(rng.uniform());
    const double th = rng.uniform(0.0, 2.0 * std::numbers::pi);
    return sphere.exp(o, rho * std::cos(th), rho * std::sin(th));
  };
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < samples; ++k) {
    const auto p = draw(), q = draw();
    const double d = sphere.distance(p, q);
    if (d < 1e-6 * r) continue;
    const auto m = sphere.geodesic_point(p, q, 0.5);
    const double dp = sphere.distance(o, p), dq = sphere.distance(o, q), dm = sphere.distance(o, m);
    worst = std::min(worst, A * (0.5 * dp * dp + 0.5 * dq * dq - dm * dm) / (d * d));
  }
  return worst;
}

double find_A(double r, double kappa, const FindAOptions& options) {
  if (!(kappa > 0.0)) raise(ErrorCode::InvalidArgument, "find_A needs kappa > 0");
  if (!(r > 0.0) || r >= 0.5 * std::numbers::pi / std::sqrt(kappa)) {
    raise(ErrorCode::RadiusTooLarge, "r must lie in (0, pi / (2 sqrt(kappa)))");
  }
  if (!(options.safety > 0.0 && options.safety <= 1.0)) raise(ErrorCode::InvalidArgument, "safety must be in (0, 1]");
  // The margin is linear in A, so one sampling pass serves the whole grid.
  const double unit = sphere_midpoint_margin(1.0, r, kappa, options.samples, options.seed);
  const double lambda = kappa;
  constexpr int kSteps = 32;  // per decade
  for (int k = -3 * kSteps; k <= 4 * kSteps; ++k) {
    const double A = std::pow(10.0, static_cast<double>(k) / kSteps);
    const double margin = A * unit;
    if (margin >= lambda / 8.0 - 1e-9 * (1.0 + A * r * r)) return A / options.safety;
  }
  raise(ErrorCode::NoFeasibleA, "no A in [1e-3, 1e4] passes the midpoint test at r = " + format_double(r));
}

MainTransformGrid main_transform(const GridDisc& g, double kappa, std::size_t center, double r,
                                 const MainTransformOptions& options) {
  return main_transform_impl<GridDisc, std::size_t>(g, kappa, center, r, options);
}

MainTransformGraph main_transform(const MetricGraph& g, double kappa, VertexId center, double r,
                                  const MainTransformOptions& options) {
  return main_transform_impl<MetricGraph, VertexId>(g, kappa, center, r, options);
}

}  // namespace catlab::conformal
