#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "catlab/comparison.hpp"
#include "catlab/spaces/grid_disc.hpp"
#include "catlab/spaces/metric_graph.hpp"

namespace catlab::conformal {

using spaces::GridDisc;
using spaces::MetricGraph;
using spaces::VertexId;

/// e^f X on a graph: each edge weight is multiplied by the endpoint average of
/// e^f. `f` is indexed by vertex. Throws UnboundedFactor if some f leaves
/// [c, C].
MetricGraph conformal_change(const MetricGraph& g, std::span<const double> f, double c, double C);

/// e^f X on a grid disc: the nodal factor is multiplied by e^f, so repeated
/// changes compose exactly (f1 then f2 equals f1 + f2).
GridDisc conformal_change(const GridDisc& g, std::span<const double> f, double c, double C);

struct BilipschitzReport {
  std::size_t pairs = 0;
  double min_ratio = 0.0;  // d_f / d over sampled pairs
  double max_ratio = 0.0;
  double lower = 0.0;  // e^c
  double upper = 0.0;  // e^C
  bool passed = false;
};

/// Samples vertex pairs and checks e^c d <= d_f <= e^C d (relative slack 1e-12).
BilipschitzReport bilipschitz_check(const MetricGraph& base, const MetricGraph& changed, double c, double C,
                                    std::size_t n_pairs, std::uint64_t seed);

/// xi on [0, r), positive and continuous.
struct RadialProfile {
  std::function<double(double)> xi;
  double r = 0.0;
};

/// Distance from the center after changing the metric by xi(d): the integral
/// of xi over [0, s], absolute error 1e-10. Throws OutOfDomain for s outside
/// [0, r).
double radial_distance(const RadialProfile& profile, double s);

/// Curvature bound of e^f X for X CAT(kappa) and f lambda-convex with values
/// in [c, C]. Throws OnlyLocalBound when kappa - 4 lambda > 0 and lambda <= 0.
double kappa_bar(double c, double C, double kappa, double lambda);

/// Bound for e^psi phi when phi is kappa-log-subharmonic and psi satisfies
/// Delta psi >= mu phi^2 with values in [c, C].
double kappa_bar_product(double c, double C, double kappa, double mu);

struct CurvatureEstimate {
  double kappa = 0.0;
  std::vector<std::size_t> nodes;  // interior nodes, ascending
  std::vector<double> curvature;   // K = -phi^-2 Delta_h log phi
  std::vector<double> residual;    // Delta_h log phi + kappa/2 phi^2
  std::string stencil = "5-point";
  int order = 2;
};

/// Throws InvalidArgument if the disc has no interior nodes.
CurvatureEstimate log_subharmonic_residual(const GridDisc& g, double kappa);

/// 5-point Laplacian of a nodal field at an interior node.
double grid_laplacian(const GridDisc& g, std::span<const double> values, std::size_t node);

struct DoubleChangeResult {
  GridDisc disc;
  double kappa_bar = 0.0;
  double min_margin = 0.0;  // min over interior nodes of Delta_h psi - mu phi^2
  std::size_t worst_node = 0;
  double area = 0.0;        // sum of phi^2 h^2
  double area_bound = 0.0;  // e^{-2C} 2 pi / kappa_bar, +inf when kappa_bar <= 0
};

/// Factor e^psi phi with its curvature bound, for a kappa-log-subharmonic phi.
/// Checks Delta_h psi >= mu phi^2 - tol at interior nodes and, for a positive
/// bound, the area condition. Throws UnboundedFactor (psi outside [c, C]) and
/// HypothesisViolated (naming the worst node).
DoubleChangeResult double_change(const GridDisc& g, std::span<const double> psi, double mu, double c, double C,
                                 double kappa, double tol = 1e-8);

/// r with int_0^r e^{t^2/2} dt = R, by bisection (residual <= 1e-10).
double nonpos_radius(double R);
/// -4 e^{-r^2} for r = nonpos_radius(R).
double nonpos_kappa(double R);

struct NonposResult {
  MetricGraph graph;
  std::vector<double> f;  // 1/2 d(x, .)^2 per vertex
  double R = 0.0;
  double r = 0.0;
  double kappa = 0.0;
};

/// Changes a CAT(0) graph by f = d(x, .)^2 / 2. The certificate must be a
/// passed comparison report with kappa <= 0 (BaseNotCAT0 otherwise).
NonposResult nonpos_transform(const MetricGraph& g, const comparison::ComparisonReport* certificate, VertexId center,
                              double R);

struct NonposGridResult {
  GridDisc disc;
  std::vector<double> f;
  double R = 0.0;
  double r = 0.0;
  double kappa = 0.0;
};

/// Grid version: distances from the 8-neighbour graph, factor multiplied nodally.
NonposGridResult nonpos_transform(const GridDisc& g, const comparison::ComparisonReport* certificate,
                                  std::size_t center, double R);

/// h(t) = -log(r^2/2 - t); e^{h(d^2/2)} = 2 / (r^2 - d^2).
/// Throws NodeOnBoundary for d >= r.
double main_log_factor(double r, double d);

/// int_0^s 2 / (r^2 - t^2) dt, by quadrature. Throws OutOfDomain for s >= r.
double main_radial_distance(double r, double s);
/// Closed form (1/r) log((r + s) / (r - s)) of the same integral.
double main_radial_distance_exact(double r, double s);
/// The variant int_0^s h(t^2/2) dt = -int_0^s log((r^2 - t^2)/2) dt, kept for
/// side-by-side reporting. It stays bounded as s -> r.
double main_radial_distance_variant(double r, double s);

struct FindAOptions {
  std::size_t samples = 2000;
  std::uint64_t seed = 1;
  double safety = 0.9;
};

/// Coefficient A for which A d(x, .)^2 is kappa-convex (1-convex after
/// rescaling to curvature 1) on the ball B_r(x) of the model sphere, from a
/// sampled midpoint test. The smallest passing A on a logarithmic grid is
/// divided by the safety factor. Requires kappa > 0 and r < pi / (2 sqrt kappa)
/// (RadiusTooLarge); throws NoFeasibleA if no grid value passes.
double find_A(double r, double kappa, const FindAOptions& options = {});

/// Worst normalized midpoint margin of A d^2 on B_r: min over sampled pairs of
/// (f(p)/2 + f(q)/2 - f(m)) / d(p,q)^2, to compare against lambda / 8.
double sphere_midpoint_margin(double A, double r, double kappa, std::size_t samples, std::uint64_t seed);

struct MainTransformOptions {
  std::optional<double> A;  // step (i) coefficient; found with find_A when empty
  double collar = 0.0;      // nodes with d >= r' - collar are dropped
};

template <class Space, class Index>
struct MainTransformResult {
  Space space;               // kept nodes only, renumbered in input order
  std::vector<Index> kept;   // input index of each kept node
  double kappa = 0.0;        // input curvature bound
  double r = 0.0;            // input radius
  double A = 0.0;            // 0 when kappa <= 0
  double step_radius = 0.0;  // radius of the ball after step (i)
  std::size_t excluded = 0;  // nodes dropped at or beyond the collar
  std::vector<double> f;     // total log factor on kept nodes
  double claimed_kappa = -1.0;
};

using MainTransformGrid = MainTransformResult<GridDisc, std::size_t>;
using MainTransformGraph = MainTransformResult<MetricGraph, VertexId>;

/// Two-step construction on a grid disc about `center`: for kappa > 0, first
/// multiply by e^{A d^2}; then by e^{h(d^2/2)} on the open ball of the step
/// radius, excluding the collar. Distances are graph distances.
/// Throws RadiusTooLarge for kappa > 0 and r >= pi / (2 sqrt kappa).
MainTransformGrid main_transform(const GridDisc& g, double kappa, std::size_t center, double r,
                                 const MainTransformOptions& options = {});
MainTransformGraph main_transform(const MetricGraph& g, double kappa, VertexId center, double r,
                                  const MainTransformOptions& options = {});

}  // namespace catlab::conformal
