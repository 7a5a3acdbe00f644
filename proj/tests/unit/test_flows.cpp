#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "catlab/error.hpp"
#include "catlab/flows.hpp"
#include "catlab/spaces/metric_graph.hpp"

using namespace catlab;
using namespace catlab::flows;
using spaces::GraphPoint;
using spaces::MetricGraph;
using spaces::ModelPoint;
using spaces::ModelSurface;
using spaces::TreePoint;
using spaces::TreeSpace;

namespace {

const ModelSurface kPlane(0.0);

ConvexFunctionHandle<ModelSurface> constant_on_plane() {
  ConvexFunctionHandle<ModelSurface> f;
  f.space = &kPlane;
  f.value = [](const ModelPoint&) { return 3.0; };
  f.lambda = 0.0;
  f.lipschitz = 0.0;
  f.name = "constant";
  return f;
}

MetricGraph path_graph(int n, double w) {
  MetricGraph::Builder b;
  for (int i = 0; i < n; ++i) b.add_vertex();
  for (int i = 1; i < n; ++i) b.add_edge(i - 1, i, w);
  return std::move(b).build();
}

}  // namespace

TEST(Certify, HalfSquareIsOneConvex) {
  const auto f = half_squared_distance(kPlane);
  EXPECT_EQ(f.lambda, 1.0);
  const auto r = certify_lambda_convex(f, 2000, 1);
  EXPECT_TRUE(r.passed());
  EXPECT_LE(std::abs(r.worst_defect), 1e-12);
}

TEST(Certify, OverclaimFails) {
  auto f = half_squared_distance(kPlane);
  f.lambda = 2.5;
  const auto r = certify_lambda_convex(f, 500, 1);
  EXPECT_FALSE(r.convex);
  EXPECT_GT(r.worst_defect, r.worst_tolerance);
}

TEST(Certify, HyperbolicHalfSquare) {
  const ModelSurface h(-1.0);
  EXPECT_TRUE(certify_lambda_convex(half_squared_distance(h), 2000, 2).passed());
}

TEST(Certify, TripodDistanceIsConvex) {
  const TreeSpace t = TreeSpace::tripod(1, 1, 1);
  const auto f = distance_function(t, t.node_point(1));
  EXPECT_EQ(f.lambda, 0.0);
  EXPECT_TRUE(certify_lambda_convex(f, 2000, 3).passed());
  const auto g = squared_distance(t, t.node_point(0));
  EXPECT_EQ(g.lambda, 2.0);
  EXPECT_TRUE(certify_lambda_convex(g, 2000, 3).passed());
}

TEST(Slope, HalfSquare) {
  const auto s = descending_slope(half_squared_distance(kPlane), kPlane.from_plane(1, 0), 1e-3);
  EXPECT_NEAR(s.value, 1.0, 1e-3);
  EXPECT_EQ(s.probes, 16u);
}

TEST(Slope, ConstantIsFlat) {
  EXPECT_EQ(descending_slope(constant_on_plane(), kPlane.from_plane(0.3, 0.2), 1e-2).value, 0.0);
}

TEST(Slope, TripodBranchPoint) {
  const TreeSpace t = TreeSpace::tripod(1, 1, 1);
  const auto f = distance_function(t, t.node_point(1));
  const auto s = descending_slope(f, t.node_point(0), 1e-3);
  EXPECT_NEAR(s.value, 1.0, 1e-10);
  EXPECT_LE(s.value, f.lipschitz + 1e-10);
}

TEST(Slope, BoundedByLipschitz) {
  const TreeSpace t = TreeSpace::tripod(1, 2, 0.5);
  const auto f = squared_distance(t, TreePoint{1, 0.5});
  SplitMix64 rng(4);
  for (int k = 0; k < 200; ++k) EXPECT_LE(descending_slope(f, t.sample(rng), 1e-3).value, f.lipschitz);
}

TEST(Flow, LinearContraction) {
  const auto f = half_squared_distance(kPlane);
  const auto traj = flow(f, kPlane.from_plane(1, 0), 1.0, 1e-3);
  EXPECT_EQ(traj.points.size(), 1001u);
  const ModelPoint end = traj.end();
  EXPECT_LE(std::hypot(end.x - std::exp(-1.0), end.y), 1e-3);
  EXPECT_NEAR(end.x, std::pow(1.0 + 1e-3, -1000), 1e-13);
  for (std::size_t k = 1; k < traj.values.size(); ++k) EXPECT_LE(traj.values[k], traj.values[k - 1]);
  EXPECT_LE(traj.max_dissipation_excess, 1e-12);
}

TEST(Flow, TripodMovesAtUnitSpeed) {
  const TreeSpace t = TreeSpace::tripod(1, 1, 1);
  const auto f = distance_function(t, t.node_point(1));
  const TreePoint x0{1, 0.5};
  const auto half = flow(f, x0, 0.75, 1e-2);
  EXPECT_NEAR(t.distance(half.end(), TreePoint{0, 0.25}), 0.0, 1e-6);
  const auto done = flow(f, x0, 2.0, 1e-2);
  EXPECT_NEAR(t.distance(done.end(), t.node_point(1)), 0.0, 1e-6);
  for (std::size_t k = 1; k < done.values.size(); ++k) EXPECT_LE(done.values[k], done.values[k - 1] + 1e-12);
}

TEST(Flow, ConstantIsStationary) {
  const ModelPoint x0 = kPlane.from_plane(0.3, -0.4);
  const auto traj = flow(constant_on_plane(), x0, 0.5, 1e-2);
  for (const auto& p : traj.points) EXPECT_LE(kPlane.distance(p, x0), 1e-9);
}

TEST(Flow, GraphDistanceFlow) {
  const MetricGraph g = path_graph(6, 0.5);
  const auto f = distance_function(g, 0);
  const auto traj = flow(f, GraphPoint::at(5), 1.0, 1e-2);
  EXPECT_NEAR(g.distance(traj.end(), GraphPoint::at(0)), 1.5, 1e-6);
}

TEST(Flow, StepSizeConvergence) {
  const ModelSurface h(-1.0);
  const auto f = half_squared_distance(h);
  const ModelPoint x0 = h.polar(1.2, 0.3);
  const ModelPoint a = flow(f, x0, 1.0, 4e-3).end(), b = flow(f, x0, 1.0, 2e-3).end(), c = flow(f, x0, 1.0, 1e-3).end();
  const double ratio = h.distance(a, b) / h.distance(b, c);
  EXPECT_LE(ratio, 2.5);
  EXPECT_GT(ratio, 1.5);
}

TEST(Contraction, PlaneRatios) {
  const auto f = half_squared_distance(kPlane);
  const ModelPoint x0 = kPlane.from_plane(1, 0), y0 = kPlane.from_plane(0, 0.5);
  const auto one = contraction_check(f, x0, y0, 1.0, 1e-3);
  EXPECT_NEAR(one.ratio, std::exp(-1.0), 1e-3);
  EXPECT_TRUE(one.passed);
  const auto two = contraction_check(f, x0, y0, 2.0, 1e-3);
  EXPECT_NEAR(two.ratio, std::exp(-2.0), 2e-3);
  EXPECT_TRUE(two.passed);
}

TEST(Contraction, TripodNonExpansive) {
  const TreeSpace t = TreeSpace::tripod(1, 1, 1);
  const auto f = distance_function(t, t.node_point(1));
  SplitMix64 rng(6);
  for (int k = 0; k < 5; ++k) {
    const auto r = contraction_check(f, t.sample(rng), t.sample(rng), 1.0, 1e-2);
    EXPECT_LE(r.ratio, 1.0 + 1e-6);
  }
}

TEST(Variation, RhoZeroIsExact) {
  const auto f = half_squared_distance(kPlane);
  const auto r = variation_velocity_check<ModelSurface>(
      f, [](double s) { return kPlane.from_plane(s, 0.5 * s); }, [](double) { return 0.0; }, {0.2, 0.5, 0.8});
  for (double v : r.residual) EXPECT_EQ(v, 0.0);
  EXPECT_TRUE(r.passed);
}

TEST(Variation, ClosedFormExample) {
  // eta(s) = e^{-s} (s, 0): |eta'|^2 = e^{-2s} (1 - s)^2 and the bound is
  // e^{-2s} (1 - 2 s + s^2), so the inequality holds with equality.
  const auto f = half_squared_distance(kPlane);
  std::vector<double> grid;
  for (int k = 1; k <= 9; ++k) grid.push_back(0.1 * k);
  const auto r = variation_velocity_check<ModelSurface>(
      f, [](double s) { return kPlane.from_plane(s, 0.0); }, [](double s) { return s; }, grid);
  EXPECT_TRUE(r.passed);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double s = grid[k];
    EXPECT_NEAR(r.lhs[k], std::exp(-2 * s) * (1 - s) * (1 - s), 2e-3);
    EXPECT_NEAR(r.rhs[k], std::exp(-2 * s) * (1 - s) * (1 - s), 2e-3);
  }
}

TEST(Variation, ConstantRhoMatchesContraction) {
  const auto f = half_squared_distance(kPlane);
  const double t0 = 0.7;
  const auto r = variation_velocity_check<ModelSurface>(
      f, [](double s) { return kPlane.from_plane(std::cos(s), std::sin(s)); }, [t0](double) { return t0; },
      {0.3, 1.0, 2.0});
  for (std::size_t k = 0; k < r.s.size(); ++k) {
    EXPECT_NEAR(r.lhs[k], std::exp(-2 * t0), 2e-3);
    EXPECT_NEAR(r.residual[k], 0.0, 2e-3);
  }
}

TEST(Variation, RejectsNegativeRho) {
  const auto f = half_squared_distance(kPlane);
  EXPECT_THROW(variation_velocity_check<ModelSurface>(
                   f, [](double s) { return kPlane.from_plane(s, 0.0); }, [](double) { return -1.0; }, {0.5}),
               Error);
}
