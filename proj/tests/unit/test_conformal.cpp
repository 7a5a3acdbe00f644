#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "catlab/comparison.hpp"
#include "catlab/conformal.hpp"
#include "catlab/error.hpp"
#include "catlab/spaces/grid_disc.hpp"

using namespace catlab;
using namespace catlab::conformal;
using spaces::GridDisc;
using spaces::MetricGraph;

namespace {

GridDisc flat(double h, double r) {
  return GridDisc::sample(h, r, [](double, double) { return 1.0; });
}

GridDisc poincare(double h, double r) {
  return GridDisc::sample(h, r, [](double x, double y) { return 2.0 / (1.0 - x * x - y * y); });
}

template <class F>
std::vector<double> nodal(const GridDisc& g, F f) {
  std::vector<double> out(g.node_count());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const Vec2 z = g.position(k);
    out[k] = f(z.x, z.y);
  }
  return out;
}

// int_0^x e^{t^2/2} dt from its power series.
double exp_half_square_integral(double x) {
  double term = x, sum = 0.0;
  for (int n = 0; n < 60; ++n) {
    sum += term / (2 * n + 1);
    term *= x * x / (2.0 * (n + 1));
  }
  return sum;
}

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::InvalidArgument;
}

comparison::ComparisonReport certificate(double kappa, bool passed) {
  comparison::ComparisonReport r;
  r.kappa = kappa;
  r.max_defect = passed ? 0.0 : 1.0;
  r.budget = 0.5;
  return r;
}

}  // namespace

TEST(ConformalChange, ZeroIsIsometric) {
  const MetricGraph g = spaces::grid_to_graph(flat(0.1, 0.6));
  const std::vector<double> f(g.vertex_count(), 0.0);
  const MetricGraph h = conformal_change(g, f, 0.0, 0.0);
  for (std::size_t k = 0; k < g.edge_count(); ++k) EXPECT_EQ(h.edges()[k].weight, g.edges()[k].weight);
}

TEST(ConformalChange, LogTwoDoubles) {
  const MetricGraph g = spaces::grid_to_graph(flat(0.1, 0.6));
  const std::vector<double> f(g.vertex_count(), std::log(2.0));
  const MetricGraph h = conformal_change(g, f, std::log(2.0), std::log(2.0));
  EXPECT_NEAR(h.distance(0, 20), 2.0 * g.distance(0, 20), 1e-14);
}

TEST(ConformalChange, UnboundedFactor) {
  const GridDisc g = flat(0.1, 0.6);
  const std::vector<double> f(g.node_count(), 1.0);
  EXPECT_EQ(code_of([&] { conformal_change(g, f, 0.0, 0.5); }), ErrorCode::UnboundedFactor);
  const MetricGraph graph = spaces::grid_to_graph(g);
  EXPECT_EQ(code_of([&] { conformal_change(graph, f, -1.0, 0.5); }), ErrorCode::UnboundedFactor);
}

TEST(ConformalChange, BilipschitzSandwich) {
  const GridDisc g = flat(0.05, 1.0);
  const auto f = nodal(g, [](double x, double y) { return std::sin(3 * x) * std::cos(2 * y); });
  const MetricGraph base = spaces::grid_to_graph(g);
  const MetricGraph changed = conformal_change(base, f, -1.0, 1.0);
  const auto r = bilipschitz_check(base, changed, -1.0, 1.0, 200, 4);
  EXPECT_TRUE(r.passed);
  EXPECT_GE(r.min_ratio, std::exp(-1.0));
  EXPECT_LE(r.max_ratio, std::exp(1.0));
}

TEST(ConformalChange, GridCompositionMultiplies) {
  const GridDisc g = poincare(0.05, 0.7);
  const auto f1 = nodal(g, [](double x, double) { return 0.3 * x; });
  const auto f2 = nodal(g, [](double, double y) { return 0.2 * y * y; });
  std::vector<double> sum(f1.size());
  for (std::size_t k = 0; k < sum.size(); ++k) sum[k] = f1[k] + f2[k];
  const GridDisc twice = conformal_change(conformal_change(g, f1, -1, 1), f2, -1, 1);
  const GridDisc once = conformal_change(g, sum, -1, 1);
  for (std::size_t k = 0; k < g.node_count(); ++k) EXPECT_NEAR(twice.factor()[k], once.factor()[k], 4e-16 * once.factor()[k]);
}

TEST(ConformalChange, FlatGridRadialDistance) {
  const GridDisc g = flat(0.02, 1.0);
  const auto f = nodal(g, [](double x, double y) { return 0.5 * (x * x + y * y); });
  const MetricGraph changed = conformal_change(spaces::grid_to_graph(g), f, 0.0, 0.5);
  const auto o = static_cast<spaces::VertexId>(g.nearest(0, 0)), q = static_cast<spaces::VertexId>(g.nearest(0.9, 0));
  const double d = changed.distance(o, q);
  const double oracle = exp_half_square_integral(0.9);
  EXPECT_NEAR(oracle, 1.0378057293327694, 1e-12);
  EXPECT_LE(std::abs(d - oracle), spaces::kOctileAnisotropy * oracle + 2 * 0.02 * std::exp(0.405));
}

TEST(ConformalChange, RadialConsistencyOffAxis) {
  const GridDisc g = flat(0.02, 1.0);
  const auto f = nodal(g, [](double x, double y) { return std::log(1.0 + x * x + y * y); });
  const MetricGraph changed = conformal_change(spaces::grid_to_graph(g), f, 0.0, std::log(2.0));
  const auto o = static_cast<spaces::VertexId>(g.nearest(0, 0));
  for (auto [x, y] : {std::pair{0.6, 0.0}, std::pair{0.42, 0.42}, std::pair{-0.3, 0.5}}) {
    const auto q = g.nearest(x, y);
    const double s = norm(g.position(q));
    const double oracle = s + s * s * s / 3.0;
    const double d = changed.distance(o, static_cast<spaces::VertexId>(q));
    EXPECT_LE(std::abs(d - oracle), spaces::kOctileAnisotropy * oracle + 2 * 0.02 * (1 + s * s));
  }
}

TEST(RadialDistance, Examples) {
  EXPECT_NEAR(radial_distance({[](double) { return 1.0; }, 1.0}, 0.7), 0.7, 1e-10);
  EXPECT_NEAR(radial_distance({[](double t) { return std::exp(t); }, 2.0}, 1.0), std::numbers::e - 1.0, 1e-10);
  EXPECT_NEAR(radial_distance({[](double t) { return 2.0 / (1.0 - t * t); }, 1.0}, 0.5), std::log(3.0), 1e-10);
  EXPECT_EQ(code_of([] { radial_distance({[](double) { return 1.0; }, 1.0}, 1.0); }), ErrorCode::OutOfDomain);
  EXPECT_EQ(code_of([] { radial_distance({[](double) { return 1.0; }, 1.0}, -0.1); }), ErrorCode::OutOfDomain);
}

TEST(KappaBar, Formulas) {
  EXPECT_EQ(kappa_bar(0, 0, 0, 1), -4.0);
  EXPECT_EQ(kappa_bar(0, 0, 4, 1), 0.0);
  EXPECT_EQ(code_of([] { kappa_bar(0, 1, 2, 0); }), ErrorCode::OnlyLocalBound);
  EXPECT_DOUBLE_EQ(kappa_bar(0.5, 1, -1, 0), std::exp(-2.0) * -1.0);
  EXPECT_DOUBLE_EQ(kappa_bar(0.5, 1, 5, 1), std::exp(-1.0) * 1.0);
  EXPECT_THROW(kappa_bar(1, 0, 0, 0), Error);
}

TEST(KappaBar, Monotone) {
  for (double c : {-0.5, 0.0}) {
    for (double C : {0.0, 0.7}) {
      for (double kappa = -3; kappa <= 3; kappa += 0.5) {
        for (double lambda = 0.25; lambda <= 2; lambda += 0.25) {
          EXPECT_LE(kappa_bar(c, C, kappa, lambda + 0.25), kappa_bar(c, C, kappa, lambda));
          EXPECT_LE(kappa_bar(c, C, kappa, lambda), kappa_bar(c, C, kappa + 0.5, lambda));
        }
      }
    }
  }
}

TEST(KappaBarProduct, Formulas) {
  EXPECT_DOUBLE_EQ(kappa_bar_product(0.3, 0.3, 1.5, 0), std::exp(-0.6) * 1.5);
  EXPECT_DOUBLE_EQ(kappa_bar_product(0, 0.25, 0, 1), -2 * std::exp(-0.5));
  EXPECT_NEAR(kappa_bar_product(0, 0.25, 0, 1), -1.2131, 1e-4);
  EXPECT_EQ(kappa_bar_product(0, 1, 2, 1), 0.0);
}

TEST(Curvature, FlatFactor) {
  const GridDisc g = flat(0.1, 0.8);
  const auto est = log_subharmonic_residual(g, 0.6);
  ASSERT_FALSE(est.nodes.empty());
  for (std::size_t k = 0; k < est.nodes.size(); ++k) {
    EXPECT_EQ(est.curvature[k], 0.0);
    EXPECT_DOUBLE_EQ(est.residual[k], 0.3);
  }
}

TEST(Curvature, HyperbolicFactor) {
  const GridDisc g = poincare(0.01, 0.8);
  const auto est = log_subharmonic_residual(g, -1.0);
  double worst = 0.0;
  for (double K : est.curvature) worst = std::max(worst, std::abs(K + 1.0));
  EXPECT_LE(worst, 1e-3);
  EXPECT_EQ(est.stencil, "5-point");
}

TEST(Curvature, GaussianFactorExact) {
  // Delta log phi = 1 everywhere, and the 5-point stencil is exact on quadratics.
  const GridDisc g = GridDisc::sample(0.05, 0.9, [](double x, double y) { return std::exp(0.25 * (x * x + y * y)); });
  const auto est = log_subharmonic_residual(g, 0.0);
  for (std::size_t k = 0; k < est.nodes.size(); ++k) {
    const Vec2 z = g.position(est.nodes[k]);
    EXPECT_NEAR(est.curvature[k], -std::exp(-0.5 * (z.x * z.x + z.y * z.y)), 1e-10);
  }
  const std::size_t origin = g.nearest(0, 0);
  const auto it = std::find(est.nodes.begin(), est.nodes.end(), origin);
  ASSERT_NE(it, est.nodes.end());
  EXPECT_NEAR(est.curvature[static_cast<std::size_t>(it - est.nodes.begin())], -1.0, 1e-10);
}

TEST(Curvature, SecondOrderRichardson) {
  auto error_at = [](double h) {
    const GridDisc g = poincare(h, 0.8);
    const auto est = log_subharmonic_residual(g, -1.0);
    const std::size_t node = g.nearest(0.4, 0.2);
    const auto it = std::find(est.nodes.begin(), est.nodes.end(), node);
    return std::abs(est.curvature[static_cast<std::size_t>(it - est.nodes.begin())] + 1.0);
  };
  const double ratio = error_at(0.04) / error_at(0.02);
  EXPECT_GT(ratio, 3.5);
  EXPECT_LT(ratio, 4.5);
}

TEST(DoubleChange, TrivialPsi) {
  const GridDisc g = poincare(0.05, 0.7);
  const std::vector<double> psi(g.node_count(), 0.0);
  const auto r = double_change(g, psi, 0.0, 0.0, 0.0, -2.0);
  EXPECT_EQ(r.kappa_bar, -2.0);
  for (std::size_t k = 0; k < g.node_count(); ++k) EXPECT_EQ(r.disc.factor()[k], g.factor()[k]);
}

TEST(DoubleChange, QuadraticPsi) {
  const GridDisc g = flat(0.05, 1.0);
  const auto psi = nodal(g, [](double x, double y) { return 0.25 * (x * x + y * y); });
  const auto r = double_change(g, psi, 0.5, 0.0, 0.3, 0.0);
  EXPECT_DOUBLE_EQ(r.kappa_bar, -std::exp(-0.6));
  EXPECT_NEAR(r.min_margin, 0.5, 1e-9);
}

TEST(DoubleChange, AreaGuard) {
  const GridDisc g = flat(0.05, 1.0);
  const std::vector<double> psi(g.node_count(), 0.0);
  EXPECT_EQ(code_of([&] { double_change(g, psi, 0.0, 0.0, 0.0, 2 * std::numbers::pi); }),
            ErrorCode::HypothesisViolated);
}

TEST(DoubleChange, LaplacianGuardNamesNode) {
  const GridDisc g = flat(0.05, 1.0);
  const auto psi = nodal(g, [](double x, double y) { return -0.25 * (x * x + y * y); });
  try {
    double_change(g, psi, 0.5, -0.3, 0.0, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::HypothesisViolated);
    EXPECT_NE(std::string(e.what()).find("node"), std::string::npos) << e.what();
  }
  const auto big = nodal(g, [](double, double) { return 2.0; });
  EXPECT_EQ(code_of([&] { double_change(g, big, 0.0, 0.0, 1.0, 0.0); }), ErrorCode::UnboundedFactor);
}

TEST(Nonpos, RadiusFromIntegral) {
  const double R = exp_half_square_integral(0.9);
  EXPECT_NEAR(nonpos_radius(R), 0.9, 1e-9);
  EXPECT_NEAR(nonpos_kappa(R), -4 * std::exp(-0.81), 1e-8);
  EXPECT_NEAR(nonpos_kappa(1e-9), -4.0, 1e-12);
  for (double r : {0.1, 0.5, 1.3, 2.0}) EXPECT_NEAR(nonpos_radius(exp_half_square_integral(r)), r, 1e-9);
}

TEST(Nonpos, CertificateRequired) {
  const MetricGraph g = spaces::grid_to_graph(flat(0.1, 0.6));
  EXPECT_EQ(code_of([&] { nonpos_transform(g, nullptr, 0, 1.0); }), ErrorCode::BaseNotCAT0);
  const auto positive = certificate(0.5, true);
  EXPECT_EQ(code_of([&] { nonpos_transform(g, &positive, 0, 1.0); }), ErrorCode::BaseNotCAT0);
  const auto failed = certificate(0.0, false);
  EXPECT_EQ(code_of([&] { nonpos_transform(g, &failed, 0, 1.0); }), ErrorCode::BaseNotCAT0);
}

TEST(Nonpos, TransformFactor) {
  const GridDisc grid = flat(0.05, 0.8);
  const auto ok = certificate(0.0, true);
  const std::size_t c = grid.nearest(0, 0);
  const auto out = nonpos_transform(grid, &ok, c, 1.0);
  const MetricGraph base = spaces::grid_to_graph(grid);
  const auto tree = base.shortest_paths(static_cast<spaces::VertexId>(c));
  for (std::size_t k = 0; k < grid.node_count(); k += 7) {
    const double d = tree.distance(static_cast<spaces::VertexId>(k));
    EXPECT_NEAR(out.f[k], 0.5 * d * d, 1e-14);
    EXPECT_NEAR(out.disc.factor()[k], std::exp(0.5 * d * d), 1e-13);
  }
  EXPECT_NEAR(out.kappa, -4 * std::exp(-out.r * out.r), 1e-15);
}

TEST(MainTransform, RadialDistance) {
  EXPECT_NEAR(main_radial_distance(1.0, 0.5), std::log(3.0), 1e-9);
  EXPECT_NEAR(main_radial_distance(1.0, 0.99), std::log(199.0), 1e-8);
  EXPECT_GE(main_radial_distance(1.0, 0.99), 5.0);
  EXPECT_NEAR(main_radial_distance_exact(2.0, 1.0), 0.5 * std::log(3.0), 1e-15);
  EXPECT_EQ(code_of([] { main_radial_distance(1.0, 1.0); }), ErrorCode::OutOfDomain);
  // The variant stays bounded at the rim.
  EXPECT_LT(main_radial_distance_variant(1.0, 0.999999), 2.0);
}

TEST(MainTransform, LogFactor) {
  EXPECT_DOUBLE_EQ(main_log_factor(1.0, 0.0), 2.0);
  EXPECT_DOUBLE_EQ(main_log_factor(1.0, 0.5), 2.0 / 0.75);
  EXPECT_EQ(code_of([] { main_log_factor(1.0, 1.0); }), ErrorCode::NodeOnBoundary);
}

TEST(MainTransform, FindA) {
  EXPECT_GE(find_A(0.1, 1.0), 0.45);
  const double A = find_A(std::numbers::pi / 4, 1.0);
  EXPECT_GT(A, 0.0);
  // Certified on fresh samples: normalized margin at least (1/8)(1 - 0.1).
  EXPECT_GE(sphere_midpoint_margin(A, std::numbers::pi / 4, 1.0, 10000, 99), 0.125 * 0.9);
  EXPECT_EQ(code_of([] { find_A(1.6, 1.0); }), ErrorCode::RadiusTooLarge);
}

TEST(MainTransform, FlatGrid) {
  const GridDisc g = flat(0.05, 1.0);
  MainTransformOptions o;
  o.collar = 0.05;
  const auto out = main_transform(g, 0.0, g.nearest(0, 0), 1.0, o);
  EXPECT_EQ(out.claimed_kappa, -1.0);
  EXPECT_EQ(out.A, 0.0);
  EXPECT_EQ(out.kept.size() + out.excluded, g.node_count());
  EXPECT_DOUBLE_EQ(out.space.factor()[0] / g.factor()[out.kept[0]], std::exp(out.f[0]));
  const std::size_t c = std::find(out.kept.begin(), out.kept.end(), g.nearest(0, 0)) - out.kept.begin();
  EXPECT_DOUBLE_EQ(out.space.factor()[c], 2.0);
}

TEST(MainTransform, PositiveCurvatureStep) {
  const GridDisc g = flat(0.05, 1.0);
  MainTransformOptions o;
  o.collar = 0.05;
  const auto out = main_transform(g, 1.0, g.nearest(0, 0), 0.8, o);
  EXPECT_GT(out.A, 0.0);
  EXPECT_GT(out.step_radius, 0.8);
  EXPECT_EQ(code_of([&] { main_transform(g, 1.0, g.nearest(0, 0), 1.6, o); }), ErrorCode::RadiusTooLarge);
}
