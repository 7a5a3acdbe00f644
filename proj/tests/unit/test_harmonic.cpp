#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "catlab/error.hpp"
#include "catlab/harmonic/disc_mesh.hpp"
#include "catlab/harmonic/harmonic.hpp"

using namespace catlab;
using namespace catlab::harmonic;

namespace {

const ModelSurface kPlane(0.0);

template <class F>
std::vector<ModelPoint> images_of(const DiscMesh& mesh, F f) {
  std::vector<ModelPoint> out;
  for (Vec2 z : mesh.vertices()) out.push_back(f(z));
  return out;
}

std::vector<ModelPoint> identity(const DiscMesh& mesh) {
  return images_of(mesh, [](Vec2 z) { return kPlane.from_plane(z.x, z.y); });
}

template <class P>
std::vector<P> trace_of(const DiscMesh& mesh, const std::vector<P>& images) {
  std::vector<P> t;
  for (auto v : mesh.boundary()) t.push_back(images[v]);
  return t;
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

// Brute-force energy minimization into the tripod: per-vertex scan of every
// leg on a fine grid followed by golden-section refinement.
std::vector<TreePoint> tripod_oracle(const DiscMesh& mesh, const TreeSpace& t, const std::vector<TreePoint>& start) {
  std::vector<TreePoint> u = start;
  auto local = [&](std::uint32_t v, TreePoint y) {
    double e = 0.0;
    for (const auto& nb : mesh.neighbors(v)) {
      const double d = t.distance(y, u[nb.vertex]);
      e += nb.weight * d * d;
    }
    return e;
  };
  for (int sweep = 0; sweep < 5000; ++sweep) {
    double moved = 0.0;
    for (auto v : mesh.interior_vertices()) {
      TreePoint best = u[v];
      double best_e = local(v, best);
      for (std::size_t leg = 0; leg < 3; ++leg) {
        const double len = t.edge(leg).length;
        for (int k = 0; k <= 400; ++k) {
          const TreePoint y{leg, len * k / 400.0};
          const double e = local(v, y);
          if (e < best_e) best_e = e, best = y;
        }
      }
      const double len = t.edge(best.edge).length;
      double lo = std::max(0.0, best.offset - len / 400.0), hi = std::min(len, best.offset + len / 400.0);
      const double g = 0.5 * (std::sqrt(5.0) - 1.0);
      for (int it = 0; it < 100; ++it) {
        const double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
        if (local(v, {best.edge, a}) <= local(v, {best.edge, b})) hi = b; else lo = a;
      }
      const TreePoint refined{best.edge, 0.5 * (lo + hi)};
      if (local(v, refined) < best_e) best = refined;
      moved = std::max(moved, t.distance(u[v], best));
      u[v] = best;
    }
    if (moved < 1e-13) break;
  }
  return u;
}

}  // namespace

TEST(DiscMesh, RingDiscShape) {
  const DiscMesh m = DiscMesh::ring_disc(40);
  EXPECT_EQ(m.vertex_count(), 4921u);
  EXPECT_EQ(m.boundary().size(), 240u);
  EXPECT_GT(m.min_weight(), 0.0);
  double sum = 0.0;
  for (std::uint32_t v = 0; v < m.vertex_count(); ++v) sum += m.area(v);
  EXPECT_NEAR(sum, m.total_area(), 1e-12);
  EXPECT_LT(m.total_area(), std::numbers::pi);
  EXPECT_GT(m.total_area(), 0.99 * std::numbers::pi);
}

TEST(DiscMesh, RejectsBadInput) {
  const std::vector<Vec2> v = {{0, 0}, {1, 0}, {0, 1}, {2, 0}};
  EXPECT_THROW(DiscMesh::from_parts(v, {{0, 1, 3}}, {0, 1, 3}), Error);  // collinear
  EXPECT_THROW(DiscMesh::from_parts({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}}, {0, 1}), Error);
}

TEST(DiscMesh, ReorientsClockwiseTriangles) {
  const DiscMesh m = DiscMesh::from_parts({{0, 0}, {1, 0}, {0, 1}}, {{0, 2, 1}}, {0, 1, 2});
  EXPECT_NEAR(m.triangle_area(0), 0.5, 1e-15);
  EXPECT_EQ(m.interior_vertices().size(), 0u);
}

TEST(DiscMesh, TextRoundTrip) {
  const DiscMesh m = DiscMesh::ring_disc(3);
  const std::string text = write_mesh(m);
  const DiscMesh back = read_mesh(text);
  EXPECT_EQ(back.vertex_count(), m.vertex_count());
  EXPECT_EQ(write_mesh(back), text);
  EXPECT_EQ(code_of([] { read_mesh("v 0 0\nv 1 0\nt 0 1 x\n"); }), ErrorCode::ParseError);
}

TEST(Energy, ConstantMapIsZero) {
  const DiscMesh m = DiscMesh::ring_disc(5);
  const auto map = make_map(m, kPlane, std::vector<ModelPoint>(m.vertex_count(), kPlane.from_plane(0.3, 0.1)));
  EXPECT_EQ(energy(map), 0.0);
}

TEST(Energy, IdentityCalibration) {
  const DiscMesh m = DiscMesh::ring_disc(40);
  const auto map = make_map(m, kPlane, identity(m));
  EXPECT_NEAR(energy(map), 2 * std::numbers::pi, 0.02 * 2 * std::numbers::pi);
  EXPECT_NEAR(energy(map), 2 * m.total_area(), 1e-12);
  const auto density = energy_density(map);
  double weighted = 0.0;
  for (std::uint32_t v = 0; v < m.vertex_count(); ++v) weighted += density[v] * m.area(v);
  EXPECT_NEAR(weighted, energy(map), 1e-12);
}

TEST(Energy, StretchMap) {
  const DiscMesh m = DiscMesh::ring_disc(40);
  const auto map = make_map(m, kPlane, images_of(m, [](Vec2 z) { return kPlane.from_plane(2 * z.x, z.y); }));
  EXPECT_NEAR(energy(map), 5 * std::numbers::pi, 0.02 * 5 * std::numbers::pi);
}

TEST(Solve, LinearTraceGivesLinearMap) {
  const DiscMesh m = DiscMesh::ring_disc(8);
  const auto exact = images_of(m, [](Vec2 z) { return kPlane.from_plane(0.5 * z.x - z.y + 0.2, 0.3 * z.x + 0.7 * z.y); });
  SolveOptions o;
  o.tol = 1e-14;
  const auto map = solve_harmonic<ModelSurface>(m, kPlane, trace_of(m, exact), o);
  EXPECT_TRUE(map.converged);
  for (std::size_t v = 0; v < exact.size(); ++v) EXPECT_LE(kPlane.distance(map.images[v], exact[v]), 1e-9);
}

TEST(Solve, RealLineHarmonicPolynomial) {
  const TreeSpace line = TreeSpace::segment(3.0);
  auto run = [&](int rings) {
    const DiscMesh m = DiscMesh::ring_disc(rings);
    std::vector<TreePoint> trace;
    double lo = 1e9, hi = -1e9;
    for (auto v : m.boundary()) {
      const Vec2 z = m.position(v);
      trace.push_back({0, z.x * z.x - z.y * z.y + 1.5});
      lo = std::min(lo, trace.back().offset);
      hi = std::max(hi, trace.back().offset);
    }
    SolveOptions o;
    o.tol = 1e-13;
    const auto map = solve_harmonic<TreeSpace>(m, line, trace, o);
    double err = 0.0;
    for (auto v : m.interior_vertices()) {
      const Vec2 z = m.position(v);
      EXPECT_GE(map.images[v].offset, lo);
      EXPECT_LE(map.images[v].offset, hi);
      err = std::max(err, std::abs(map.images[v].offset - (z.x * z.x - z.y * z.y + 1.5)));
    }
    return err;
  };
  const double coarse = run(6), fine = run(12);
  EXPECT_LT(coarse, 0.05);
  EXPECT_GT(coarse / fine, 3.0);
}

TEST(Solve, TripodMatchesBruteForce) {
  const TreeSpace t = TreeSpace::tripod(1, 1, 1);
  const DiscMesh m = DiscMesh::ring_disc(3);
  std::vector<TreePoint> trace;
  const auto cycle = m.boundary();
  for (std::size_t k = 0; k < cycle.size(); ++k) {
    const double th = 2 * std::numbers::pi * k / cycle.size();
    trace.push_back({th < std::numbers::pi ? std::size_t{0} : std::size_t{1}, 0.8 * std::abs(std::sin(th))});
  }
  SolveOptions o;
  o.tol = 1e-13;
  const auto map = solve_harmonic<TreeSpace>(m, t, trace, o);
  std::vector<TreePoint> start(m.vertex_count(), TreePoint{2, 0.5});
  for (std::size_t k = 0; k < cycle.size(); ++k) start[cycle[k]] = trace[k];
  const auto oracle = tripod_oracle(m, t, start);
  for (std::uint32_t v = 0; v < m.vertex_count(); ++v) EXPECT_LE(t.distance(map.images[v], oracle[v]), 1e-6) << v;
}

TEST(Solve, TraceInvariantAndEnergyMonotone) {
  const DiscMesh m = DiscMesh::ring_disc(6);
  const ModelSurface h(-1.0);
  std::vector<ModelPoint> trace;
  for (std::size_t k = 0; k < m.boundary().size(); ++k) {
    trace.push_back(h.polar(1.0 + 0.3 * std::sin(3.0 * k), 2 * std::numbers::pi * k / m.boundary().size()));
  }
  SolveOptions o;
  o.track_energy = true;
  const auto map = solve_harmonic<ModelSurface>(m, h, trace, o);
  for (std::size_t k = 0; k < trace.size(); ++k) EXPECT_EQ(map.images[m.boundary()[k]], trace[k]);
  EXPECT_LE(map.max_energy_increase, 1e-14);
}

TEST(Solve, Errors) {
  const DiscMesh m = DiscMesh::ring_disc(4);
  const ModelSurface sphere(1.0);
  // Alternating near the north and south poles: no ball of radius pi / 2 holds it.
  std::vector<ModelPoint> wide;
  for (std::size_t k = 0; k < m.boundary().size(); ++k) {
    wide.push_back(sphere.polar(k % 2 ? 0.2 : 2.9, 2 * std::numbers::pi * k / m.boundary().size()));
  }
  EXPECT_EQ(code_of([&] { solve_harmonic<ModelSurface>(m, sphere, wide); }), ErrorCode::BallTooLarge);
  SolveOptions o;
  o.max_sweeps = 1;
  const auto ident = identity(m);
  auto stretched = trace_of(m, ident);
  for (auto& p : stretched) p = kPlane.from_plane(p.x * p.x, p.y);
  EXPECT_EQ(code_of([&] { solve_harmonic<ModelSurface>(m, kPlane, stretched, o); }), ErrorCode::NoConvergence);
}

TEST(FrechetMean, SymmetricPoints) {
  const ModelSurface sphere(1.0);
  std::vector<ModelPoint> pts;
  for (int k = 0; k < 5; ++k) pts.push_back(sphere.polar(0.4, 2 * std::numbers::pi * k / 5));
  const std::vector<double> w(5, 1.0);
  EXPECT_LE(sphere.distance(frechet_mean(sphere, pts, w, pts[0]), sphere.origin()), 1e-10);
  const TreeSpace t = TreeSpace::tripod(1, 1, 1);
  const std::vector<TreePoint> tp = {{0, 0.6}, {1, 0.2}, {2, 0.2}};
  const std::vector<double> tw(3, 1.0);
  const TreePoint m = frechet_mean(t, tp, tw, tp[1]);
  EXPECT_EQ(m.edge, 0u);
  EXPECT_NEAR(m.offset, 0.2 / 3.0, 1e-12);
}

TEST(Fuglede, IdentityEqualityCase) {
  const DiscMesh m = DiscMesh::ring_disc(10);
  SolveOptions o;
  o.tol = 1e-12;
  const auto ident = identity(m);
  const auto map = solve_harmonic<ModelSurface>(m, kPlane, trace_of(m, ident), o, ident);
  const auto r = fuglede_check(map, flows::half_squared_distance(kPlane), 1e-9);
  EXPECT_TRUE(r.passed);
  EXPECT_LE(r.max_abs_margin, 1e-11);
  for (std::size_t k = 0; k < r.vertices.size(); ++k) {
    EXPECT_NEAR(r.laplacian[k], 2.0, 1e-11);
    EXPECT_NEAR(r.density[k], 2.0, 1e-11);
  }
}

TEST(Fuglede, ConstantMapBothSidesZero) {
  const DiscMesh m = DiscMesh::ring_disc(5);
  const std::vector<ModelPoint> trace(m.boundary().size(), kPlane.from_plane(0.4, -0.2));
  const auto map = solve_harmonic<ModelSurface>(m, kPlane, trace);
  const auto r = fuglede_check(map, flows::half_squared_distance(kPlane), 0.0);
  for (std::size_t k = 0; k < r.vertices.size(); ++k) {
    EXPECT_NEAR(r.laplacian[k], 0.0, 1e-12);
    EXPECT_NEAR(r.density[k], 0.0, 1e-12);
  }
  const auto c = constancy_check(map, flows::half_squared_distance(kPlane));
  EXPECT_TRUE(c.applicable);
  EXPECT_TRUE(c.passed);
}

TEST(Fuglede, RequiresSolvedMap) {
  const DiscMesh m = DiscMesh::ring_disc(4);
  const auto map = make_map(m, kPlane, identity(m));
  EXPECT_EQ(code_of([&] { fuglede_check(map, flows::half_squared_distance(kPlane), 0.0); }), ErrorCode::NotConverged);
  EXPECT_EQ(code_of([&] { constancy_check(map, flows::half_squared_distance(kPlane)); }), ErrorCode::NotConverged);
}

TEST(Fuglede, TripodMargin) {
  const TreeSpace t = TreeSpace::tripod(1, 1, 1);
  const DiscMesh m = DiscMesh::ring_disc(6);
  std::vector<TreePoint> trace;
  const auto cycle = m.boundary();
  for (std::size_t k = 0; k < cycle.size(); ++k) {
    const double th = 2 * std::numbers::pi * k / cycle.size();
    trace.push_back({th < std::numbers::pi ? std::size_t{0} : std::size_t{1}, 0.8 * std::abs(std::sin(th))});
  }
  SolveOptions o;
  o.tol = 1e-12;
  const auto map = solve_harmonic<TreeSpace>(m, t, trace, o);
  const auto r = fuglede_check(map, flows::squared_distance(t, t.node_point(0)), 1e-7);
  EXPECT_TRUE(r.passed) << r.min_margin;
}

TEST(Constancy, IdentityNotApplicable) {
  const DiscMesh m = DiscMesh::ring_disc(5);
  const auto ident = identity(m);
  const auto map = solve_harmonic<ModelSurface>(m, kPlane, trace_of(m, ident), {}, ident);
  EXPECT_FALSE(constancy_check(map, flows::half_squared_distance(kPlane)).applicable);
}

TEST(Plateau, PlanarCurves) {
  const DiscMesh m = DiscMesh::ring_disc(12);
  JordanBoundary circle, square;
  for (int k = 0; k < 256; ++k) {
    const double th = 2 * std::numbers::pi * k / 256;
    circle.points.push_back(kPlane.from_plane(std::cos(th), std::sin(th)));
  }
  square.points = {kPlane.from_plane(0.5, 0), kPlane.from_plane(0.5, 0.5), kPlane.from_plane(-0.5, 0.5),
                   kPlane.from_plane(-0.5, -0.5), kPlane.from_plane(0.5, -0.5)};
  const auto c = plateau_energy_bound(m, kPlane, circle);
  EXPECT_TRUE(c.passed);
  EXPECT_NEAR(c.energy, 2 * std::numbers::pi, 0.02 * 2 * std::numbers::pi);
  EXPECT_NEAR(c.bound, 4 * std::numbers::pi, 1e-3);
  const auto s = plateau_energy_bound(m, kPlane, square);
  EXPECT_NEAR(s.length, 4.0, 1e-15);
  EXPECT_LT(s.energy, 16 / std::numbers::pi);
  EXPECT_GT(s.margin, 0.0);
}

TEST(Plateau, HyperbolicAndSphericalTargets) {
  const DiscMesh m = DiscMesh::ring_disc(8);
  const ModelSurface sphere(1.0);
  JordanBoundary small;
  for (int k = 0; k < 64; ++k) small.points.push_back(sphere.polar(0.5, 2 * std::numbers::pi * k / 64));
  EXPECT_TRUE(plateau_energy_bound(m, sphere, small).passed);
  JordanBoundary equator;
  for (int k = 0; k < 64; ++k) equator.points.push_back(sphere.polar(std::numbers::pi / 2, 2 * std::numbers::pi * k / 64));
  EXPECT_EQ(code_of([&] { plateau_energy_bound(m, sphere, equator); }), ErrorCode::CurveTooLong);
}

TEST(FactorExtract, IdentityAndScaling) {
  const DiscMesh m = DiscMesh::ring_disc(10);
  const auto id = conformal_factor_extract(make_map(m, kPlane, identity(m)));
  for (double p : id.phi) EXPECT_NEAR(p, 1.0, 1e-12);
  EXPECT_LE(id.isotropy_defect, 1e-12);
  EXPECT_NEAR(id.area, m.total_area(), 1e-12);
  EXPECT_NEAR(id.area, 0.5 * id.energy, 1e-12);
  const auto twice = conformal_factor_extract(
      make_map(m, kPlane, images_of(m, [](Vec2 z) { return kPlane.from_plane(2 * z.x, 2 * z.y); })));
  for (double p : twice.phi) EXPECT_NEAR(p, 2.0, 1e-12);
  EXPECT_NEAR(twice.area, 4 * m.total_area(), 1e-11);
  EXPECT_NEAR(twice.energy, 8 * m.total_area(), 1e-11);
  const std::vector<Vec2> pts = {{0, 0}, {0.3, 0.2}};
  for (double p : factor_at_points(m, twice, pts)) EXPECT_NEAR(p, 2.0, 1e-12);
}

TEST(FactorExtract, StretchIsAnisotropic) {
  const DiscMesh m = DiscMesh::ring_disc(6);
  const auto fx = conformal_factor_extract(
      make_map(m, kPlane, images_of(m, [](Vec2 z) { return kPlane.from_plane(2 * z.x, z.y); })));
  EXPECT_NEAR(fx.isotropy_defect, 1.0 / 3.0, 1e-12);
  for (std::size_t t = 0; t < fx.s1.size(); ++t) {
    EXPECT_NEAR(fx.s1[t], 2.0, 1e-12);
    EXPECT_NEAR(fx.s2[t], 1.0, 1e-12);
  }
}
