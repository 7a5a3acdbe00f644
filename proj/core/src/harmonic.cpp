#include "catlab/harmonic/harmonic.hpp"

#include <cmath>

#include "catlab/format.hpp"

namespace catlab::harmonic {

ModelPoint frechet_mean(const ModelSurface& s, std::span<const ModelPoint> points, std::span<const double> weights,
                        const ModelPoint& start) {
  if (points.empty() || points.size() != weights.size()) raise(ErrorCode::InvalidArgument, "bad Frechet mean input");
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) raise(ErrorCode::InvalidArgument, "weights must have positive sum");
  if (s.kappa() == 0.0) {
    double x = 0.0, y = 0.0;
    for (std::size_t k = 0; k < points.size(); ++k) {
      x += weights[k] * points[k].x;
      y += weights[k] * points[k].y;
    }
    return {x / total, y / total, 0.0};
  }
  ModelPoint y = start;
  for (int it = 0; it < 200; ++it) {
    double a = 0.0, b = 0.0;
    for (std::size_t k = 0; k < points.size(); ++k) {
      const Vec2 v = s.log(y, points[k]);
      a += weights[k] * v.x;
      b += weights[k] * v.y;
    }
    a /= total;
    b /= total;
    y = s.project(s.exp(y, a, b));
    if (std::hypot(a, b) <= 1e-12) return y;
  }
  raise(ErrorCode::NoConvergence, "intrinsic mean iteration did not converge");
}

TreePoint frechet_mean(const TreeSpace& s, std::span<const TreePoint> points, std::span<const double> weights,
                       const TreePoint& start) {
  if (points.empty() || points.size() != weights.size()) raise(ErrorCode::InvalidArgument, "bad Frechet mean input");
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) raise(ErrorCode::InvalidArgument, "weights must have positive sum");
  TreePoint best = start;
  double best_value = std::numeric_limits<double>::infinity();
  std::vector<double> centers(points.size());
  for (std::size_t e = 0; e < s.edge_count(); ++e) {
    const auto& edge = s.edge(e);
    // On edge e, d(y(t), p) = |t - c| for a fixed c, so the objective is a
    // quadratic in the offset t.
    const TreePoint a{e, 0.0}, b{e, edge.length};
    double wc = 0.0;
    for (std::size_t k = 0; k < points.size(); ++k) {
      const TreePoint& p = points[k];
      if (p.edge == e) {
        centers[k] = p.offset;
      } else {
        const double da = s.distance(a, p), db = s.distance(b, p);
        centers[k] = da < db ? -da : edge.length + db;
      }
      wc += weights[k] * centers[k];
    }
    const double t = std::clamp(wc / total, 0.0, edge.length);
    double value = 0.0;
    for (std::size_t k = 0; k < points.size(); ++k) value += weights[k] * (t - centers[k]) * (t - centers[k]);
    if (value < best_value) {
      best_value = value;
      best = {e, t};
    }
  }
  return best;
}

double JordanBoundary::length(const ModelSurface& s) const {
  if (points.size() < 3) raise(ErrorCode::InvalidArgument, "boundary curve needs at least three points");
  double l = 0.0;
  for (std::size_t k = 0; k < points.size(); ++k) l += s.distance(points[k], points[(k + 1) % points.size()]);
  return l;
}

ModelPoint JordanBoundary::at(const ModelSurface& s, double t) const {
  const double l = length(s);
  t = std::fmod(t, l);
  if (t < 0.0) t += l;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const ModelPoint& p = points[k];
    const ModelPoint& q = points[(k + 1) % points.size()];
    const double seg = s.distance(p, q);
    if (t <= seg) return seg > 0.0 ? s.geodesic_point(p, q, t / seg) : p;
    t -= seg;
  }
  return points.front();
}

PlateauReport plateau_energy_bound(const DiscMesh& mesh, const ModelSurface& target, const JordanBoundary& boundary,
                                   const SolveOptions& options) {
  PlateauReport out;
  out.length = boundary.length(target);
  if (target.kappa() > 0.0 && out.length >= 2.0 * std::numbers::pi / std::sqrt(target.kappa())) {
    raise(ErrorCode::CurveTooLong, "curve length " + format_double(out.length) + " >= 2 pi / sqrt(kappa)");
  }
  // Boundary vertices are spread along the curve by arc length, starting at
  // points[0], in the order of the boundary cycle.
  const auto cycle = mesh.boundary();
  std::vector<ModelPoint> trace;
  trace.reserve(cycle.size());
  for (std::size_t k = 0; k < cycle.size(); ++k) {
    trace.push_back(boundary.at(target, out.length * static_cast<double>(k) / static_cast<double>(cycle.size())));
  }
  // Initial guess: radial blend from the trace mean towards the curve, using
  // the angular position of each vertex.
  const std::vector<double> ones(trace.size(), 1.0);
  const ModelPoint c = frechet_mean(target, trace, ones, trace.front());
  const double first_angle = std::atan2(mesh.position(cycle[0]).y, mesh.position(cycle[0]).x);
  std::vector<ModelPoint> initial(mesh.vertex_count(), c);
  for (std::uint32_t v : mesh.interior_vertices()) {
    const Vec2 z = mesh.position(v);
    const double rho = std::min(1.0, norm(z));
    if (rho == 0.0) continue;
    double th = std::atan2(z.y, z.x) - first_angle;
    th = std::fmod(th + 4.0 * std::numbers::pi, 2.0 * std::numbers::pi);
    const Vec2 tangent = target.log(c, boundary.at(target, out.length * th / (2.0 * std::numbers::pi)));
    initial[v] = target.exp(c, rho * tangent.x, rho * tangent.y);
  }
  out.map = solve_harmonic<ModelSurface>(mesh, target, trace, options, std::move(initial));
  out.energy = energy(out.map);
  out.bound = out.length * out.length / std::numbers::pi;
  out.margin = out.bound - out.energy;
  out.passed = out.margin > 0.0;
  return out;
}

FactorExtraction conformal_factor_extract(const MeshMap<ModelSurface>& m) {
  FactorExtraction out;
  const DiscMesh& mesh = *m.mesh;
  const std::size_t nt = mesh.triangles().size();
  out.s1.reserve(nt);
  out.s2.reserve(nt);
  out.phi.reserve(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles()[t];
    const std::array<std::array<std::uint32_t, 2>, 3> sides = {{{tri[0], tri[1]}, {tri[0], tri[2]}, {tri[1], tri[2]}}};
    // Rows: (ex^2, 2 ex ey, ey^2) . (g11, g12, g22) = d^2.
    double M[3][3], rhs[3];
    for (int k = 0; k < 3; ++k) {
      const auto [i, j] = sides[static_cast<std::size_t>(k)];
      const Vec2 e = mesh.position(j) - mesh.position(i);
      const double d = m.target->distance(m.images[i], m.images[j]);
      M[k][0] = e.x * e.x;
      M[k][1] = 2.0 * e.x * e.y;
      M[k][2] = e.y * e.y;
      rhs[k] = d * d;
    }
    auto det3 = [](const double A[3][3]) {
      return A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1]) - A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0]) +
             A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]);
    };
    const double D = det3(M);
    double g[3];
    for (int c = 0; c < 3; ++c) {
      double Mc[3][3];
      for (int r = 0; r < 3; ++r) {
        for (int k = 0; k < 3; ++k) Mc[r][k] = k == c ? rhs[r] : M[r][k];
      }
      g[c] = det3(Mc) / D;
    }
    const double tr = g[0] + g[2];
    const double det = g[0] * g[2] - g[1] * g[1];
    const double disc = std::hypot(0.5 * (g[0] - g[2]), g[1]);
    const double l1 = 0.5 * tr + disc, l2 = 0.5 * tr - disc;
    const double s1 = std::sqrt(std::max(0.0, l1)), s2 = std::sqrt(std::max(0.0, l2));
    if (!(det > 0.0)) ++out.degenerate;
    const double area = mesh.triangle_area(t);
    out.s1.push_back(s1);
    out.s2.push_back(s2);
    out.phi.push_back(std::sqrt(s1 * s2));
    out.area += area * s1 * s2;
    out.energy += area * tr;
    if (s1 + s2 > 0.0) out.isotropy_defect = std::max(out.isotropy_defect, (s1 - s2) / (s1 + s2));
  }
  out.relative_error = out.energy > 0.0 ? std::abs(out.area - 0.5 * out.energy) / (0.5 * out.energy) : 0.0;
  return out;
}

std::vector<double> factor_at_points(const DiscMesh& mesh, const FactorExtraction& fx, std::span<const Vec2> points) {
  const std::size_t n = mesh.vertex_count();
  std::vector<double> vphi(n, 0.0), vw(n, 0.0);
  for (std::size_t t = 0; t < mesh.triangles().size(); ++t) {
    const double a = mesh.triangle_area(t);
    for (auto v : mesh.triangles()[t]) {
      vphi[v] += a * fx.phi[t];
      vw[v] += a;
    }
  }
  for (std::size_t v = 0; v < n; ++v) vphi[v] /= vw[v];
  std::vector<double> out;
  out.reserve(points.size());
  for (const Vec2& p : points) {
    bool found = false;
    for (std::size_t t = 0; t < mesh.triangles().size() && !found; ++t) {
      const auto& tri = mesh.triangles()[t];
      const Vec2 a = mesh.position(tri[0]), b = mesh.position(tri[1]), c = mesh.position(tri[2]);
      const double area2 = cross(b - a, c - a);
      const double l1 = cross(b - p, c - p) / area2;
      const double l2 = cross(c - p, a - p) / area2;
      const double l3 = 1.0 - l1 - l2;
      constexpr double kEps = -1e-12;
      if (l1 >= kEps && l2 >= kEps && l3 >= kEps) {
        out.push_back(l1 * vphi[tri[0]] + l2 * vphi[tri[1]] + l3 * vphi[tri[2]]);
        found = true;
      }
    }
    if (!found) raise(ErrorCode::OutOfDomain, "point outside the mesh");
  }
  return out;
}

}  // namespace catlab::harmonic
