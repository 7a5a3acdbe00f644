#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "catlab/error.hpp"
#include "catlab/flows.hpp"
#include "catlab/harmonic/disc_mesh.hpp"
#include "catlab/spaces/model_surface.hpp"
#include "catlab/spaces/tree_space.hpp"

namespace catlab::harmonic {

using flows::PointOf;
using flows::SpaceTraits;
using spaces::ModelPoint;
using spaces::ModelSurface;
using spaces::TreePoint;
using spaces::TreeSpace;

/// Weighted Frechet mean argmin_y sum_k w_k d(y, p_k)^2. Plane: closed form.
/// Curved model surfaces: intrinsic gradient iteration from `start` until the
/// step is below 1e-12 (NoConvergence after 200 iterations). Trees: exact
/// minimum of the piecewise quadratic over every edge.
ModelPoint frechet_mean(const ModelSurface& s, std::span<const ModelPoint> points, std::span<const double> weights,
                        const ModelPoint& start);
TreePoint frechet_mean(const TreeSpace& s, std::span<const TreePoint> points, std::span<const double> weights,
                       const TreePoint& start);

template <class Target>
struct MeshMap {
  using Point = PointOf<Target>;
  const DiscMesh* mesh = nullptr;
  const Target* target = nullptr;
  std::vector<Point> images;  // per vertex
  bool converged = false;
  double tolerance = 0.0;     // movement threshold the solver stopped at
  std::size_t sweeps = 0;
  double last_movement = 0.0;
  /// Largest per-update energy increase seen while solving (<= 0 up to rounding).
  double max_energy_increase = 0.0;
};

/// Sum over edges of w_e d(u(a), u(b))^2.
template <class Target>
double energy(const MeshMap<Target>& m) {
  double e = 0.0;
  for (const MeshEdge& edge : m.mesh->edges()) {
    const double d = SpaceTraits<Target>::distance(*m.target, m.images[edge.a], m.images[edge.b]);
    e += edge.weight * d * d;
  }
  return e;
}

/// (1/2) sum_{e at v} w_e d^2 / area(v); the area-weighted sum equals energy().
template <class Target>
std::vector<double> energy_density(const MeshMap<Target>& m) {
  std::vector<double> out(m.mesh->vertex_count(), 0.0);
  for (std::uint32_t v = 0; v < out.size(); ++v) {
    double s = 0.0;
    for (const MeshNeighbor& nb : m.mesh->neighbors(v)) {
      const double d = SpaceTraits<Target>::distance(*m.target, m.images[v], m.images[nb.vertex]);
      s += nb.weight * d * d;
    }
    out[v] = 0.5 * s / m.mesh->area(v);
  }
  return out;
}

/// Map given by images at every vertex (no solve).
template <class Target>
MeshMap<Target> make_map(const DiscMesh& mesh, const Target& target, std::vector<PointOf<Target>> images) {
  if (images.size() != mesh.vertex_count()) raise(ErrorCode::InvalidArgument, "one image per vertex required");
  MeshMap<Target> m;
  m.mesh = &mesh;
  m.target = &target;
  m.images = std::move(images);
  return m;
}

struct SolveOptions {
  double tol = 1e-10;
  std::size_t max_sweeps = 1000000;
  bool track_energy = false;  // check energy monotonicity per update (slow)
};

namespace detail {

inline void check_target_ball(const ModelSurface& s, std::span<const ModelPoint> trace) {
  if (s.kappa() <= 0.0) return;
  const std::vector<double> w(trace.size(), 1.0);
  const ModelPoint c = frechet_mean(s, trace, w, trace.front());
  double radius = 0.0;
  for (const auto& p : trace) radius = std::max(radius, s.distance(c, p));
  if (radius >= s.convexity_radius()) {
    raise(ErrorCode::BallTooLarge, "trace does not fit in a ball of radius < pi / (2 sqrt(kappa))");
  }
}
inline void check_target_ball(const TreeSpace&, std::span<const TreePoint>) {}

inline ModelPoint initial_image(const ModelSurface& s, std::span<const ModelPoint> trace) {
  const std::vector<double> w(trace.size(), 1.0);
  return frechet_mean(s, trace, w, trace.front());
}
inline TreePoint initial_image(const TreeSpace&, std::span<const TreePoint> trace) { return trace.front(); }

}  // namespace detail

/// Gauss-Seidel sweeps in vertex-id order: every interior image is replaced by
/// the weighted Frechet mean of its neighbours' images, until the largest move
/// in a sweep is <= tol. Trace images are never modified. Throws BallTooLarge
/// and NoConvergence.
template <class Target>
MeshMap<Target> solve_harmonic(const DiscMesh& mesh, const Target& target, std::span<const PointOf<Target>> trace,
                               const SolveOptions& options = {},
                               std::optional<std::vector<PointOf<Target>>> initial = std::nullopt) {
  using Point = PointOf<Target>;
  if (trace.size() != mesh.boundary().size()) raise(ErrorCode::InvalidArgument, "one trace image per boundary vertex");
  if (!(options.tol > 0.0)) raise(ErrorCode::InvalidArgument, "tolerance must be positive");
  detail::check_target_ball(target, trace);
  MeshMap<Target> m;
  m.mesh = &mesh;
  m.target = &target;
  m.tolerance = options.tol;
  if (initial) {
    if (initial->size() != mesh.vertex_count()) raise(ErrorCode::InvalidArgument, "initial map has wrong size");
    m.images = std::move(*initial);
  } else {
    m.images.assign(mesh.vertex_count(), detail::initial_image(target, trace));
  }
  for (std::size_t k = 0; k < trace.size(); ++k) m.images[mesh.boundary()[k]] = trace[k];

  std::vector<Point> pts;
  std::vector<double> ws;
  auto local_energy = [&](std::uint32_t v, const Point& y) {
    double e = 0.0;
    for (const MeshNeighbor& nb : mesh.neighbors(v)) {
      const double d = SpaceTraits<Target>::distance(target, y, m.images[nb.vertex]);
      e += nb.weight * d * d;
    }
    return e;
  };
  for (m.sweeps = 0; m.sweeps < options.max_sweeps;) {
    double moved = 0.0;
    for (std::uint32_t v : mesh.interior_vertices()) {
      pts.clear();
      ws.clear();
      for (const MeshNeighbor& nb : mesh.neighbors(v)) {
        pts.push_back(m.images[nb.vertex]);
        ws.push_back(nb.weight);
      }
      const Point next = frechet_mean(target, pts, ws, m.images[v]);
      if (options.track_energy) {
        const double before = local_energy(v, m.images[v]);
        const double after = local_energy(v, next);
        m.max_energy_increase = std::max(m.max_energy_increase, after - before);
      }
      moved = std::max(moved, SpaceTraits<Target>::distance(target, m.images[v], next));
      m.images[v] = next;
    }
    ++m.sweeps;
    m.last_movement = moved;
    if (moved <= options.tol) {
      m.converged = true;
      return m;
    }
  }
  raise(ErrorCode::NoConvergence, "no convergence after " + std::to_string(options.max_sweeps) + " sweeps");
}

struct FugledeReport {
  double lambda = 0.0;
  double epsilon = 0.0;
  std::vector<std::uint32_t> vertices;  // interior vertices
  std::vector<double> laplacian;        // Delta_h (f o u)
  std::vector<double> density;          // e^2_u
  std::vector<double> margin;           // laplacian - lambda density
  double min_margin = std::numeric_limits<double>::infinity();
  double max_abs_margin = 0.0;
  std::uint32_t worst_vertex = 0;
  bool passed = false;  // min_margin >= -epsilon
};

/// Delta_h (f o u)(v) = sum_j w_vj (f(u_j) - f(u_v)) / area(v) against
/// lambda e^2_u(v) at interior vertices. Throws NotConverged unless the map
/// was solved to a movement tolerance <= 1e-8. Maps built with make_map are
/// accepted when `require_solved` is false.
template <class Target>
FugledeReport fuglede_check(const MeshMap<Target>& m, const flows::ConvexFunctionHandle<Target>& f, double epsilon,
                            bool require_solved = true) {
  if (require_solved && !(m.converged && m.tolerance <= 1e-8)) {
    raise(ErrorCode::NotConverged, "map is not a converged harmonic map (tol <= 1e-8)");
  }
  FugledeReport out;
  out.lambda = f.lambda;
  out.epsilon = epsilon;
  const std::vector<double> density = energy_density(m);
  std::vector<double> fu(m.images.size());
  for (std::size_t v = 0; v < fu.size(); ++v) fu[v] = f(m.images[v]);
  for (std::uint32_t v : m.mesh->interior_vertices()) {
    double lap = 0.0;
    for (const MeshNeighbor& nb : m.mesh->neighbors(v)) lap += nb.weight * (fu[nb.vertex] - fu[v]);
    lap /= m.mesh->area(v);
    const double margin = lap - f.lambda * density[v];
    out.vertices.push_back(v);
    out.laplacian.push_back(lap);
    out.density.push_back(density[v]);
    out.margin.push_back(margin);
    out.max_abs_margin = std::max(out.max_abs_margin, std::abs(margin));
    if (margin < out.min_margin) {
      out.min_margin = margin;
      out.worst_vertex = v;
    }
  }
  out.passed = out.min_margin >= -epsilon;
  return out;
}

struct ConstancyReport {
  bool applicable = false;  // f o u constant (range < 1e-10)
  double f_range = 0.0;
  double spread = 0.0;      // max distance between images
  bool passed = true;       // vacuous when not applicable
};

template <class Target>
ConstancyReport constancy_check(const MeshMap<Target>& m, const flows::ConvexFunctionHandle<Target>& f) {
  if (!(m.converged && m.tolerance <= 1e-8)) raise(ErrorCode::NotConverged, "map is not a converged harmonic map");
  ConstancyReport out;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& p : m.images) {
    const double v = f(p);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  out.f_range = hi - lo;
  out.applicable = out.f_range < 1e-10;
  if (!out.applicable) return out;
  for (const auto& p : m.images) {
    out.spread = std::max(out.spread, SpaceTraits<Target>::distance(*m.target, m.images.front(), p));
  }
  out.passed = out.spread < 1e-8;
  return out;
}

/// Closed polyline in a model surface.
struct JordanBoundary {
  std::vector<ModelPoint> points;  // the last point connects back to the first

  double length(const ModelSurface& s) const;
  /// Point at arc length `t` (taken modulo the length) from points[0].
  ModelPoint at(const ModelSurface& s, double t) const;
};

struct PlateauReport {
  MeshMap<ModelSurface> map;
  double length = 0.0;
  double energy = 0.0;
  double bound = 0.0;   // l^2 / pi
  double margin = 0.0;  // bound - energy
  bool passed = false;
};

/// Harmonic filling with the constant-speed boundary parametrization held
/// fixed. Throws CurveTooLong for kappa > 0 and l >= 2 pi / sqrt(kappa).
PlateauReport plateau_energy_bound(const DiscMesh& mesh, const ModelSurface& target, const JordanBoundary& boundary,
                                   const SolveOptions& options = {});

struct FactorExtraction {
  std::vector<double> s1, s2;  // singular values per triangle, s1 >= s2
  std::vector<double> phi;     // sqrt(s1 s2)
  double isotropy_defect = 0.0;  // max (s1 - s2) / (s1 + s2)
  double area = 0.0;             // sum phi^2 area_T
  double energy = 0.0;           // sum area_T (s1^2 + s2^2)
  double relative_error = 0.0;   // |area - energy / 2| / (energy / 2)
  std::size_t degenerate = 0;    // triangles whose image Gram matrix is not positive definite
};

/// Per-triangle metric of the map from image side lengths: the Gram matrix G
/// with e^T G e = d(u(a), u(b))^2 on each edge, s_i = sqrt(eig G).
FactorExtraction conformal_factor_extract(const MeshMap<ModelSurface>& m);

/// Vertex-averaged extracted factor on the lattice nodes of a grid over the
/// mesh (barycentric lookup), for feeding into the curvature estimate.
std::vector<double> factor_at_points(const DiscMesh& mesh, const FactorExtraction& fx, std::span<const Vec2> points);

}  // namespace catlab::harmonic
