#include "catlab/flows.hpp"

#include <array>
#include <memory>
#include <numbers>

namespace catlab::flows {

namespace {

constexpr int kProbeCount = 16;

// Golden-section minimization of a function assumed unimodal on [lo, hi].
std::pair<double, double> golden_section(const std::function<double(double)>& F, double lo, double hi, double tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a), x2 = a + kInvPhi * (b - a);
  double f1 = F(x1), f2 = F(x2);
  for (int it = 0; it < 200 && b - a > tol; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = F(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = F(x2);
    }
  }
  double best_x = f1 <= f2 ? x1 : x2;
  double best_f = std::min(f1, f2);
  for (double x : {lo, hi}) {
    const double fx = F(x);
    if (fx < best_f) {
      best_f = fx;
      best_x = x;
    }
  }
  return {best_x, best_f};
}

}  // namespace

// ---- traits ----

ModelPoint SpaceTraits<ModelSurface>::sample(const ModelSurface& s, SplitMix64& rng) {
  const double radius = std::min(1.0, 0.5 * s.convexity_radius());
  const double rho = radius * std::sqrt(rng.uniform());
  const double th = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return s.exp(s.origin(), rho * std::cos(th), rho * std::sin(th));
}

std::vector<ModelPoint> SpaceTraits<ModelSurface>::probes(const ModelSurface& s, const ModelPoint& p, double r) {
  std::vector<ModelPoint> out;
  out.reserve(kProbeCount);
  for (int k = 0; k < kProbeCount; ++k) {
    const double th = 2.0 * std::numbers::pi * k / kProbeCount;
    out.push_back(s.exp(p, r * std::cos(th), r * std::sin(th)));
  }
  return out;
}

std::vector<TreePoint> SpaceTraits<TreeSpace>::probes(const TreeSpace& s, const TreePoint& p, double r) {
  std::vector<TreePoint> out;
  for (int k = 1; k <= kProbeCount; ++k) {
    for (const TreePoint& q : s.sphere(p, r * k / kProbeCount)) out.push_back(q);
  }
  return out;
}

GraphPoint SpaceTraits<MetricGraph>::geodesic(const MetricGraph& s, const GraphPoint& p, const GraphPoint& q,
                                              double t) {
  if (!p.is_vertex() || !q.is_vertex()) {
    raise(ErrorCode::InvalidArgument, "graph geodesics are formed between vertices only");
  }
  const auto path = s.shortest_path(p.u, q.u);
  return s.point_along(path.vertices, t * path.length);
}

std::vector<GraphPoint> SpaceTraits<MetricGraph>::probes(const MetricGraph& s, const GraphPoint& p, double r) {
  std::vector<GraphPoint> out;
  auto along = [&](spaces::VertexId from, spaces::VertexId to, double start, double length) {
    for (int k = 1; k <= kProbeCount; ++k) {
      const double off = start + r * k / kProbeCount;
      if (off >= length) {
        out.push_back(GraphPoint::at(to));
        break;
      }
      out.push_back({from, to, off, length});
    }
  };
  if (p.is_vertex()) {
    for (const auto& arc : s.neighbors(p.u)) along(p.u, arc.target, 0.0, arc.weight);
  } else {
    along(p.u, p.v, p.offset, p.length);
    along(p.v, p.u, p.length - p.offset, p.length);
  }
  return out;
}

// ---- factories ----

ConvexFunctionHandle<ModelSurface> half_squared_distance(const ModelSurface& s) {
  ConvexFunctionHandle<ModelSurface> f;
  f.space = &s;
  const ModelPoint o = s.origin();
  const ModelSurface* sp = &s;
  f.value = [sp, o](const ModelPoint& p) {
    const double d = sp->distance(o, p);
    return 0.5 * d * d;
  };
  if (s.kappa() <= 0.0) {
    f.lambda = 1.0;
  } else {
    // Sharp modulus on the sampling ball: the smaller Hessian eigenvalue of
    // d^2/2 at its rim.
    const double x = std::sqrt(s.kappa()) * std::min(1.0, 0.5 * s.convexity_radius());
    f.lambda = x / std::tan(x);
  }
  if (s.kappa() == 0.0) {
    f.prox = [](const ModelPoint& x, double tau) { return (1.0 / (1.0 + tau)) * x; };
  }
  f.name = "half_squared_distance";
  return f;
}

ConvexFunctionHandle<TreeSpace> distance_function(const TreeSpace& t, TreePoint v) {
  ConvexFunctionHandle<TreeSpace> f;
  f.space = &t;
  const TreeSpace* tp = &t;
  f.value = [tp, v](const TreePoint& p) { return tp->distance(v, p); };
  f.lambda = 0.0;
  f.lipschitz = 1.0;
  f.name = "distance";
  return f;
}

ConvexFunctionHandle<TreeSpace> squared_distance(const TreeSpace& t, TreePoint v) {
  ConvexFunctionHandle<TreeSpace> f;
  f.space = &t;
  const TreeSpace* tp = &t;
  f.value = [tp, v](const TreePoint& p) {
    const double d = tp->distance(v, p);
    return d * d;
  };
  f.lambda = 2.0;
  f.lipschitz = 2.0 * t.total_length();
  f.name = "squared_distance";
  return f;
}

ConvexFunctionHandle<MetricGraph> distance_function(const MetricGraph& g, spaces::VertexId v) {
  ConvexFunctionHandle<MetricGraph> f;
  f.space = &g;
  auto tree = std::make_shared<const spaces::ShortestPathTree>(g.shortest_paths(v));
  f.value = [tree](const GraphPoint& p) { return tree->distance(p); };
  f.lambda = 0.0;
  f.lipschitz = 1.0;
  f.name = "distance";
  return f;
}

// ---- proximal solvers ----

ModelPoint proximal_step(const ModelSurface& s, const std::function<double(const ModelPoint&)>& f,
                         const ModelPoint& x, double tau, double) {
  if (!(tau > 0.0)) raise(ErrorCode::InvalidArgument, "step must be positive");
  auto F = [&](double a, double b) { return f(s.exp(x, a, b)) + (a * a + b * b) / (2.0 * tau); };
  double a = 0.0, b = 0.0;
  double Fv = F(a, b);
  for (int it = 0; it < 100; ++it) {
    const double hg = 1e-6 * (1.0 + std::hypot(a, b));
    const double hh = 1e-4 * (1.0 + std::hypot(a, b));
    const double ga = (F(a + hg, b) - F(a - hg, b)) / (2.0 * hg);
    const double gb = (F(a, b + hg) - F(a, b - hg)) / (2.0 * hg);
    const double faa = (F(a + hh, b) - 2.0 * Fv + F(a - hh, b)) / (hh * hh);
    const double fbb = (F(a, b + hh) - 2.0 * Fv + F(a, b - hh)) / (hh * hh);
    const double fab = (F(a + hh, b + hh) - F(a + hh, b - hh) - F(a - hh, b + hh) + F(a - hh, b - hh)) / (4.0 * hh * hh);
    const double det = faa * fbb - fab * fab;
    double da, db;
    if (faa > 0.0 && det > 0.0) {
      da = -(fbb * ga - fab * gb) / det;
      db = -(faa * gb - fab * ga) / det;
    } else {
      da = -tau * ga;
      db = -tau * gb;
    }
    double step = 1.0;
    double Fn = F(a + da, b + db);
    while (Fn > Fv + 1e-15 * (1.0 + std::abs(Fv)) && step > 1e-12) {
      step *= 0.5;
      Fn = F(a + step * da, b + step * db);
    }
    const double moved = step * std::hypot(da, db);
    a += step * da;
    b += step * db;
    Fv = Fn;
    if (moved <= 1e-10) return s.project(s.exp(x, a, b));
  }
  raise(ErrorCode::ProximalDivergence, "Newton iteration for the proximal step did not converge");
}

TreePoint proximal_step(const TreeSpace& s, const std::function<double(const TreePoint&)>& f, const TreePoint& x,
                        double tau, double) {
  if (!(tau > 0.0)) raise(ErrorCode::InvalidArgument, "step must be positive");
  TreePoint best = x;
  double best_F = f(x);
  for (std::size_t e = 0; e < s.edge_count(); ++e) {
    auto F = [&](double off) {
      const TreePoint y{e, off};
      const double d = s.distance(x, y);
      return f(y) + d * d / (2.0 * tau);
    };
    const auto [off, val] = golden_section(F, 0.0, s.edge(e).length, 1e-10);
    if (val < best_F) {
      best_F = val;
      best = {e, off};
    }
  }
  if (!std::isfinite(best_F)) raise(ErrorCode::ProximalDivergence, "proximal objective is not finite");
  return best;
}

GraphPoint proximal_step(const MetricGraph& s, const std::function<double(const GraphPoint&)>& f,
                         const GraphPoint& x, double tau, double lipschitz) {
  if (!(tau > 0.0)) raise(ErrorCode::InvalidArgument, "step must be positive");
  const double reach = std::isfinite(lipschitz) ? 2.0 * tau * lipschitz + s.max_edge_weight() : spaces::kInfinity;
  const auto tree = s.shortest_paths(x, reach);
  auto dist = [&](const GraphPoint& y) {
    double d = tree.distance(y);
    if (!x.is_vertex() && !y.is_vertex()) {
      if (x.u == y.u && x.v == y.v) d = std::min(d, std::abs(x.offset - y.offset));
      if (x.u == y.v && x.v == y.u) d = std::min(d, std::abs(x.offset - (y.length - y.offset)));
    }
    return d;
  };
  auto F = [&](const GraphPoint& y) {
    const double d = dist(y);
    return f(y) + d * d / (2.0 * tau);
  };
  GraphPoint best = x;
  double best_F = F(x);
  spaces::VertexId best_vertex = x.is_vertex() ? x.u : spaces::kNoVertex;
  for (spaces::VertexId v : tree.settled()) {
    const double val = F(GraphPoint::at(v));
    if (val < best_F) {
      best_F = val;
      best = GraphPoint::at(v);
      best_vertex = v;
    }
  }
  auto refine = [&](spaces::VertexId u, spaces::VertexId v, double w) {
    const auto [off, val] = golden_section([&](double o) { return F({u, v, o, w}); }, 0.0, w, 1e-10);
    if (val < best_F) {
      best_F = val;
      best = off <= 0.0 ? GraphPoint::at(u) : off >= w ? GraphPoint::at(v) : GraphPoint{u, v, off, w};
    }
  };
  if (best_vertex != spaces::kNoVertex) {
    for (const auto& arc : s.neighbors(best_vertex)) refine(best_vertex, arc.target, arc.weight);
  }
  if (!x.is_vertex()) refine(x.u, x.v, x.length);
  if (!std::isfinite(best_F)) raise(ErrorCode::ProximalDivergence, "proximal objective is not finite");
  return best;
}

}  // namespace catlab::flows
