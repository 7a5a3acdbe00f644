#include "catlab/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <string>
#include <thread>

#include "catlab/error.hpp"
#include "catlab/format.hpp"

namespace catlab::comparison {

namespace {

using spaces::GraphPoint;
using spaces::MetricGraph;
using spaces::TreePoint;
using spaces::TreeSpace;
using spaces::VertexId;

// Generalized sine: sin(k x)/k, x, or sinh(k x)/k.
double model_sine(double kappa, double x) {
  if (kappa > 0.0) {
    const double k = std::sqrt(kappa);
    return std::sin(k * x) / k;
  }
  if (kappa < 0.0) {
    const double k = std::sqrt(-kappa);
    return std::sinh(k * x) / k;
  }
  return x;
}

void check_perimeter(double kappa, double perimeter) {
  if (kappa > 0.0 && perimeter >= 2.0 * std::numbers::pi / std::sqrt(kappa)) {
    raise(ErrorCode::PerimeterTooLarge,
          "perimeter " + format_double(perimeter) + " >= 2 pi / sqrt(kappa) for kappa = " + format_double(kappa));
  }
}

double probe_distance(const ModelSurface& surface, const ComparisonTriangle& tri, int side, double t) {
  const ModelPoint& from = tri.vertices[static_cast<std::size_t>((side + 1) % 3)];
  const ModelPoint& to = tri.vertices[static_cast<std::size_t>((side + 2) % 3)];
  return surface.distance(tri.vertices[static_cast<std::size_t>(side)], surface.geodesic_point(from, to, t));
}

void check_side(int side) {
  if (side < 0 || side > 2) raise(ErrorCode::InvalidArgument, "side index must be 0, 1 or 2");
}

std::vector<ProbeSpec> probe_plan(SplitMix64& rng, std::size_t n_random) {
  std::vector<ProbeSpec> plan;
  plan.reserve(9 + n_random);
  for (int side = 0; side < 3; ++side) {
    for (double t : kFixedProbes) plan.push_back({side, t});
  }
  for (std::size_t k = 0; k < n_random; ++k) {
    const int side = static_cast<int>(rng.below(3));
    plan.push_back({side, rng.uniform()});
  }
  return plan;
}

bool sides_admissible(const SideLengths& s, double max_perimeter) {
  const double half = 0.5 * max_perimeter;
  return s[0] <= half && s[1] <= half && s[2] <= half && s[0] + s[1] + s[2] < max_perimeter;
}

std::string point_label(const ModelPoint& p) {
  return "(" + format_double(p.x) + "," + format_double(p.y) + "," + format_double(p.z) + ")";
}

std::string point_label(const TreePoint& p) {
  return "e" + std::to_string(p.edge) + "+" + format_double(p.offset);
}

struct TriangleOutcome {
  double max_defect = -spaces::kInfinity;
  std::size_t probe = 0;
  std::size_t probes = 0;
  bool degenerate = false;
  MeasuredTriangle triangle;
  double model = 0.0;
  std::exception_ptr error;
};

TriangleOutcome run_triangle(const TriangleSource& source, const ModelSurface& surface, const CheckOptions& opt,
                             std::size_t index) {
  TriangleOutcome out;
  try {
    SplitMix64 rng(stream_seed(opt.seed, index));
    const std::vector<ProbeSpec> plan = probe_plan(rng, opt.n_probes);
    std::optional<MeasuredTriangle> tri;
    for (std::size_t attempt = 0; attempt < opt.max_attempts && !tri; ++attempt) {
      tri = source.draw(rng, opt.max_perimeter, plan);
    }
    if (!tri) {
      raise(ErrorCode::InsufficientSpace, "no admissible triangle after " + std::to_string(opt.max_attempts) +
                                              " attempts (triangle " + std::to_string(index) + ")");
    }
    const ComparisonTriangle model = comparison_triangle(surface, tri->sides);
    out.degenerate = model.degenerate;
    out.probes = tri->probes.size();
    for (std::size_t k = 0; k < tri->probes.size(); ++k) {
      const ProbeMeasurement& pm = tri->probes[k];
      const double d_model = probe_distance(surface, model, pm.side, pm.t);
      const double defect = pm.distance - d_model;
      if (defect > out.max_defect) {
        out.max_defect = defect;
        out.probe = k;
        out.model = d_model;
      }
    }
    out.triangle = std::move(*tri);
  } catch (...) {
    out.error = std::current_exception();
  }
  return out;
}

}  // namespace

ComparisonTriangle comparison_triangle(const ModelSurface& surface, const SideLengths& sides) {
  const double a = sides[0], b = sides[1], c = sides[2];
  if (!(a >= 0.0 && b >= 0.0 && c >= 0.0) || !std::isfinite(a + b + c)) {
    raise(ErrorCode::InvalidArgument, "side lengths must be finite and nonnegative");
  }
  const double s = 0.5 * (a + b + c);
  check_perimeter(surface.kappa(), 2.0 * s);
  const double slack = 1e-9 * std::max(1.0, s);
  if (s - a < -slack || s - b < -slack || s - c < -slack) {
    raise(ErrorCode::InvalidArgument, "side lengths violate the triangle inequality");
  }
  const double kappa = surface.kappa();
  const double sa = std::max(0.0, s - a), sb = std::max(0.0, s - b), sc = std::max(0.0, s - c);
  // Angle at vertex 0, between sides b and c.
  double alpha = 0.0;
  if (b > 0.0 && c > 0.0) {
    const double num = std::sqrt(std::max(0.0, model_sine(kappa, sb) * model_sine(kappa, sc)));
    const double den = std::sqrt(std::max(0.0, model_sine(kappa, s) * model_sine(kappa, sa)));
    alpha = 2.0 * std::atan2(num, den);
  }
  ComparisonTriangle tri;
  tri.sides = sides;
  tri.vertices = {surface.origin(), surface.polar(c, 0.0), surface.polar(b, alpha)};
  const double tol = 1e-12 * std::max(1.0, s);
  tri.degenerate = sa <= tol || sb <= tol || sc <= tol;
  return tri;
}

ComparisonPoint comparison_point(const ModelSurface& surface, const SideLengths& sides, int side, double t) {
  check_side(side);
  if (!(t >= 0.0 && t <= 1.0)) raise(ErrorCode::InvalidArgument, "probe parameter must lie in [0, 1]");
  ComparisonPoint out;
  out.triangle = comparison_triangle(surface, sides);
  const auto& v = out.triangle.vertices;
  out.probe = surface.geodesic_point(v[static_cast<std::size_t>((side + 1) % 3)],
                                     v[static_cast<std::size_t>((side + 2) % 3)], t);
  out.vertex_distance = surface.distance(v[static_cast<std::size_t>(side)], out.probe);
  return out;
}

double comparison_distance(const ModelSurface& surface, const SideLengths& sides, int side, double t) {
  return comparison_point(surface, sides, side, t).vertex_distance;
}

std::vector<double> probe_defects(const MeasuredTriangle& triangle, const ModelSurface& surface) {
  const ComparisonTriangle model = comparison_triangle(surface, triangle.sides);
  std::vector<double> out;
  out.reserve(triangle.probes.size());
  for (const ProbeMeasurement& pm : triangle.probes) {
    check_side(pm.side);
    out.push_back(pm.distance - probe_distance(surface, model, pm.side, pm.t));
  }
  return out;
}

// ---- model surfaces ----

ModelTriangleSource::ModelTriangleSource(const ModelSurface& surface, std::optional<ModelPoint> center, double radius)
    : surface_(&surface), center_(center), radius_(radius) {
  if (center_ && !(radius_ > 0.0)) raise(ErrorCode::InvalidArgument, "ball radius must be positive");
}

ModelPoint ModelTriangleSource::random_in_disc(SplitMix64& rng, const ModelPoint& center, double radius) const {
  const double rho = radius * std::sqrt(rng.uniform());
  const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return surface_->exp(center, rho * std::cos(theta), rho * std::sin(theta));
}

std::optional<MeasuredTriangle> ModelTriangleSource::draw(SplitMix64& rng, double max_perimeter,
                                                          std::span<const ProbeSpec> probes) const {
  std::array<ModelPoint, 3> v;
  if (center_) {
    for (auto& p : v) p = random_in_disc(rng, *center_, radius_);
  } else {
    v[0] = random_in_disc(rng, surface_->origin(), 1.0);
    v[1] = random_in_disc(rng, v[0], 0.5 * max_perimeter);
    v[2] = random_in_disc(rng, v[0], 0.5 * max_perimeter);
  }
  MeasuredTriangle tri;
  for (int i = 0; i < 3; ++i) {
    tri.sides[static_cast<std::size_t>(i)] =
        surface_->distance(v[static_cast<std::size_t>((i + 1) % 3)], v[static_cast<std::size_t>((i + 2) % 3)]);
    tri.labels[static_cast<std::size_t>(i)] = point_label(v[static_cast<std::size_t>(i)]);
  }
  if (!sides_admissible(tri.sides, max_perimeter)) return std::nullopt;
  tri.probes.reserve(probes.size());
  for (const ProbeSpec& ps : probes) {
    const auto side = static_cast<std::size_t>(ps.side);
    const ModelPoint p = surface_->geodesic_point(v[(side + 1) % 3], v[(side + 2) % 3], ps.t);
    tri.probes.push_back({ps.side, ps.t, surface_->distance(v[side], p)});
  }
  return tri;
}

Budget ModelTriangleSource::budget(double) const { return {1e-9, 0.0, "1e-9"}; }

// ---- metric graphs ----

GraphTriangleSource::GraphTriangleSource(const MetricGraph& graph, Budget budget, std::optional<VertexId> center,
                                         double radius)
    : graph_(&graph), budget_(std::move(budget)) {
  const std::size_t n = graph.vertex_count();
  if (center) {
    if (*center >= n) raise(ErrorCode::InvalidArgument, "ball center is not a vertex");
    if (!(radius > 0.0)) raise(ErrorCode::InvalidArgument, "ball radius must be positive");
    in_ball_.assign(n, false);
    const auto tree = graph.shortest_paths(*center, radius);
    for (VertexId v : tree.settled()) {
      if (tree.distance(v) <= radius) {
        candidates_.push_back(v);
        in_ball_[v] = true;
      }
    }
    std::sort(candidates_.begin(), candidates_.end());
  } else {
    candidates_.resize(n);
    for (std::size_t v = 0; v < n; ++v) candidates_[v] = static_cast<VertexId>(v);
  }
}

std::optional<MeasuredTriangle> GraphTriangleSource::draw(SplitMix64& rng, double max_perimeter,
                                                          std::span<const ProbeSpec> probes) const {
  if (candidates_.size() < 3) return std::nullopt;
  const double half = 0.5 * max_perimeter;
  const double reach = max_perimeter + graph_->max_edge_weight();
  const VertexId v0 = candidates_[rng.below(candidates_.size())];
  const auto t0 = graph_->shortest_paths(v0, reach);

  std::vector<VertexId> near;
  for (VertexId v : t0.settled()) {
    if (t0.distance(v) > half) break;
    if (v != v0 && (in_ball_.empty() || in_ball_[v])) near.push_back(v);
  }
  if (near.size() < 2) return std::nullopt;
  std::sort(near.begin(), near.end());
  const std::size_t i1 = rng.below(near.size());
  std::size_t i2 = rng.below(near.size() - 1);
  if (i2 >= i1) ++i2;
  const VertexId v1 = near[i1], v2 = near[i2];

  const auto t1 = graph_->shortest_paths(v1, reach);
  MeasuredTriangle tri;
  tri.sides = {t1.distance(v2), t0.distance(v2), t0.distance(v1)};
  if (!sides_admissible(tri.sides, max_perimeter)) return std::nullopt;
  const auto t2 = graph_->shortest_paths(v2, reach);

  const std::array<const spaces::ShortestPathTree*, 3> trees = {&t0, &t1, &t2};
  // Side i runs from vertex i+1 to vertex i+2.
  const std::array<std::vector<VertexId>, 3> paths = {t1.path_to(v2), t2.path_to(v0), t0.path_to(v1)};
  tri.labels = {"v" + std::to_string(v0), "v" + std::to_string(v1), "v" + std::to_string(v2)};
  tri.probes.reserve(probes.size());
  for (const ProbeSpec& ps : probes) {
    const auto side = static_cast<std::size_t>(ps.side);
    const GraphPoint p = graph_->point_along(paths[side], ps.t * tri.sides[side]);
    tri.probes.push_back({ps.side, ps.t, trees[side]->distance(p)});
  }
  return tri;
}

// ---- trees ----

TreeTriangleSource::TreeTriangleSource(const TreeSpace& tree, std::optional<TreePoint> center, double radius)
    : tree_(&tree), center_(center), radius_(radius) {
  if (center_ && !(radius_ > 0.0)) raise(ErrorCode::InvalidArgument, "ball radius must be positive");
}

std::optional<MeasuredTriangle> TreeTriangleSource::draw(SplitMix64& rng, double max_perimeter,
                                                         std::span<const ProbeSpec> probes) const {
  std::array<TreePoint, 3> v;
  for (auto& p : v) {
    p = tree_->sample(rng);
    if (center_ && tree_->distance(*center_, p) > radius_) return std::nullopt;
  }
  MeasuredTriangle tri;
  for (std::size_t i = 0; i < 3; ++i) {
    tri.sides[i] = tree_->distance(v[(i + 1) % 3], v[(i + 2) % 3]);
    tri.labels[i] = point_label(v[i]);
  }
  if (!sides_admissible(tri.sides, max_perimeter)) return std::nullopt;
  tri.probes.reserve(probes.size());
  for (const ProbeSpec& ps : probes) {
    const auto side = static_cast<std::size_t>(ps.side);
    const TreePoint p = tree_->geodesic_point(v[(side + 1) % 3], v[(side + 2) % 3], ps.t);
    tri.probes.push_back({ps.side, ps.t, tree_->distance(v[side], p)});
  }
  return tri;
}

Budget TreeTriangleSource::budget(double max_perimeter) const {
  return {1e-12 * std::max(1.0, max_perimeter), 0.0, "1e-12 * max(1, P)"};
}

// ---- driver ----

ComparisonReport check_cat(const TriangleSource& source, const CheckOptions& options) {
  if (!(options.max_perimeter > 0.0) || !std::isfinite(options.max_perimeter)) {
    raise(ErrorCode::InvalidArgument, "max_perimeter must be finite and positive");
  }
  if (options.n_triangles == 0) raise(ErrorCode::InvalidArgument, "n_triangles must be positive");
  check_perimeter(options.kappa, options.max_perimeter);
  const ModelSurface surface(options.kappa);

  std::vector<TriangleOutcome> outcomes(options.n_triangles);
  unsigned jobs = options.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.jobs;
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, options.n_triangles));
  auto worker = [&](unsigned w) {
    for (std::size_t i = w; i < options.n_triangles; i += jobs) {
      outcomes[i] = run_triangle(source, surface, options, i);
    }
  };
  if (jobs <= 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(worker, w);
    for (auto& th : pool) th.join();
  }

  const Budget budget = source.budget(options.max_perimeter);
  ComparisonReport report;
  report.kappa = options.kappa;
  report.n_triangles = options.n_triangles;
  report.n_probes = options.n_probes;
  report.max_perimeter = options.max_perimeter;
  report.seed = options.seed;
  report.budget = budget.value(options.max_perimeter);
  report.budget_formula = budget.formula;
  report.max_defect = -spaces::kInfinity;
  std::size_t best = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const TriangleOutcome& o = outcomes[i];
    if (o.error) std::rethrow_exception(o.error);
    report.probes_evaluated += o.probes;
    if (o.degenerate) ++report.degenerate_triangles;
    if (o.max_defect > report.max_defect) {
      report.max_defect = o.max_defect;
      best = i;
    }
  }
  const TriangleOutcome& w = outcomes[best];
  const ProbeMeasurement& pm = w.triangle.probes[w.probe];
  report.witness = Witness{best, w.triangle.sides, w.triangle.labels, pm.side, pm.t, pm.distance, w.model};
  return report;
}

ComparisonReport check_cat(const ModelSurface& space, const CheckOptions& options) {
  return check_cat(ModelTriangleSource(space), options);
}

ComparisonReport check_cat(const TreeSpace& space, const CheckOptions& options) {
  return check_cat(TreeTriangleSource(space), options);
}

ComparisonReport check_cat(const MetricGraph& space, const CheckOptions& options) {
  return check_cat(GraphTriangleSource(space, Budget{1e-12, 0.0, "1e-12"}), options);
}

Budget grid_budget(const spaces::GridDisc& grid, std::span<const std::size_t> nodes) {
  double phi_max = 0.0;
  if (nodes.empty()) {
    phi_max = grid.factor_max();
  } else {
    for (std::size_t k : nodes) phi_max = std::max(phi_max, grid.factor()[k]);
  }
  const double floor = 2.0 * grid.spacing() * phi_max;
  return {floor, spaces::kOctileAnisotropy,
          "0.083 * P + 2 * h * phi_max (h = " + format_double(grid.spacing()) +
              ", phi_max = " + format_double(phi_max) + ")"};
}

namespace {

ComparisonReport check_grid_ball(const spaces::GridDisc& grid, const MetricGraph& graph, const CheckOptions& options,
                                 std::optional<std::size_t> center, double radius) {
  if (!center) return check_cat(GraphTriangleSource(graph, grid_budget(grid)), options);
  if (*center >= grid.node_count()) raise(ErrorCode::InvalidArgument, "ball center is not a grid node");
  const GraphTriangleSource probe_ball(graph, Budget{}, static_cast<VertexId>(*center), radius);
  std::vector<std::size_t> ball(probe_ball.candidates().begin(), probe_ball.candidates().end());
  return check_cat(GraphTriangleSource(graph, grid_budget(grid, ball), static_cast<VertexId>(*center), radius),
                   options);
}

void check_scan_radius(double kappa, double radius) {
  if (!(radius > 0.0)) raise(ErrorCode::InvalidArgument, "ball radius must be positive");
  if (kappa > 0.0 && radius >= 0.5 * std::numbers::pi / std::sqrt(kappa)) {
    raise(ErrorCode::RadiusTooLarge, "ball radius " + format_double(radius) + " >= pi / (2 sqrt(kappa))");
  }
}

}  // namespace

ComparisonReport check_cat(const spaces::GridDisc& space, const CheckOptions& options,
                           std::optional<std::size_t> center, double radius) {
  return check_grid_ball(space, spaces::grid_to_graph(space), options, center, radius);
}

std::vector<ComparisonReport> local_cat_scan(const spaces::GridDisc& space, const CheckOptions& options,
                                             std::span<const std::size_t> centers, double radius) {
  check_scan_radius(options.kappa, radius);
  const MetricGraph graph = spaces::grid_to_graph(space);
  std::vector<ComparisonReport> out;
  out.reserve(centers.size());
  for (std::size_t c : centers) out.push_back(check_grid_ball(space, graph, options, c, radius));
  return out;
}

std::vector<ComparisonReport> local_cat_scan(const MetricGraph& space, const CheckOptions& options,
                                             std::span<const VertexId> centers, double radius) {
  check_scan_radius(options.kappa, radius);
  std::vector<ComparisonReport> out;
  out.reserve(centers.size());
  for (VertexId c : centers) {
    out.push_back(check_cat(GraphTriangleSource(space, Budget{1e-12, 0.0, "1e-12"}, c, radius), options));
  }
  return out;
}

std::vector<ComparisonReport> local_cat_scan(const ModelSurface& space, const CheckOptions& options,
                                             std::span<const ModelPoint> centers, double radius) {
  check_scan_radius(options.kappa, radius);
  std::vector<ComparisonReport> out;
  out.reserve(centers.size());
  for (const ModelPoint& c : centers) out.push_back(check_cat(ModelTriangleSource(space, c, radius), options));
  return out;
}

}  // namespace catlab::comparison
