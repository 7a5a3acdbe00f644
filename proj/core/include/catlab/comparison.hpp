#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "catlab/random.hpp"
#include "catlab/spaces/grid_disc.hpp"
#include "catlab/spaces/metric_graph.hpp"
#include "catlab/spaces/model_surface.hpp"
#include "catlab/spaces/tree_space.hpp"

namespace catlab::comparison {

using spaces::ModelPoint;
using spaces::ModelSurface;

/// Side i is opposite vertex i and runs from vertex (i+1)%3 to vertex (i+2)%3.
using SideLengths = std::array<double, 3>;

struct ComparisonTriangle {
  std::array<ModelPoint, 3> vertices;
  SideLengths sides{};
  bool degenerate = false;  // collinear comparison configuration
};

struct ComparisonPoint {
  ComparisonTriangle triangle;
  ModelPoint probe;
  double vertex_distance = 0.0;  // from the opposite vertex to the probe
};

/// Triangle in the model surface with the given side lengths: vertex 0 at the
/// origin, vertex 1 on the positive first axis, vertex 2 in the upper half.
/// Angles come from half-angle (l'Huilier type) formulas, which stay accurate
/// for nearly degenerate triangles. Throws PerimeterTooLarge (kappa > 0 and
/// perimeter >= 2 pi / sqrt(kappa)) and InvalidArgument when the sides violate
/// the triangle inequality beyond rounding.
ComparisonTriangle comparison_triangle(const ModelSurface& surface, const SideLengths& sides);

/// Comparison triangle plus the point at parameter t on side `side`.
ComparisonPoint comparison_point(const ModelSurface& surface, const SideLengths& sides, int side, double t);

/// Distance in the comparison triangle from vertex `side` to the point at
/// parameter t on the opposite side.
double comparison_distance(const ModelSurface& surface, const SideLengths& sides, int side, double t);

struct ProbeMeasurement {
  int side = 0;
  double t = 0.0;
  double distance = 0.0;  // measured in the space, vertex `side` to probe
};

struct MeasuredTriangle {
  SideLengths sides{};
  std::vector<ProbeMeasurement> probes;
  std::array<std::string, 3> labels;

  double perimeter() const { return sides[0] + sides[1] + sides[2]; }
};

/// Defect per probe: measured distance minus comparison distance.
std::vector<double> probe_defects(const MeasuredTriangle& triangle, const ModelSurface& surface);

/// Tolerance for counting a defect as a violation: absolute + per_perimeter * P,
/// evaluated at the perimeter cap P.
struct Budget {
  double absolute = 0.0;
  double per_perimeter = 0.0;
  std::string formula;

  double value(double max_perimeter) const { return absolute + per_perimeter * max_perimeter; }
};

struct ProbeSpec {
  int side = 0;
  double t = 0.0;
};

/// A space that can host sampled geodesic triangles.
class TriangleSource {
 public:
  virtual ~TriangleSource() = default;

  /// One sampling attempt: vertices drawn from `rng` with pairwise distances
  /// <= max_perimeter / 2 and perimeter < max_perimeter, then every probe
  /// measured. Returns nullopt when the attempt is rejected.
  virtual std::optional<MeasuredTriangle> draw(SplitMix64& rng, double max_perimeter,
                                               std::span<const ProbeSpec> probes) const = 0;
  virtual Budget budget(double max_perimeter) const = 0;
};

class ModelTriangleSource final : public TriangleSource {
 public:
  /// Without a ball, the first vertex is drawn within distance 1 of the
  /// origin and the others around it; with a ball, all three inside it.
  explicit ModelTriangleSource(const ModelSurface& surface, std::optional<ModelPoint> center = std::nullopt,
                               double radius = 0.0);

  std::optional<MeasuredTriangle> draw(SplitMix64& rng, double max_perimeter,
                                       std::span<const ProbeSpec> probes) const override;
  Budget budget(double max_perimeter) const override;

 private:
  ModelPoint random_in_disc(SplitMix64& rng, const ModelPoint& center, double radius) const;

  const ModelSurface* surface_;
  std::optional<ModelPoint> center_;
  double radius_;
};

/// Metric graph backend. Vertices are drawn uniformly (from the ball, if one
/// is given); sides are shortest paths and probes are located on them by arc
/// length, so probe distances are exact distances in the 1-complex.
class GraphTriangleSource final : public TriangleSource {
 public:
  GraphTriangleSource(const spaces::MetricGraph& graph, Budget budget,
                      std::optional<spaces::VertexId> center = std::nullopt, double radius = 0.0);

  std::optional<MeasuredTriangle> draw(SplitMix64& rng, double max_perimeter,
                                       std::span<const ProbeSpec> probes) const override;
  Budget budget(double) const override { return budget_; }

  /// Vertices eligible as triangle corners (the ball, or every vertex).
  std::span<const spaces::VertexId> candidates() const { return candidates_; }

 private:
  const spaces::MetricGraph* graph_;
  Budget budget_;
  std::vector<spaces::VertexId> candidates_;
  std::vector<bool> in_ball_;
};

class TreeTriangleSource final : public TriangleSource {
 public:
  explicit TreeTriangleSource(const spaces::TreeSpace& tree, std::optional<spaces::TreePoint> center = std::nullopt,
                              double radius = 0.0);

  std::optional<MeasuredTriangle> draw(SplitMix64& rng, double max_perimeter,
                                       std::span<const ProbeSpec> probes) const override;
  Budget budget(double max_perimeter) const override;

 private:
  const spaces::TreeSpace* tree_;
  std::optional<spaces::TreePoint> center_;
  double radius_;
};

struct Witness {
  std::size_t triangle = 0;
  SideLengths sides{};
  std::array<std::string, 3> vertices;
  int side = 0;
  double t = 0.0;
  double measured = 0.0;
  double model = 0.0;
};

struct ComparisonReport {
  double kappa = 0.0;
  std::size_t n_triangles = 0;
  std::size_t n_probes = 0;  // random probes per triangle, on top of the fixed ones
  std::size_t probes_evaluated = 0;
  double max_perimeter = 0.0;
  std::uint64_t seed = 0;
  double max_defect = 0.0;  // sup over probes of d_X - d_model; positive means thicker
  double budget = 0.0;
  std::string budget_formula;
  std::size_t degenerate_triangles = 0;
  std::optional<Witness> witness;  // probe attaining max_defect

  bool passed() const { return max_defect <= budget; }
};

struct CheckOptions {
  double kappa = 0.0;
  std::size_t n_triangles = 1000;
  std::size_t n_probes = 3;
  double max_perimeter = 1.0;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  std::size_t max_attempts = 20000;  // per triangle
};

/// Fixed probe parameters placed on every side.
inline constexpr std::array<double, 3> kFixedProbes = {0.25, 0.5, 0.75};

/// Samples `n_triangles` triangles from the source and compares every probe
/// against the model surface of curvature `kappa`. Triangle i draws from its
/// own seeded stream, so the report is identical for any `jobs` value.
/// Throws PerimeterTooLarge and InsufficientSpace.
ComparisonReport check_cat(const TriangleSource& source, const CheckOptions& options);

ComparisonReport check_cat(const ModelSurface& space, const CheckOptions& options);
ComparisonReport check_cat(const spaces::TreeSpace& space, const CheckOptions& options);
/// Plain graphs use a rounding-only budget (1e-12 absolute).
ComparisonReport check_cat(const spaces::MetricGraph& space, const CheckOptions& options);

/// Octile discretization budget for grid discs: 0.083 * P + 2 h phi_max, with
/// phi_max taken over `nodes` (all nodes if empty).
Budget grid_budget(const spaces::GridDisc& grid, std::span<const std::size_t> nodes = {});

/// Grid disc checked through its 8-neighbour graph with the octile budget.
/// If `center` is given, triangles are confined to the graph ball of
/// `radius` about that node and phi_max is taken over the ball.
ComparisonReport check_cat(const spaces::GridDisc& space, const CheckOptions& options,
                           std::optional<std::size_t> center = std::nullopt, double radius = 0.0);

/// check_cat restricted to balls of the given radius about each center node.
/// Requires radius < pi / (2 sqrt(kappa)) when kappa > 0 (RadiusTooLarge).
std::vector<ComparisonReport> local_cat_scan(const spaces::GridDisc& space, const CheckOptions& options,
                                             std::span<const std::size_t> centers, double radius);
std::vector<ComparisonReport> local_cat_scan(const spaces::MetricGraph& space, const CheckOptions& options,
                                             std::span<const spaces::VertexId> centers, double radius);
std::vector<ComparisonReport> local_cat_scan(const ModelSurface& space, const CheckOptions& options,
                                             std::span<const ModelPoint> centers, double radius);

}  // namespace catlab::comparison
