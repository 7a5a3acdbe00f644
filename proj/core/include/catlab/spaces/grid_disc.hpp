#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "catlab/spaces/metric_graph.hpp"
#include "catlab/vec.hpp"

namespace catlab::spaces {

struct GridNode {
  int i = 0;
  int j = 0;
  friend bool operator==(GridNode, GridNode) = default;
};

/// Anisotropy of the 8-neighbour lattice metric: octile distance exceeds the
/// Euclidean one by at most a factor 1 / cos(pi / 8) ~ 1.0824.
inline constexpr double kOctileAnisotropy = 0.083;

/// Positive conformal factor sampled on the lattice h * Z^2 restricted to a
/// node set inside the disc of radius r_dom about the origin. Nodes are kept
/// sorted row-major (by j, then i).
class GridDisc {
 public:
  using Factor = std::function<double(double x, double y)>;

  GridDisc() = default;

  /// All lattice nodes with |z| <= r_dom, factor sampled pointwise.
  /// Throws NonPositiveFactor if any sample is not a finite positive number.
  static GridDisc sample(double h, double r_dom, const Factor& factor);
  /// Explicit node set and factor values (any order; sorted on construction).
  static GridDisc from_nodes(double h, double r_dom, std::vector<GridNode> nodes, std::vector<double> factor);

  double spacing() const noexcept { return h_; }
  double domain_radius() const noexcept { return r_dom_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::span<const GridNode> nodes() const noexcept { return nodes_; }
  std::span<const double> factor() const noexcept { return factor_; }
  double factor_min() const;
  double factor_max() const;

  Vec2 position(std::size_t k) const { return {nodes_[k].i * h_, nodes_[k].j * h_}; }
  std::optional<std::size_t> find(int i, int j) const;
  /// Node closest to (x, y) among the nodes present.
  std::size_t nearest(double x, double y) const;
  /// All eight lattice neighbours are present.
  bool is_interior(std::size_t k) const;
  std::vector<std::size_t> interior_nodes() const;

  /// Same nodes, new factor values.
  GridDisc with_factor(std::vector<double> factor) const;
  /// Keep only the listed node indices.
  GridDisc restricted(std::span<const std::size_t> keep) const;

 private:
  GridDisc(double h, double r_dom, std::vector<GridNode> nodes, std::vector<double> factor);

  double h_ = 0.0;
  double r_dom_ = 0.0;
  int extent_ = 0;  // lattice indices lie in [-extent_, extent_]
  std::vector<GridNode> nodes_;
  std::vector<double> factor_;
  std::vector<std::int32_t> lookup_;  // (2 extent + 1)^2 table, -1 for absent
};

/// Graph on the grid nodes with the 8-neighbour stencil. The weight of edge
/// a--b is |a - b| * (phi(a) + phi(b)) / 2, the midpoint rule for the
/// phi-length of the segment. Vertex ids equal node indices; coordinates kept.
MetricGraph grid_to_graph(const GridDisc& grid);

}  // namespace catlab::spaces
