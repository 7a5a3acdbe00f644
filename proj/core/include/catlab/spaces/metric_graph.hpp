#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "catlab/vec.hpp"

namespace catlab::spaces {

using VertexId = std::uint32_t;
inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Edge {
  VertexId a = 0;
  VertexId b = 0;
  double weight = 0.0;
};

/// A point of the metric graph viewed as a 1-complex: either a vertex
/// (u == v, offset 0) or the point at distance `offset` from u on edge u--v.
struct GraphPoint {
  VertexId u = 0;
  VertexId v = 0;
  double offset = 0.0;
  double length = 0.0;

  static GraphPoint at(VertexId vertex) { return {vertex, vertex, 0.0, 0.0}; }
  bool is_vertex() const { return u == v || offset == 0.0; }
};

/// Result of a single-source shortest path search. Distances are +inf for
/// vertices outside the search radius.
class ShortestPathTree {
 public:
  ShortestPathTree(std::vector<double> dist, std::vector<VertexId> parent, std::vector<VertexId> order)
      : dist_(std::move(dist)), parent_(std::move(parent)), order_(std::move(order)) {}

  double distance(VertexId v) const { return dist_[v]; }
  bool reached(VertexId v) const { return dist_[v] < kInfinity; }
  VertexId parent(VertexId v) const { return parent_[v]; }
  /// Vertices in the order they were settled (nondecreasing distance).
  std::span<const VertexId> settled() const { return order_; }
  /// Vertex path from the search root to v (root first).
  std::vector<VertexId> path_to(VertexId v) const;
  /// Distance from the root to an arbitrary point of the 1-complex.
  double distance(const GraphPoint& p) const;

 private:
  std::vector<double> dist_;
  std::vector<VertexId> parent_;
  std::vector<VertexId> order_;
};

struct GraphPath {
  double length = 0.0;
  std::vector<VertexId> vertices;
};

/// Weighted undirected graph with strictly positive edge lengths, viewed as a
/// length space. Immutable once built; all queries are const and thread safe.
class MetricGraph {
 public:
  struct Arc {
    VertexId target;
    double weight;
    std::uint32_t edge;
  };

  class Builder {
   public:
    VertexId add_vertex();
    VertexId add_vertex(Vec2 position);
    /// Throws InvalidArgument for self loops, duplicate edges, unknown
    /// vertices or weights that are not finite and positive.
    void add_edge(VertexId a, VertexId b, double weight);
    MetricGraph build() &&;

   private:
    std::vector<std::optional<Vec2>> positions_;
    std::vector<Edge> edges_;
  };

  MetricGraph() = default;

  std::size_t vertex_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::span<const Arc> neighbors(VertexId v) const;

  bool has_position(VertexId v) const { return positions_[v].has_value(); }
  Vec2 position(VertexId v) const;
  double max_edge_weight() const noexcept { return max_weight_; }
  std::optional<double> edge_weight(VertexId a, VertexId b) const;

  ShortestPathTree shortest_paths(VertexId source, double radius = kInfinity) const;
  ShortestPathTree shortest_paths(const GraphPoint& source, double radius = kInfinity) const;

  /// Shortest path from a to b. Among equally short paths the lexicographically
  /// smallest vertex sequence is returned. Throws Disconnected.
  GraphPath shortest_path(VertexId a, VertexId b) const;
  double distance(VertexId a, VertexId b) const;
  double distance(const GraphPoint& p, const GraphPoint& q) const;

  /// Point at arc length `s` along a vertex path (clamped to its ends).
  GraphPoint point_along(std::span<const VertexId> path, double s) const;

  /// Subgraph induced by `keep` (ids ascending in the result, in the order of
  /// `keep`). If `old_to_new` is given it receives kNoVertex for dropped ids.
  MetricGraph induced_subgraph(std::span<const VertexId> keep,
                               std::vector<VertexId>* old_to_new = nullptr) const;
  /// Same topology, new edge weights (indexed like edges()).
  MetricGraph reweighted(std::span<const double> weights) const;

  bool is_connected() const;

 private:
  ShortestPathTree search(std::span<const std::pair<VertexId, double>> seeds, double radius) const;

  std::vector<std::optional<Vec2>> positions_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Arc> arcs_;
  double max_weight_ = 0.0;
};

}  // namespace catlab::spaces
