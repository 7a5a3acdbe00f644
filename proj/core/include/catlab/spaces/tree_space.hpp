#pragma once

#include <cstddef>
#include <vector>

#include "catlab/random.hpp"

namespace catlab::spaces {

struct TreeEdge {
  std::size_t a = 0;
  std::size_t b = 0;
  double length = 0.0;
};

/// Point on a metric tree: `offset` is measured from endpoint `a` of `edge`.
struct TreePoint {
  std::size_t edge = 0;
  double offset = 0.0;
};

/// Finite metric tree. Distances follow the unique arc, so the space is
/// CAT(0) (indeed 0-hyperbolic); used as the canonical branching test target.
class TreeSpace {
 public:
  /// Throws InvalidArgument unless the edges form a tree on `node_count` nodes
  /// with positive lengths.
  TreeSpace(std::size_t node_count, std::vector<TreeEdge> edges);

  /// Three legs glued at node 0; leg k is edge k from node 0 to node k + 1,
  /// so (k, s) is the point at distance s from the branch point on leg k.
  static TreeSpace tripod(double leg0, double leg1, double leg2);
  /// A single segment [0, length]; a compact stand-in for the real line.
  static TreeSpace segment(double length);

  std::size_t node_count() const noexcept { return node_count_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const TreeEdge& edge(std::size_t e) const { return edges_.at(e); }
  double total_length() const noexcept { return total_length_; }

  TreePoint node_point(std::size_t node) const;
  double node_distance(std::size_t a, std::size_t b) const { return node_dist_[a * node_count_ + b]; }

  double distance(const TreePoint& p, const TreePoint& q) const;
  TreePoint geodesic_point(const TreePoint& p, const TreePoint& q, double t) const;
  /// Point uniformly distributed with respect to length.
  TreePoint sample(SplitMix64& rng) const;
  /// Points at distance exactly r from p, one per direction leaving p (fewer
  /// if a direction ends before r).
  std::vector<TreePoint> sphere(const TreePoint& p, double r) const;

 private:
  struct Route {
    double length;
    std::size_t p_end;  // endpoint of p's edge on the arc
    std::size_t q_end;  // endpoint of q's edge on the arc
    double p_leg;       // distance from p to p_end
  };
  Route route(const TreePoint& p, const TreePoint& q) const;
  std::size_t edge_between(std::size_t a, std::size_t b) const;
  TreePoint point_on_edge_from(std::size_t e, std::size_t from_node, double s) const;

  std::size_t node_count_;
  std::vector<TreeEdge> edges_;
  double total_length_ = 0.0;
  std::vector<double> node_dist_;       // all pairs
  std::vector<std::size_t> next_hop_;   // next_hop_[a * n + b]: neighbour of a towards b
  std::vector<std::vector<std::size_t>> incident_;
};

}  // namespace catlab::spaces
