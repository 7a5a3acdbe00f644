#include "catlab/spaces/tree_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "catlab/error.hpp"

namespace catlab::spaces {

TreeSpace::TreeSpace(std::size_t node_count, std::vector<TreeEdge> edges)
    : node_count_(node_count), edges_(std::move(edges)), incident_(node_count) {
  if (node_count == 0 || edges_.size() + 1 != node_count) {
    raise(ErrorCode::InvalidArgument, "a tree on n nodes has n - 1 edges");
  }
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const TreeEdge& te = edges_[e];
    if (te.a >= node_count || te.b >= node_count || te.a == te.b) {
      raise(ErrorCode::InvalidArgument, "invalid tree edge");
    }
    if (!(te.length > 0.0) || !std::isfinite(te.length)) {
      raise(ErrorCode::InvalidArgument, "tree edge length must be positive");
    }
    incident_[te.a].push_back(e);
    incident_[te.b].push_back(e);
    total_length_ += te.length;
  }
  const std::size_t n = node_count_;
  const double inf = std::numeric_limits<double>::infinity();
  node_dist_.assign(n * n, inf);
  next_hop_.assign(n * n, n);
  // Search from every target b; parent pointers give the hop towards b.
  std::vector<std::size_t> stack;
  for (std::size_t b = 0; b < n; ++b) {
    node_dist_[b * n + b] = 0.0;
    next_hop_[b * n + b] = b;
    stack.assign(1, b);
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t e : incident_[u]) {
        const std::size_t w = edges_[e].a == u ? edges_[e].b : edges_[e].a;
        if (node_dist_[w * n + b] < inf) continue;
        node_dist_[w * n + b] = node_dist_[u * n + b] + edges_[e].length;
        next_hop_[w * n + b] = u;
        stack.push_back(w);
      }
    }
  }
  if (std::any_of(node_dist_.begin(), node_dist_.end(), [](double d) { return std::isinf(d); })) {
    raise(ErrorCode::InvalidArgument, "tree edges do not connect all nodes");
  }
}

TreeSpace TreeSpace::tripod(double leg0, double leg1, double leg2) {
  return TreeSpace(4, {{0, 1, leg0}, {0, 2, leg1}, {0, 3, leg2}});
}

TreeSpace TreeSpace::segment(double length) { return TreeSpace(2, {{0, 1, length}}); }

TreePoint TreeSpace::node_point(std::size_t node) const {
  if (node >= node_count_) raise(ErrorCode::InvalidArgument, "unknown tree node");
  const std::size_t e = incident_[node].front();
  return {e, edges_[e].a == node ? 0.0 : edges_[e].length};
}

TreeSpace::Route TreeSpace::route(const TreePoint& p, const TreePoint& q) const {
  const TreeEdge& ep = edges_.at(p.edge);
  const TreeEdge& eq = edges_.at(q.edge);
  const double p_to[2] = {p.offset, ep.length - p.offset};
  const double q_to[2] = {q.offset, eq.length - q.offset};
  const std::size_t p_nodes[2] = {ep.a, ep.b};
  const std::size_t q_nodes[2] = {eq.a, eq.b};
  Route best{std::numeric_limits<double>::infinity(), 0, 0, 0.0};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double len = p_to[i] + node_distance(p_nodes[i], q_nodes[j]) + q_to[j];
      if (len < best.length) best = {len, p_nodes[i], q_nodes[j], p_to[i]};
    }
  }
  return best;
}

double TreeSpace::distance(const TreePoint& p, const TreePoint& q) const {
  if (p.edge == q.edge) return std::abs(p.offset - q.offset);
  return route(p, q).length;
}

std::size_t TreeSpace::edge_between(std::size_t a, std::size_t b) const {
  for (std::size_t e : incident_[a]) {
    if (edges_[e].a == b || edges_[e].b == b) return e;
  }
  raise(ErrorCode::InvalidArgument, "nodes are not adjacent");
}

TreePoint TreeSpace::point_on_edge_from(std::size_t e, std::size_t from_node, double s) const {
  const TreeEdge& te = edges_[e];
  s = std::clamp(s, 0.0, te.length);
  return {e, te.a == from_node ? s : te.length - s};
}

TreePoint TreeSpace::geodesic_point(const TreePoint& p, const TreePoint& q, double t) const {
  if (t <= 0.0) return p;
  if (t >= 1.0) return q;
  if (p.edge == q.edge) return {p.edge, p.offset + t * (q.offset - p.offset)};
  const Route r = route(p, q);
  double s = t * r.length;
  const TreeEdge& ep = edges_[p.edge];
  if (s <= r.p_leg) return {p.edge, r.p_end == ep.a ? p.offset - s : p.offset + s};
  s -= r.p_leg;
  std::size_t cur = r.p_end;
  const std::size_t n = node_count_;
  while (cur != r.q_end) {
    const std::size_t nxt = next_hop_[cur * n + r.q_end];
    const std::size_t e = edge_between(cur, nxt);
    if (s <= edges_[e].length) return point_on_edge_from(e, cur, s);
    s -= edges_[e].length;
    cur = nxt;
  }
  return point_on_edge_from(q.edge, r.q_end, s);
}

TreePoint TreeSpace::sample(SplitMix64& rng) const {
  double s = rng.uniform() * total_length_;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (s < edges_[e].length || e + 1 == edges_.size()) return {e, std::min(s, edges_[e].length)};
    s -= edges_[e].length;
  }
  return {0, 0.0};
}

std::vector<TreePoint> TreeSpace::sphere(const TreePoint& p, double r) const {
  struct Frame {
    std::size_t node;
    std::size_t via_edge;
    double remaining;
  };
  std::vector<TreePoint> out;
  std::vector<Frame> stack;
  const TreeEdge& ep = edges_.at(p.edge);
  if (p.offset <= 0.0 || p.offset >= ep.length) {
    stack.push_back({p.offset <= 0.0 ? ep.a : ep.b, edges_.size(), r});
  } else {
    // Interior point: two directions along its edge, continuing past the ends.
    if (r <= p.offset) {
      out.push_back({p.edge, p.offset - r});
    } else {
      stack.push_back({ep.a, p.edge, r - p.offset});
    }
    if (r <= ep.length - p.offset) {
      out.push_back({p.edge, p.offset + r});
    } else {
      stack.push_back({ep.b, p.edge, r - (ep.length - p.offset)});
    }
  }
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    for (std::size_t e : incident_[f.node]) {
      if (e == f.via_edge) continue;
      if (f.remaining <= edges_[e].length) {
        out.push_back(point_on_edge_from(e, f.node, f.remaining));
      } else {
        const std::size_t other = edges_[e].a == f.node ? edges_[e].b : edges_[e].a;
        stack.push_back({other, e, f.remaining - edges_[e].length});
      }
    }
  }
  return out;
}

}  // namespace catlab::spaces
