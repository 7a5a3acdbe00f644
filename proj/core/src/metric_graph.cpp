#include "catlab/spaces/metric_graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include "catlab/error.hpp"

namespace catlab::spaces {

std::vector<VertexId> ShortestPathTree::path_to(VertexId v) const {
  std::vector<VertexId> path;
  if (!reached(v)) return path;
  for (VertexId cur = v; cur != kNoVertex; cur = parent_[cur]) path.push_back(cur);
  std::reverse(path.begin(), path.end());
  return path;
}

double ShortestPathTree::distance(const GraphPoint& p) const {
  if (p.u == p.v) return dist_[p.u];
  return std::min(dist_[p.u] + p.offset, dist_[p.v] + (p.length - p.offset));
}

VertexId MetricGraph::Builder::add_vertex() {
  positions_.emplace_back();
  return static_cast<VertexId>(positions_.size() - 1);
}

VertexId MetricGraph::Builder::add_vertex(Vec2 position) {
  positions_.emplace_back(position);
  return static_cast<VertexId>(positions_.size() - 1);
}

void MetricGraph::Builder::add_edge(VertexId a, VertexId b, double weight) {
  if (a >= positions_.size() || b >= positions_.size()) {
    raise(ErrorCode::InvalidArgument, "edge references unknown vertex");
  }
  if (a == b) raise(ErrorCode::InvalidArgument, "self loop at vertex " + std::to_string(a));
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    raise(ErrorCode::InvalidArgument, "edge weight must be finite and positive");
  }
  edges_.push_back({a, b, weight});
}

MetricGraph MetricGraph::Builder::build() && {
  MetricGraph g;
  const std::size_t n = positions_.size();
  g.positions_ = std::move(positions_);
  g.edges_ = std::move(edges_);
  std::vector<std::size_t> degree(n, 0);
  for (const Edge& e : g.edges_) {
    ++degree[e.a];
    ++degree[e.b];
    g.max_weight_ = std::max(g.max_weight_, e.weight);
  }
  g.offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) g.offsets_[v + 1] = g.offsets_[v] + degree[v];
  g.arcs_.resize(g.offsets_[n]);
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (std::size_t i = 0; i < g.edges_.size(); ++i) {
    const Edge& e = g.edges_[i];
    const auto idx = static_cast<std::uint32_t>(i);
    g.arcs_[fill[e.a]++] = {e.b, e.weight, idx};
    g.arcs_[fill[e.b]++] = {e.a, e.weight, idx};
  }
  for (std::size_t v = 0; v < n; ++v) {
    auto first = g.arcs_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]);
    auto last = g.arcs_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]);
    std::sort(first, last, [](const Arc& x, const Arc& y) { return x.target < y.target; });
    if (std::adjacent_find(first, last, [](const Arc& x, const Arc& y) { return x.target == y.target; }) != last) {
      raise(ErrorCode::InvalidArgument, "duplicate edge at vertex " + std::to_string(v));
    }
  }
  return g;
}

std::span<const MetricGraph::Arc> MetricGraph::neighbors(VertexId v) const {
  return {arcs_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

Vec2 MetricGraph::position(VertexId v) const {
  if (!positions_[v]) raise(ErrorCode::InvalidArgument, "vertex has no coordinates");
  return *positions_[v];
}

std::optional<double> MetricGraph::edge_weight(VertexId a, VertexId b) const {
  const auto arcs = neighbors(a);
  const auto it = std::lower_bound(arcs.begin(), arcs.end(), b,
                                   [](const Arc& arc, VertexId t) { return arc.target < t; });
  if (it == arcs.end() || it->target != b) return std::nullopt;
  return it->weight;
}

ShortestPathTree MetricGraph::search(std::span<const std::pair<VertexId, double>> seeds, double radius) const {
  const std::size_t n = vertex_count();
  std::vector<double> dist(n, kInfinity);
  std::vector<VertexId> parent(n, kNoVertex);
  std::vector<VertexId> order;
  using Entry = std::pair<double, VertexId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  for (const auto& [v, d0] : seeds) {
    if (d0 <= radius && d0 < dist[v]) {
      dist[v] = d0;
      queue.emplace(d0, v);
    }
  }
  std::vector<bool> done(n, false);
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (done[u] || d > dist[u]) continue;
    done[u] = true;
    order.push_back(u);
    for (const Arc& arc : neighbors(u)) {
      const double nd = d + arc.weight;
      if (nd > radius) continue;
      const VertexId w = arc.target;
      if (nd < dist[w]) {
        dist[w] = nd;
        parent[w] = u;
        queue.emplace(nd, w);
      } else if (nd == dist[w] && !done[w] && u < parent[w]) {
        parent[w] = u;
      }
    }
  }
  return ShortestPathTree(std::move(dist), std::move(parent), std::move(order));
}

ShortestPathTree MetricGraph::shortest_paths(VertexId source, double radius) const {
  if (source >= vertex_count()) raise(ErrorCode::InvalidArgument, "unknown source vertex");
  const std::pair<VertexId, double> seed{source, 0.0};
  return search({&seed, 1}, radius);
}

ShortestPathTree MetricGraph::shortest_paths(const GraphPoint& source, double radius) const {
  if (source.u == source.v) return shortest_paths(source.u, radius);
  const std::pair<VertexId, double> seeds[2] = {{source.u, source.offset},
                                                {source.v, source.length - source.offset}};
  return search(seeds, radius);
}

GraphPath MetricGraph::shortest_path(VertexId a, VertexId b) const {
  const ShortestPathTree to_b = shortest_paths(b);
  if (!to_b.reached(a)) {
    raise(ErrorCode::Disconnected, "no path between " + std::to_string(a) + " and " + std::to_string(b));
  }
  GraphPath path{to_b.distance(a), {a}};
  // Greedy walk: the lowest-id neighbour that stays on some shortest path
  // yields the lexicographically smallest geodesic.
  VertexId cur = a;
  while (cur != b) {
    const double here = to_b.distance(cur);
    const double tol = 1e-12 * std::max(1.0, here);
    VertexId next = to_b.parent(cur);
    for (const Arc& arc : neighbors(cur)) {
      const double there = to_b.distance(arc.target);
      if (there < here && std::abs(arc.weight + there - here) <= tol) {
        next = arc.target;
        break;
      }
    }
    path.vertices.push_back(next);
    cur = next;
  }
  return path;
}

double MetricGraph::distance(VertexId a, VertexId b) const {
  const ShortestPathTree t = shortest_paths(a);
  if (!t.reached(b)) {
    raise(ErrorCode::Disconnected, "no path between " + std::to_string(a) + " and " + std::to_string(b));
  }
  return t.distance(b);
}

double MetricGraph::distance(const GraphPoint& p, const GraphPoint& q) const {
  const ShortestPathTree t = shortest_paths(p);
  double d = t.distance(q);
  if (p.u != p.v && q.u != q.v) {
    if (p.u == q.u && p.v == q.v) d = std::min(d, std::abs(p.offset - q.offset));
    if (p.u == q.v && p.v == q.u) d = std::min(d, std::abs(p.offset - (q.length - q.offset)));
  }
  if (!(d < kInfinity)) raise(ErrorCode::Disconnected, "points lie in different components");
  return d;
}

GraphPoint MetricGraph::point_along(std::span<const VertexId> path, double s) const {
  if (path.empty()) raise(ErrorCode::InvalidArgument, "empty path");
  if (s <= 0.0) return GraphPoint::at(path.front());
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const double w = *edge_weight(path[i], path[i + 1]);
    if (s < w) return {path[i], path[i + 1], s, w};
    s -= w;
  }
  return GraphPoint::at(path.back());
}

MetricGraph MetricGraph::induced_subgraph(std::span<const VertexId> keep,
                                          std::vector<VertexId>* old_to_new) const {
  std::vector<VertexId> map(vertex_count(), kNoVertex);
  Builder builder;
  for (VertexId old : keep) {
    map[old] = positions_[old] ? builder.add_vertex(*positions_[old]) : builder.add_vertex();
  }
  for (const Edge& e : edges_) {
    if (map[e.a] != kNoVertex && map[e.b] != kNoVertex) builder.add_edge(map[e.a], map[e.b], e.weight);
  }
  if (old_to_new) *old_to_new = std::move(map);
  return std::move(builder).build();
}

MetricGraph MetricGraph::reweighted(std::span<const double> weights) const {
  if (weights.size() != edges_.size()) raise(ErrorCode::InvalidArgument, "weight count mismatch");
  Builder builder;
  for (const auto& p : positions_) p ? builder.add_vertex(*p) : builder.add_vertex();
  for (std::size_t i = 0; i < edges_.size(); ++i) builder.add_edge(edges_[i].a, edges_[i].b, weights[i]);
  return std::move(builder).build();
}

bool MetricGraph::is_connected() const {
  if (vertex_count() == 0) return true;
  return shortest_paths(VertexId{0}).settled().size() == vertex_count();
}

}  // namespace catlab::spaces
