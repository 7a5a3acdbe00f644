#include "catlab/spaces/grid_disc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "catlab/error.hpp"

namespace catlab::spaces {

namespace {

void check_factor(std::span<const double> factor) {
  for (std::size_t k = 0; k < factor.size(); ++k) {
    if (!(factor[k] > 0.0) || !std::isfinite(factor[k])) {
      raise(ErrorCode::NonPositiveFactor, "factor at node " + std::to_string(k) + " is not a positive finite number");
    }
  }
}

constexpr int kStencil[8][2] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}};

}  // namespace

GridDisc::GridDisc(double h, double r_dom, std::vector<GridNode> nodes, std::vector<double> factor)
    : h_(h), r_dom_(r_dom) {
  if (!(h > 0.0) || !std::isfinite(h)) raise(ErrorCode::InvalidArgument, "grid spacing must be positive");
  if (!(r_dom > 0.0)) raise(ErrorCode::InvalidArgument, "domain radius must be positive");
  if (nodes.size() != factor.size()) raise(ErrorCode::InvalidArgument, "node and factor counts differ");
  check_factor(factor);

  std::vector<std::size_t> order(nodes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return nodes[a].j != nodes[b].j ? nodes[a].j < nodes[b].j : nodes[a].i < nodes[b].i;
  });
  nodes_.reserve(nodes.size());
  factor_.reserve(nodes.size());
  for (std::size_t k : order) {
    nodes_.push_back(nodes[k]);
    factor_.push_back(factor[k]);
  }
  extent_ = static_cast<int>(std::ceil(r_dom / h)) + 1;
  for (const GridNode& n : nodes_) extent_ = std::max({extent_, std::abs(n.i), std::abs(n.j)});
  const std::size_t side = 2 * static_cast<std::size_t>(extent_) + 1;
  lookup_.assign(side * side, -1);
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    const auto slot = static_cast<std::size_t>(nodes_[k].j + extent_) * side +
                      static_cast<std::size_t>(nodes_[k].i + extent_);
    if (lookup_[slot] >= 0) raise(ErrorCode::InvalidArgument, "duplicate grid node");
    lookup_[slot] = static_cast<std::int32_t>(k);
  }
}

GridDisc GridDisc::sample(double h, double r_dom, const Factor& factor) {
  if (!(h > 0.0) || !(r_dom > 0.0)) raise(ErrorCode::InvalidArgument, "grid spacing and radius must be positive");
  const int m = static_cast<int>(std::floor(r_dom / h + 1e-9));
  const double r2 = r_dom * r_dom * (1.0 + 1e-12);
  std::vector<GridNode> nodes;
  std::vector<double> values;
  for (int j = -m; j <= m; ++j) {
    for (int i = -m; i <= m; ++i) {
      const double x = i * h, y = j * h;
      if (x * x + y * y > r2) continue;
      nodes.push_back({i, j});
      values.push_back(factor(x, y));
    }
  }
  return GridDisc(h, r_dom, std::move(nodes), std::move(values));
}

GridDisc GridDisc::from_nodes(double h, double r_dom, std::vector<GridNode> nodes, std::vector<double> factor) {
  return GridDisc(h, r_dom, std::move(nodes), std::move(factor));
}

double GridDisc::factor_min() const {
  return factor_.empty() ? 0.0 : *std::min_element(factor_.begin(), factor_.end());
}

double GridDisc::factor_max() const {
  return factor_.empty() ? 0.0 : *std::max_element(factor_.begin(), factor_.end());
}

std::optional<std::size_t> GridDisc::find(int i, int j) const {
  if (std::abs(i) > extent_ || std::abs(j) > extent_) return std::nullopt;
  const std::size_t side = 2 * static_cast<std::size_t>(extent_) + 1;
  const std::int32_t k = lookup_[static_cast<std::size_t>(j + extent_) * side + static_cast<std::size_t>(i + extent_)];
  if (k < 0) return std::nullopt;
  return static_cast<std::size_t>(k);
}

std::size_t GridDisc::nearest(double x, double y) const {
  const int i = static_cast<int>(std::lround(x / h_));
  const int j = static_cast<int>(std::lround(y / h_));
  if (auto k = find(i, j)) return *k;
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    const Vec2 p = position(k);
    const double d = std::hypot(p.x - x, p.y - y);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

bool GridDisc::is_interior(std::size_t k) const {
  const GridNode n = nodes_[k];
  for (const auto& s : kStencil) {
    if (!find(n.i + s[0], n.j + s[1])) return false;
  }
  return true;
}

std::vector<std::size_t> GridDisc::interior_nodes() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    if (is_interior(k)) out.push_back(k);
  }
  return out;
}

GridDisc GridDisc::with_factor(std::vector<double> factor) const {
  return GridDisc(h_, r_dom_, nodes_, std::move(factor));
}

GridDisc GridDisc::restricted(std::span<const std::size_t> keep) const {
  std::vector<GridNode> nodes;
  std::vector<double> values;
  nodes.reserve(keep.size());
  values.reserve(keep.size());
  for (std::size_t k : keep) {
    nodes.push_back(nodes_.at(k));
    values.push_back(factor_.at(k));
  }
  return GridDisc(h_, r_dom_, std::move(nodes), std::move(values));
}

MetricGraph grid_to_graph(const GridDisc& grid) {
  const auto factor = grid.factor();
  for (double phi : factor) {
    if (!(phi > 0.0) || !std::isfinite(phi)) raise(ErrorCode::NonPositiveFactor, "grid factor must be positive");
  }
  MetricGraph::Builder builder;
  for (std::size_t k = 0; k < grid.node_count(); ++k) builder.add_vertex(grid.position(k));
  const double h = grid.spacing();
  const double diag = h * std::sqrt(2.0);
  // Forward half of the stencil so each undirected edge is added once.
  constexpr int forward[4][2] = {{1, 0}, {-1, 1}, {0, 1}, {1, 1}};
  for (std::size_t k = 0; k < grid.node_count(); ++k) {
    const GridNode n = grid.nodes()[k];
    for (const auto& s : forward) {
      const auto other = grid.find(n.i + s[0], n.j + s[1]);
      if (!other) continue;
      const double len = (s[0] != 0 && s[1] != 0) ? diag : h;
      builder.add_edge(static_cast<VertexId>(k), static_cast<VertexId>(*other),
                       len * 0.5 * (factor[k] + factor[*other]));
    }
  }
  return std::move(builder).build();
}

}  // namespace catlab::spaces
