#include "catlab/harmonic/disc_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "catlab/error.hpp"
#include "catlab/format.hpp"
#include "detail/text_lines.hpp"

namespace catlab::harmonic {

namespace {

double cot_at(Vec2 c, Vec2 a, Vec2 b) {
  const Vec2 u = a - c, v = b - c;
  return dot(u, v) / std::abs(cross(u, v));
}

double sq(Vec2 v) { return dot(v, v); }

// Lawson flips until every interior edge has cot alpha + cot beta >= 0.
void make_delaunay(const std::vector<Vec2>& p, std::vector<DiscMesh::Triangle>& triangles) {
  for (auto& t : triangles) {
    if (cross(p[t[1]] - p[t[0]], p[t[2]] - p[t[0]]) < 0.0) std::swap(t[1], t[2]);
  }
  struct Side {
    std::uint32_t lo, hi;
    std::size_t tri;
    std::uint32_t opposite;
  };
  for (bool flipped = true; flipped;) {
    flipped = false;
    std::vector<Side> sides;
    for (std::size_t t = 0; t < triangles.size(); ++t) {
      for (std::size_t k = 0; k < 3; ++k) {
        const auto a = triangles[t][(k + 1) % 3], b = triangles[t][(k + 2) % 3];
        sides.push_back({std::min(a, b), std::max(a, b), t, triangles[t][k]});
      }
    }
    std::sort(sides.begin(), sides.end(), [](const Side& x, const Side& y) {
      return x.lo != y.lo ? x.lo < y.lo : x.hi != y.hi ? x.hi < y.hi : x.tri < y.tri;
    });
    std::vector<bool> touched(triangles.size(), false);
    for (std::size_t i = 0; i + 1 < sides.size(); ++i) {
      const Side& s = sides[i];
      const Side& t = sides[i + 1];
      if (s.lo != t.lo || s.hi != t.hi || touched[s.tri] || touched[t.tri]) continue;
      const double c = cot_at(p[s.opposite], p[s.lo], p[s.hi]) + cot_at(p[t.opposite], p[s.lo], p[s.hi]);
      if (c >= -1e-12) continue;
      DiscMesh::Triangle x{s.opposite, t.opposite, s.lo}, y{t.opposite, s.opposite, s.hi};
      for (auto* tri : {&x, &y}) {
        if (cross(p[(*tri)[1]] - p[(*tri)[0]], p[(*tri)[2]] - p[(*tri)[0]]) < 0.0) std::swap((*tri)[1], (*tri)[2]);
      }
      triangles[s.tri] = x;
      triangles[t.tri] = y;
      touched[s.tri] = touched[t.tri] = true;
      flipped = true;
    }
  }
}

}  // namespace

DiscMesh DiscMesh::ring_disc(int rings, WeightScheme scheme) {
  if (rings < 1) raise(ErrorCode::InvalidArgument, "ring count must be positive");
  std::vector<Vec2> vertices{{0.0, 0.0}};
  auto ring_start = [](int k) { return static_cast<std::uint32_t>(k == 0 ? 0 : 1 + 3 * k * (k - 1)); };
  auto ring_size = [](int k) { return k == 0 ? 1 : 6 * k; };
  for (int k = 1; k <= rings; ++k) {
    const double radius = static_cast<double>(k) / rings;
    for (int j = 0; j < 6 * k; ++j) {
      const double th = 2.0 * std::numbers::pi * j / (6 * k);
      vertices.push_back({radius * std::cos(th), radius * std::sin(th)});
    }
  }
  std::vector<Triangle> triangles;
  for (int k = 1; k <= rings; ++k) {
    const int m = ring_size(k - 1), M = ring_size(k);
    const std::uint32_t in0 = ring_start(k - 1), out0 = ring_start(k);
    if (k == 1) {
      for (int j = 0; j < M; ++j) {
        triangles.push_back({0, out0 + static_cast<std::uint32_t>(j), out0 + static_cast<std::uint32_t>((j + 1) % M)});
      }
      continue;
    }
    // Merge the two rings by angle; (i + 1) / m vs (j + 1) / M compared exactly.
    int i = 0, j = 0;
    while (i < m || j < M) {
      const auto inner = [&](int x) { return in0 + static_cast<std::uint32_t>(x % m); };
      const auto outer = [&](int x) { return out0 + static_cast<std::uint32_t>(x % M); };
      const bool advance_inner = j == M || (i < m && static_cast<long>(i + 1) * M < static_cast<long>(j + 1) * m);
      if (advance_inner) {
        triangles.push_back({inner(i), outer(j), inner(i + 1)});
        ++i;
      } else {
        triangles.push_back({inner(i), outer(j), outer(j + 1)});
        ++j;
      }
    }
  }
  std::vector<std::uint32_t> boundary;
  for (int j = 0; j < ring_size(rings); ++j) boundary.push_back(ring_start(rings) + static_cast<std::uint32_t>(j));
  make_delaunay(vertices, triangles);
  return from_parts(std::move(vertices), std::move(triangles), std::move(boundary), scheme);
}

DiscMesh DiscMesh::from_parts(std::vector<Vec2> vertices, std::vector<Triangle> triangles,
                              std::vector<std::uint32_t> boundary, WeightScheme scheme) {
  DiscMesh mesh;
  mesh.vertices_ = std::move(vertices);
  mesh.triangles_ = std::move(triangles);
  mesh.boundary_ = std::move(boundary);
  mesh.scheme_ = scheme;
  mesh.build();
  return mesh;
}

void DiscMesh::build() {
  const std::size_t n = vertices_.size();
  if (triangles_.empty()) raise(ErrorCode::InvalidArgument, "mesh has no triangles");
  std::vector<bool> used(n, false);
  struct HalfEdge {
    std::uint32_t lo, hi;
    double cot;
  };
  std::vector<HalfEdge> half;
  half.reserve(3 * triangles_.size());
  areas_.assign(n, 0.0);
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    Triangle& tri = triangles_[t];
    for (auto v : tri) {
      if (v >= n) raise(ErrorCode::InvalidArgument, "triangle " + std::to_string(t) + " references unknown vertex");
      used[v] = true;
    }
    const double area2 = cross(vertices_[tri[1]] - vertices_[tri[0]], vertices_[tri[2]] - vertices_[tri[0]]);
    if (!(std::abs(area2) > 0.0)) raise(ErrorCode::InvalidArgument, "triangle " + std::to_string(t) + " is degenerate");
    if (area2 < 0.0) std::swap(tri[1], tri[2]);
    const double area = 0.5 * std::abs(area2);
    std::array<double, 3> cots{};
    for (int k = 0; k < 3; ++k) {
      const auto c = tri[static_cast<std::size_t>(k)];
      const auto a = tri[static_cast<std::size_t>((k + 1) % 3)];
      const auto b = tri[static_cast<std::size_t>((k + 2) % 3)];
      cots[static_cast<std::size_t>(k)] = cot_at(vertices_[c], vertices_[a], vertices_[b]);
      half.push_back({std::min(a, b), std::max(a, b), cots[static_cast<std::size_t>(k)]});
    }
    // Mixed Voronoi area.
    int obtuse = -1;
    for (int k = 0; k < 3; ++k) {
      if (cots[static_cast<std::size_t>(k)] < 0.0) obtuse = k;
    }
    for (int k = 0; k < 3; ++k) {
      const auto p = tri[static_cast<std::size_t>(k)];
      const auto q = tri[static_cast<std::size_t>((k + 1) % 3)];
      const auto r = tri[static_cast<std::size_t>((k + 2) % 3)];
      if (obtuse < 0) {
        areas_[p] += (sq(vertices_[r] - vertices_[p]) * cots[static_cast<std::size_t>((k + 1) % 3)] +
                      sq(vertices_[q] - vertices_[p]) * cots[static_cast<std::size_t>((k + 2) % 3)]) /
                     8.0;
      } else {
        areas_[p] += obtuse == k ? area / 2.0 : area / 4.0;
      }
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (!used[v]) raise(ErrorCode::InvalidArgument, "vertex " + std::to_string(v) + " belongs to no triangle");
  }
  std::sort(half.begin(), half.end(), [](const HalfEdge& x, const HalfEdge& y) {
    return x.lo != y.lo ? x.lo < y.lo : x.hi < y.hi;
  });
  edges_.clear();
  std::vector<std::pair<std::uint32_t, std::uint32_t>> boundary_edges;
  max_edge_ = 0.0;
  for (std::size_t i = 0; i < half.size();) {
    std::size_t j = i;
    double cot_sum = 0.0;
    while (j < half.size() && half[j].lo == half[i].lo && half[j].hi == half[i].hi) cot_sum += half[j++].cot;
    const std::size_t count = j - i;
    if (count > 2) raise(ErrorCode::InvalidArgument, "edge shared by more than two triangles");
    if (count == 1) boundary_edges.emplace_back(half[i].lo, half[i].hi);
    const double w = scheme_ == WeightScheme::Cotangent ? 0.5 * cot_sum : 1.0 / std::sqrt(3.0);
    edges_.push_back({half[i].lo, half[i].hi, w});
    max_edge_ = std::max(max_edge_, norm(vertices_[half[i].lo] - vertices_[half[i].hi]));
    i = j;
  }

  boundary_index_.assign(n, -1);
  const std::size_t nb = boundary_.size();
  if (nb < 3 || nb != boundary_edges.size()) raise(ErrorCode::InvalidArgument, "boundary cycle does not match mesh");
  for (std::size_t k = 0; k < nb; ++k) {
    const auto v = boundary_[k];
    if (v >= n || boundary_index_[v] >= 0) raise(ErrorCode::InvalidArgument, "boundary cycle is not simple");
    boundary_index_[v] = static_cast<int>(k);
    const auto w = boundary_[(k + 1) % nb];
    const std::pair<std::uint32_t, std::uint32_t> key{std::min(v, w), std::max(v, w)};
    if (!std::binary_search(boundary_edges.begin(), boundary_edges.end(), key)) {
      raise(ErrorCode::InvalidArgument, "boundary cycle uses a non-boundary edge");
    }
  }
  interior_.clear();
  for (std::uint32_t v = 0; v < n; ++v) {
    if (boundary_index_[v] < 0) interior_.push_back(v);
  }

  std::vector<std::size_t> degree(n, 0);
  for (const MeshEdge& e : edges_) {
    ++degree[e.a];
    ++degree[e.b];
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
  adjacency_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const MeshEdge& e : edges_) {
    adjacency_[fill[e.a]++] = {e.b, e.weight};
    adjacency_[fill[e.b]++] = {e.a, e.weight};
  }
  for (std::size_t v = 0; v < n; ++v) {
    std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
              adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]),
              [](const MeshNeighbor& x, const MeshNeighbor& y) { return x.vertex < y.vertex; });
  }
}

std::span<const MeshNeighbor> DiscMesh::neighbors(std::uint32_t v) const {
  return {adjacency_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

double DiscMesh::triangle_area(std::size_t t) const {
  const Triangle& tri = triangles_[t];
  return 0.5 * cross(vertices_[tri[1]] - vertices_[tri[0]], vertices_[tri[2]] - vertices_[tri[0]]);
}

double DiscMesh::total_area() const {
  double total = 0.0;
  for (std::size_t t = 0; t < triangles_.size(); ++t) total += triangle_area(t);
  return total;
}

double DiscMesh::min_weight() const {
  double w = std::numeric_limits<double>::infinity();
  for (const MeshEdge& e : edges_) w = std::min(w, e.weight);
  return w;
}

std::string write_mesh(const DiscMesh& mesh) {
  std::string out;
  for (Vec2 p : mesh.vertices()) out += "v " + format_double(p.x) + " " + format_double(p.y) + "\n";
  for (const auto& t : mesh.triangles()) {
    out += "t " + std::to_string(t[0]) + " " + std::to_string(t[1]) + " " + std::to_string(t[2]) + "\n";
  }
  out += "b";
  for (auto v : mesh.boundary()) out += " " + std::to_string(v);
  out += "\n";
  return out;
}

DiscMesh read_mesh(std::string_view text, WeightScheme scheme) {
  using detail::parse_fail;
  std::vector<Vec2> vertices;
  std::vector<DiscMesh::Triangle> triangles;
  std::vector<std::uint32_t> boundary;
  detail::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    const auto tok = detail::split_ws(line);
    if (tok[0] == "v") {
      if (tok.size() != 3) parse_fail(line_no, "expected 'v <x> <y>'");
      vertices.push_back({detail::number(line_no, tok[1]), detail::number(line_no, tok[2])});
    } else if (tok[0] == "t") {
      if (tok.size() != 4) parse_fail(line_no, "expected 't <i> <j> <k>'");
      triangles.push_back({detail::integer<std::uint32_t>(line_no, tok[1]),
                           detail::integer<std::uint32_t>(line_no, tok[2]),
                           detail::integer<std::uint32_t>(line_no, tok[3])});
    } else if (tok[0] == "b") {
      for (std::size_t k = 1; k < tok.size(); ++k) boundary.push_back(detail::integer<std::uint32_t>(line_no, tok[k]));
    } else {
      parse_fail(line_no, "unknown record '" + std::string(tok[0]) + "'");
    }
  });
  try {
    return DiscMesh::from_parts(std::move(vertices), std::move(triangles), std::move(boundary), scheme);
  } catch (const Error& e) {
    raise(ErrorCode::ParseError, std::string("invalid mesh: ") + e.what());
  }
}

}  // namespace catlab::harmonic
