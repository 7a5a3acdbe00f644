#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "catlab/vec.hpp"

namespace catlab::harmonic {

enum class WeightScheme { Cotangent, Uniform };

struct MeshEdge {
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  double weight = 0.0;
};

struct MeshNeighbor {
  std::uint32_t vertex = 0;
  double weight = 0.0;
};

/// Triangulated disc in the plane. Triangles are stored counterclockwise.
/// Edge weights are (cot alpha + cot beta) / 2 for the cotangent scheme (one
/// term on boundary edges) and 1/sqrt(3) for the uniform scheme; vertex areas
/// are mixed Voronoi areas.
class DiscMesh {
 public:
  using Triangle = std::array<std::uint32_t, 3>;

  DiscMesh() = default;

  /// Concentric rings: ring k has 6k vertices on the circle of radius k / rings,
  /// plus the center, made Delaunay by edge flips so interior cotangent weights
  /// are nonnegative. rings = 40 gives 4921 vertices.
  static DiscMesh ring_disc(int rings, WeightScheme scheme = WeightScheme::Cotangent);

  /// Throws InvalidArgument for degenerate triangles, non-manifold edges or a
  /// boundary list that is not the boundary cycle of the triangulation.
  static DiscMesh from_parts(std::vector<Vec2> vertices, std::vector<Triangle> triangles,
                             std::vector<std::uint32_t> boundary, WeightScheme scheme = WeightScheme::Cotangent);

  std::size_t vertex_count() const noexcept { return vertices_.size(); }
  std::span<const Vec2> vertices() const noexcept { return vertices_; }
  Vec2 position(std::uint32_t v) const { return vertices_[v]; }
  std::span<const Triangle> triangles() const noexcept { return triangles_; }
  std::span<const std::uint32_t> boundary() const noexcept { return boundary_; }
  bool is_boundary(std::uint32_t v) const { return boundary_index_[v] >= 0; }
  /// Position of v in the boundary cycle, or -1.
  int boundary_index(std::uint32_t v) const { return boundary_index_[v]; }
  std::span<const std::uint32_t> interior_vertices() const noexcept { return interior_; }
  std::span<const MeshEdge> edges() const noexcept { return edges_; }
  std::span<const MeshNeighbor> neighbors(std::uint32_t v) const;
  double area(std::uint32_t v) const { return areas_[v]; }
  double triangle_area(std::size_t t) const;
  double total_area() const;
  WeightScheme scheme() const noexcept { return scheme_; }
  double max_edge_length() const noexcept { return max_edge_; }
  double min_weight() const;

 private:
  void build();

  std::vector<Vec2> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<std::uint32_t> boundary_;
  WeightScheme scheme_ = WeightScheme::Cotangent;

  std::vector<int> boundary_index_;
  std::vector<std::uint32_t> interior_;
  std::vector<MeshEdge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<MeshNeighbor> adjacency_;
  std::vector<double> areas_;
  double max_edge_ = 0.0;
};

// Mesh text format ('#' comments and blank lines ignored):
//   v <x> <y>           vertex, numbered in order of appearance from 0
//   t <i> <j> <k>       triangle
//   b <i1> <i2> ...     boundary cycle (may span several b lines)
std::string write_mesh(const DiscMesh& mesh);
/// Throws ParseError naming the line.
DiscMesh read_mesh(std::string_view text, WeightScheme scheme = WeightScheme::Cotangent);

}  // namespace catlab::harmonic
