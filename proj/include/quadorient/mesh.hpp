#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "quadorient/types.hpp"

namespace quadorient {

/// Provenance of a mesh made by gen_structured. Cells are numbered
/// row-major, cell (i, j) has index j * nx + i. Lost on shuffle.
struct GridShape {
  std::uint32_t nx = 0;
  std::uint32_t ny = 0;
  bool periodic_x = false;
  bool periodic_y = false;
  bool twist_x = false;

  friend bool operator==(const GridShape&, const GridShape&) = default;
};

/// Result of required_rel: the opposite edge and the relation a consistent
/// orientation has to satisfy, orient(e) ^ orient(opposite) == rel.
struct OppositeEdge {
  EdgeKey edge;
  RelOrientation rel = RelOrientation::same;

  friend bool operator==(const OppositeEdge&, const OppositeEdge&) = default;
};

/// Immutable quadrilateral mesh topology.
///
/// Edges are derived from the cells and sorted by (lo, hi); an EdgeId is the
/// position in that list. Every edge has one (boundary) or two (interior)
/// incident cells. Safe for concurrent reads once built.
class QuadMesh {
 public:
  QuadMesh() = default;

  /// Throws Error with degenerate_cell, vertex_out_of_range, non_manifold or
  /// duplicate_edge. duplicate_edge covers two cells sharing more than one
  /// edge, which is how two distinct edges with the same endpoints show up.
  static QuadMesh build(std::size_t num_vertices, std::vector<QuadCell> cells,
                        std::optional<GridShape> grid = std::nullopt);

  std::size_t num_vertices() const noexcept { return num_vertices_; }
  std::size_t num_cells() const noexcept { return cells_.size(); }
  std::size_t num_edges() const noexcept { return edges_.size(); }

  std::span<const QuadCell> cells() const noexcept { return cells_; }
  const QuadCell& cell(CellId c) const { return cells_.at(c); }

  std::span<const EdgeKey> edges() const noexcept { return edges_; }
  EdgeKey edge(EdgeId e) const { return edges_.at(e); }

  std::optional<EdgeId> find_edge(EdgeKey key) const;
  /// Throws Error(unknown_edge).
  EdgeId edge_id(EdgeKey key) const;

  std::span<const CellId> edge_cells(EdgeId e) const;
  bool is_boundary(EdgeId e) const { return edge_cells(e).size() == 1; }

  /// Edge ids of the cell by slot.
  const std::array<EdgeId, 4>& cell_edges(CellId c) const {
    return cell_edges_.at(c);
  }

  /// Slot of `e` within cell `c`, or -1.
  int slot_of(CellId c, EdgeId e) const;

  /// Opposite edge and required relation for the edge in `slot` of `c`.
  EdgeId opposite(CellId c, int slot) const {
    return cell_edges_[c][(slot + 2) % 4];
  }
  RelOrientation slot_rel(CellId c, int slot) const;

  const std::optional<GridShape>& grid() const noexcept { return grid_; }

  /// Topological equality: same vertex count and cell list. Provenance is
  /// ignored.
  friend bool operator==(const QuadMesh& a, const QuadMesh& b) {
    return a.num_vertices_ == b.num_vertices_ && a.cells_ == b.cells_;
  }

 private:
  std::size_t num_vertices_ = 0;
  std::vector<QuadCell> cells_;
  std::vector<EdgeKey> edges_;
  std::vector<std::array<EdgeId, 4>> cell_edges_;
  std::vector<std::array<CellId, 2>> edge_cells_;
  std::optional<GridShape> grid_;
};

/// Relation between slot `slot` of a cyclic quad and its opposite slot.
/// With (v0, v1, v2, v3) the cell rotated so that the edge is {v0, v1}, the
/// direction v0 -> v1 is parallel to v3 -> v2. The result is `same` iff both
/// of these are canonical or both are anti-canonical.
constexpr RelOrientation parallel_rel(const QuadCell& q, int slot) {
  const VertexId v0 = q[slot % 4];
  const VertexId v1 = q[(slot + 1) % 4];
  const VertexId v2 = q[(slot + 2) % 4];
  const VertexId v3 = q[(slot + 3) % 4];
  return rel_from_bool((v0 < v1) != (v3 < v2));
}

QuadMesh build_mesh(std::size_t num_vertices, std::vector<QuadCell> cells);

/// The edge of `cell` sharing no vertex with `e`. Throws Error(not_incident).
EdgeKey opposite_edge(const QuadMesh& mesh, CellId cell, EdgeKey e);

/// Throws Error(not_incident).
OppositeEdge required_rel(const QuadMesh& mesh, CellId cell, EdgeKey e);

/// Throws Error(unknown_edge).
std::span<const CellId> edge_cells(const QuadMesh& mesh, EdgeKey e);

}  // namespace quadorient
