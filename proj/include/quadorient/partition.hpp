#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "quadorient/mesh.hpp"

namespace quadorient {

enum class PartitionMethod { block, bfs };

PartitionMethod parse_partition_method(const std::string& name);
std::string to_string(PartitionMethod method);

/// Owner rank of every cell.
struct CellPartition {
  std::uint32_t processes = 1;
  std::vector<std::uint32_t> owner;

  friend bool operator==(const CellPartition&, const CellPartition&) = default;
};

/// Process grid px * py == P used by the block partitioner, or nullopt when
/// no factorisation divides the cell grid evenly. Among valid grids the one
/// with the fewest cut edges wins, ties going to the larger px.
std::optional<std::pair<std::uint32_t, std::uint32_t>> block_grid(
    const GridShape& grid, std::uint32_t processes);

/// True when `mesh` carries grid provenance and block_grid finds a layout.
bool block_partition_available(const QuadMesh& mesh, std::uint32_t processes);

/// block: contiguous nx/px by ny/py blocks, rank = by * px + bx; needs grid
/// provenance.
/// bfs: parts grown one after another by breadth-first search from a
/// peripheral cell of the unassigned remainder; the first |C| mod P parts get
/// ceil(|C|/P) cells and the rest floor(|C|/P). A cell is only taken when
/// the remainder stays connected, unless nothing else is reachable.
/// Throws Error(invalid_p).
CellPartition partition_cells(const QuadMesh& mesh, std::uint32_t processes,
                              PartitionMethod method);

/// Debug dump, one "<cell> <rank>\n" line per cell.
std::string write_partition(const CellPartition& partition);

/// What one rank sees of the mesh. Edge lists are ascending EdgeIds.
struct LocalDomain {
  std::uint32_t rank = 0;
  std::uint32_t processes = 1;
  std::vector<CellId> cells;
  /// Every edge of an owned cell, shared ones included.
  std::vector<EdgeId> edges;
  /// Interior edges whose other cell belongs to another rank.
  std::vector<EdgeId> shared;
  /// Remote rank across each shared edge, parallel to `shared`.
  std::vector<std::uint32_t> neighbor;
};

LocalDomain build_local_domain(const QuadMesh& mesh,
                               const CellPartition& partition,
                               std::uint32_t rank);

/// A connected run of opposite edges through owned cells.
struct Segment {
  /// Local edge indices.
  std::vector<std::uint32_t> members;
  /// Both ends inside owned cells: nothing to negotiate.
  bool closed = false;
  /// Shared slots of the segment's end edges, or -1 when an end is a mesh
  /// boundary edge (or the segment is closed).
  std::array<std::int32_t, 2> shared_ends{-1, -1};

  friend bool operator==(const Segment&, const Segment&) = default;
};

/// Per-rank negotiation state. Arrays indexed by "local index" run parallel
/// to `edges`; arrays indexed by "shared slot" run parallel to `shared`.
struct LocalState {
  std::uint32_t rank = 0;
  std::uint32_t processes = 1;

  std::vector<EdgeId> edges;
  /// Orientation of every local edge. Holds the local solution until
  /// finalize, then the agreed one.
  std::vector<RelOrientation> orient;
  /// Segment index l(e) of every local edge.
  std::vector<std::uint32_t> segment_of;
  std::vector<Segment> segments;

  std::vector<EdgeId> shared;
  /// Endpoints of each shared edge, for diagnostics.
  std::vector<EdgeKey> shared_keys;
  std::vector<std::uint32_t> shared_local;
  std::vector<std::uint32_t> neighbor;
  /// Shared slot at the other end of the segment, or -1.
  std::vector<std::int32_t> affects_edge;
  /// Meaningful where affects_edge is set.
  std::vector<RelOrientation> affects_orient;
  std::vector<std::int64_t> our_weight;
  std::vector<RelOrientation> our_orient;
  /// our_orient as left by local_preprocess.
  std::vector<RelOrientation> initial_orient;

  std::optional<std::uint32_t> local_index(EdgeId e) const;
  std::optional<std::uint32_t> shared_slot(EdgeId e) const;
  /// Global id of the paired shared edge, if any.
  std::optional<EdgeId> affects(EdgeId e) const;

  friend bool operator==(const LocalState&, const LocalState&) = default;
};

/// Orients the owned cells with the serial traversal, numbering segments in
/// the order their first edge (ascending EdgeId) is met. Segments whose two
/// ends are both shared link those ends through affects_edge and
/// affects_orient (`same` when the ends have equal local orientation).
/// Weights are processes * l(e) + rank. Throws MoebiusError (with rank) for
/// a conflict inside the owned cells.
LocalState local_preprocess(const QuadMesh& mesh, const LocalDomain& domain);

}  // namespace quadorient
