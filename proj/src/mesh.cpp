#include "quadorient/mesh.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "quadorient/error.hpp"

namespace quadorient {

namespace {

struct SlotEntry {
  EdgeKey key;
  CellId cell;
  std::uint8_t slot;
};

template <typename... Args>
[[noreturn]] void fail(Errc code, const Args&... args) {
  std::ostringstream os;
  (os << ... << args);
  throw Error(code, os.str());
}

}  // namespace

QuadMesh QuadMesh::build(std::size_t num_vertices, std::vector<QuadCell> cells,
                         std::optional<GridShape> grid) {
  QuadMesh mesh;
  mesh.num_vertices_ = num_vertices;
  mesh.grid_ = grid;

  std::vector<SlotEntry> slots;
  slots.reserve(cells.size() * 4);
  for (CellId c = 0; c < cells.size(); ++c) {
    const QuadCell& q = cells[c];
    for (int i = 0; i < 4; ++i) {
      if (q[i] >= num_vertices) {
        fail(Errc::vertex_out_of_range, "cell ", c, " references vertex ",
             q[i], " but the mesh has ", num_vertices, " vertices");
      }
      for (int j = i + 1; j < 4; ++j) {
        if (q[i] == q[j]) {
          fail(Errc::degenerate_cell, "cell ", c, " repeats vertex ", q[i]);
        }
      }
    }
    for (std::uint8_t s = 0; s < 4; ++s) {
      slots.push_back({EdgeKey::from(q[s], q[(s + 1) % 4]), c, s});
    }
  }
  std::sort(slots.begin(), slots.end(),
            [](const SlotEntry& a, const SlotEntry& b) {
              if (a.key != b.key) return a.key < b.key;
              return a.cell < b.cell;
            });

  mesh.cell_edges_.assign(cells.size(), {kNoEdge, kNoEdge, kNoEdge, kNoEdge});
  std::vector<std::pair<CellId, CellId>> shared_pairs;
  for (std::size_t i = 0; i < slots.size();) {
    std::size_t j = i;
    while (j < slots.size() && slots[j].key == slots[i].key) ++j;
    if (j - i > 2) {
      fail(Errc::non_manifold, "edge ", slots[i].key, " has ", j - i,
           " incident cells");
    }
    const auto e = static_cast<EdgeId>(mesh.edges_.size());
    mesh.edges_.push_back(slots[i].key);
    std::array<CellId, 2> incident{slots[i].cell, kNoCell};
    if (j - i == 2) {
      incident[1] = slots[i + 1].cell;
      shared_pairs.emplace_back(incident[0], incident[1]);
    }
    mesh.edge_cells_.push_back(incident);
    for (std::size_t k = i; k < j; ++k) {
      mesh.cell_edges_[slots[k].cell][slots[k].slot] = e;
    }
    i = j;
  }

  std::sort(shared_pairs.begin(), shared_pairs.end());
  const auto dup = std::adjacent_find(shared_pairs.begin(), shared_pairs.end());
  if (dup != shared_pairs.end()) {
    fail(Errc::duplicate_edge, "cells ", dup->first, " and ", dup->second,
         " share more than one edge");
  }

  mesh.cells_ = std::move(cells);
  return mesh;
}

std::optional<EdgeId> QuadMesh::find_edge(EdgeKey key) const {
  const auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || *it != key) return std::nullopt;
  return static_cast<EdgeId>(it - edges_.begin());
}

EdgeId QuadMesh::edge_id(EdgeKey key) const {
  if (auto e = find_edge(key)) return *e;
  fail(Errc::unknown_edge, "edge ", key, " is not in the mesh");
}

std::span<const CellId> QuadMesh::edge_cells(EdgeId e) const {
  const auto& incident = edge_cells_.at(e);
  return {incident.data(), incident[1] == kNoCell ? 1u : 2u};
}

int QuadMesh::slot_of(CellId c, EdgeId e) const {
  const auto& ce = cell_edges_.at(c);
  for (int s = 0; s < 4; ++s) {
    if (ce[s] == e) return s;
  }
  return -1;
}

RelOrientation QuadMesh::slot_rel(CellId c, int slot) const {
  return parallel_rel(cells_[c], slot);
}

QuadMesh build_mesh(std::size_t num_vertices, std::vector<QuadCell> cells) {
  return QuadMesh::build(num_vertices, std::move(cells));
}

namespace {

int incident_slot(const QuadMesh& mesh, CellId cell, EdgeKey e) {
  if (cell >= mesh.num_cells()) {
    fail(Errc::not_incident, "cell ", cell, " does not exist");
  }
  const QuadCell& q = mesh.cell(cell);
  for (int s = 0; s < 4; ++s) {
    if (EdgeKey::from(q[s], q[(s + 1) % 4]) == e) return s;
  }
  fail(Errc::not_incident, "edge ", e, " is not an edge of cell ", cell);
}

}  // namespace

EdgeKey opposite_edge(const QuadMesh& mesh, CellId cell, EdgeKey e) {
  const int s = incident_slot(mesh, cell, e);
  const QuadCell& q = mesh.cell(cell);
  return EdgeKey::from(q[(s + 2) % 4], q[(s + 3) % 4]);
}

OppositeEdge required_rel(const QuadMesh& mesh, CellId cell, EdgeKey e) {
  const int s = incident_slot(mesh, cell, e);
  const QuadCell& q = mesh.cell(cell);
  return {EdgeKey::from(q[(s + 2) % 4], q[(s + 3) % 4]), parallel_rel(q, s)};
}

std::span<const CellId> edge_cells(const QuadMesh& mesh, EdgeKey e) {
  return mesh.edge_cells(mesh.edge_id(e));
}

}  // namespace quadorient
