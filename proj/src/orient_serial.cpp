#include "quadorient/orient_serial.hpp"

#include <algorithm>
#include <utility>

#include "quadorient/error.hpp"

namespace quadorient {

OrientationMap orient_serial(const QuadMesh& mesh, SerialStats* stats) {
  OrientationMap orientation(mesh.num_edges());
  SerialStats local;
  std::vector<std::pair<EdgeId, RelOrientation>> pending;

  for (EdgeId seed = 0; seed < mesh.num_edges(); ++seed) {
    ++local.orient_calls;
    // A visited seed already carries the orientation its ribbon dictates;
    // re-seeding it with `same` would abort on the first flipped ribbon edge.
    if (orientation.defined(seed)) continue;

    pending.emplace_back(seed, RelOrientation::same);
    while (!pending.empty()) {
      const auto [e, o] = pending.back();
      pending.pop_back();
      if (orientation.defined(e)) {
        if (orientation[e] != o) {
          throw MoebiusError(mesh.edge(e), orientation[e], o);
        }
        continue;
      }
      orientation.set(e, o);
      ++local.edges_visited;
      for (CellId c : mesh.edge_cells(e)) {
        const int slot = mesh.slot_of(c, e);
        pending.emplace_back(mesh.opposite(c, slot), o ^ mesh.slot_rel(c, slot));
        ++local.orient_calls;
      }
    }
  }
  if (stats) *stats = local;
  return orientation;
}

RibbonPartition ribbons(const QuadMesh& mesh) {
  constexpr auto kUnassigned = ~std::uint32_t{0};
  RibbonPartition out;
  out.ribbon_of.assign(mesh.num_edges(), kUnassigned);
  std::vector<EdgeId> stack;

  for (EdgeId seed = 0; seed < mesh.num_edges(); ++seed) {
    if (out.ribbon_of[seed] != kUnassigned) continue;
    const auto id = static_cast<std::uint32_t>(out.ribbons.size());
    std::vector<EdgeId> members;
    out.ribbon_of[seed] = id;
    stack.push_back(seed);
    while (!stack.empty()) {
      const EdgeId e = stack.back();
      stack.pop_back();
      members.push_back(e);
      for (CellId c : mesh.edge_cells(e)) {
        const EdgeId opp = mesh.opposite(c, mesh.slot_of(c, e));
        if (out.ribbon_of[opp] == kUnassigned) {
          out.ribbon_of[opp] = id;
          stack.push_back(opp);
        }
      }
    }
    std::sort(members.begin(), members.end());
    out.ribbons.push_back(std::move(members));
  }
  return out;
}

}  // namespace quadorient
