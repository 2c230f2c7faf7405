#pragma once

#include <cstdint>
#include <vector>

#include "quadorient/mesh.hpp"
#include "quadorient/orientation.hpp"

namespace quadorient {

/// Counters of one orient_serial run.
struct SerialStats {
  /// Edges whose visited flag went from false to true.
  std::uint64_t edges_visited = 0;
  /// Orient invocations: one per edge from the outer loop plus one per
  /// opposite edge reached through an incident cell.
  std::uint64_t orient_calls = 0;
};

/// Depth-first propagation of opposite-edge constraints with an explicit
/// stack. Edges are seeded in ascending EdgeId order; the first edge of each
/// ribbon gets `same`. Throws MoebiusError when propagation reaches an
/// already visited edge with the other orientation.
OrientationMap orient_serial(const QuadMesh& mesh, SerialStats* stats = nullptr);

/// Equivalence classes of the transitive closure of "opposite in some cell".
struct RibbonPartition {
  /// Classes sorted by their smallest edge; edges ascending within a class.
  std::vector<std::vector<EdgeId>> ribbons;
  /// Class index of every edge.
  std::vector<std::uint32_t> ribbon_of;

  std::size_t size() const noexcept { return ribbons.size(); }

  friend bool operator==(const RibbonPartition&,
                         const RibbonPartition&) = default;
};

RibbonPartition ribbons(const QuadMesh& mesh);

}  // namespace quadorient
