#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "quadorient/mesh.hpp"
#include "quadorient/orient_serial.hpp"
#include "quadorient/orientation.hpp"
#include "quadorient/partition.hpp"

namespace quadorient {

/// A cell whose opposite pair (`pair` 0: slots 0/2, 1: slots 1/3) breaks
/// orient(edge) ^ orient(opposite) == required.
struct Violation {
  CellId cell = 0;
  int pair = 0;
  EdgeKey edge;
  EdgeKey opposite;
  RelOrientation required = RelOrientation::same;

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Every violated (cell, pair); empty iff the orientation is consistent.
/// Looks only at the cells and the flags. Throws Error(missing_edge) when
/// the map does not define every edge.
std::vector<Violation> check_consistent(const QuadMesh& mesh,
                                        const OrientationMap& orientation);

/// Complements exactly the edges of `ribbon`. Throws Error(not_a_ribbon)
/// unless the set equals one class of `partition`.
OrientationMap flip_ribbon(const OrientationMap& orientation,
                           const RibbonPartition& partition,
                           std::span<const EdgeId> ribbon);

enum class Verdict { success, moebius, error };

std::string to_string(Verdict v);

struct VerdictEntry {
  std::string algorithm;
  std::uint32_t processes = 1;
  std::optional<PartitionMethod> method;
  Verdict verdict = Verdict::error;
  /// check_consistent result on success, false otherwise.
  bool consistent = false;
  std::string message;
};

struct VerdictReport {
  std::vector<VerdictEntry> entries;

  /// All entries share one verdict.
  bool agree() const;
  /// Every successful entry produced a consistent orientation.
  bool all_consistent() const;
  Verdict verdict() const { return entries.front().verdict; }
};

/// Runs orient_serial, orient_unionfind and run_parallel for every P with
/// the bfs partitioner, plus block where the mesh allows it.
VerdictReport compare_verdicts(const QuadMesh& mesh,
                               std::span<const std::uint32_t> processes);
VerdictReport compare_verdicts(const QuadMesh& mesh);

}  // namespace quadorient
