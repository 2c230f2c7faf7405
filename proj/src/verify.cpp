#include "quadorient/verify.hpp"

#include <algorithm>
#include <functional>

#include "quadorient/error.hpp"
#include "quadorient/negotiation.hpp"
#include "quadorient/union_find.hpp"

namespace quadorient {

std::vector<Violation> check_consistent(const QuadMesh& mesh,
                                        const OrientationMap& orientation) {
  if (orientation.size() != mesh.num_edges() || !orientation.complete()) {
    throw Error(Errc::missing_edge,
                "orientation does not define every edge of the mesh");
  }
  std::vector<Violation> out;
  for (CellId c = 0; c < mesh.num_cells(); ++c) {
    const QuadCell& q = mesh.cell(c);
    const auto& edges = mesh.cell_edges(c);
    for (int pair = 0; pair < 2; ++pair) {
      const RelOrientation required = parallel_rel(q, pair);
      const EdgeId a = edges[pair];
      const EdgeId b = edges[pair + 2];
      if ((orientation[a] ^ orientation[b]) != required) {
        out.push_back({c, pair, mesh.edge(a), mesh.edge(b), required});
      }
    }
  }
  return out;
}

OrientationMap flip_ribbon(const OrientationMap& orientation,
                           const RibbonPartition& partition,
                           std::span<const EdgeId> ribbon) {
  std::vector<EdgeId> edges(ribbon.begin(), ribbon.end());
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  if (edges.empty() || edges.back() >= partition.ribbon_of.size() ||
      partition.ribbons[partition.ribbon_of[edges.front()]] != edges) {
    throw Error(Errc::not_a_ribbon,
                "edge set is not an equivalence class of the mesh");
  }
  OrientationMap out = orientation;
  for (EdgeId e : edges) out.toggle(e);
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::success: return "success";
    case Verdict::moebius: return "moebius";
    case Verdict::error: return "error";
  }
  return "unknown";
}

bool VerdictReport::agree() const {
  return std::all_of(entries.begin(), entries.end(), [&](const auto& e) {
    return e.verdict == entries.front().verdict;
  });
}

bool VerdictReport::all_consistent() const {
  return std::all_of(entries.begin(), entries.end(), [](const auto& e) {
    return e.verdict != Verdict::success || e.consistent;
  });
}

namespace {

VerdictEntry evaluate(const QuadMesh& mesh, std::string algorithm,
                      std::uint32_t processes,
                      std::optional<PartitionMethod> method,
                      const std::function<OrientationMap()>& run) {
  VerdictEntry entry;
  entry.algorithm = std::move(algorithm);
  entry.processes = processes;
  entry.method = method;
  try {
    const OrientationMap o = run();
    entry.verdict = Verdict::success;
    entry.consistent = check_consistent(mesh, o).empty();
  } catch (const MoebiusError& err) {
    entry.verdict = Verdict::moebius;
    entry.message = err.what();
  } catch (const std::exception& err) {
    entry.verdict = Verdict::error;
    entry.message = err.what();
  }
  return entry;
}

}  // namespace

VerdictReport compare_verdicts(const QuadMesh& mesh,
                               std::span<const std::uint32_t> processes) {
  VerdictReport report;
  report.entries.push_back(evaluate(mesh, "serial", 1, std::nullopt,
                                    [&] { return orient_serial(mesh); }));
  report.entries.push_back(evaluate(mesh, "unionfind", 1, std::nullopt,
                                    [&] { return orient_unionfind(mesh); }));
  for (std::uint32_t p : processes) {
    for (PartitionMethod method : {PartitionMethod::bfs, PartitionMethod::block}) {
      if (method == PartitionMethod::block &&
          !block_partition_available(mesh, p)) {
        continue;
      }
      RunOptions options;
      options.method = method;
      report.entries.push_back(
          evaluate(mesh, "parallel", p, method,
                   [&] { return run_parallel(mesh, p, options).orientation; }));
    }
  }
  return report;
}

VerdictReport compare_verdicts(const QuadMesh& mesh) {
  static constexpr std::uint32_t kDefault[] = {1, 2, 4};
  return compare_verdicts(mesh, kDefault);
}

}  // namespace quadorient
