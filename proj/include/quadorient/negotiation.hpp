#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "quadorient/io.hpp"
#include "quadorient/mesh.hpp"
#include "quadorient/orientation.hpp"
#include "quadorient/partition.hpp"

namespace quadorient {

/// Proposal for one shared edge as sent at the start of a round.
struct EdgeProposal {
  EdgeId edge = 0;
  RelOrientation orient = RelOrientation::same;
  std::int64_t weight = 0;

  friend bool operator==(const EdgeProposal&, const EdgeProposal&) = default;
};

/// Everything `sender` shares with `receiver`, ascending by edge.
struct RoundMessage {
  std::uint32_t sender = 0;
  std::uint32_t receiver = 0;
  std::vector<EdgeProposal> proposals;
};

/// When a round reports a conflict.
enum class ConflictRule {
  /// Only when propagation through a segment flips the paired edge. Stops
  /// as soon as no flip happens, which can leave lighter segments unaware of
  /// their ribbon's heaviest weight.
  flip_only,
  /// Whenever propagation carries a new weight to the paired edge, flipped
  /// or not: the neighbour across that edge has not seen it yet.
  propagation,
};

/// Messages `state` sends this round, one per neighbour rank, ascending.
std::vector<RoundMessage> outgoing_messages(const LocalState& state);

/// One negotiation pass over the shared edges in ascending order, updating
/// `state` in place so that propagation to a later edge is seen when the
/// loop reaches it. Equal weights with unequal orientations throw
/// MoebiusError; the lower weight adopts the remote weight and orientation
/// and pushes them through affects_edge. Returns the local conflict flag.
/// Throws Error(protocol) when `incoming` does not cover exactly the shared
/// edges, each from its neighbour.
bool negotiate_round(LocalState& state, std::span<const RoundMessage> incoming,
                     ConflictRule rule = ConflictRule::propagation);

/// Flips every segment whose shared end changed orientation during
/// negotiation. Throws MoebiusError if the two ends of a segment disagree.
void finalize(LocalState& state);

/// Execution order of the per-rank steps inside a superstep.
enum class Schedule { sequential, reversed, shuffled, threaded };

struct RunOptions {
  PartitionMethod method = PartitionMethod::bfs;
  Schedule schedule = Schedule::sequential;
  /// Seeds the rank order for Schedule::shuffled.
  std::uint64_t seed = 0;
  /// Worker count for Schedule::threaded; 0 picks hardware concurrency.
  unsigned threads = 0;
  ConflictRule rule = ConflictRule::propagation;
  /// Called after every superstep with the post-round rank states.
  std::function<void(std::uint32_t round, std::span<const LocalState>)>
      on_round;
};

struct NegotiationTrace {
  /// While-loop iterations, the final conflict-free one included.
  std::uint32_t rounds = 0;
  /// Reduced conflict flag of each round.
  std::vector<bool> conflicts;
  /// Rank states after finalisation.
  std::vector<LocalState> states;
  /// Largest number of local segments over the global ribbons.
  std::uint32_t k_observed = 0;
  CellPartition partition;

  friend bool operator==(const NegotiationTrace&,
                         const NegotiationTrace&) = default;
};

struct ParallelResult {
  OrientationMap orientation;
  NegotiationTrace trace;
};

/// Partition, local preprocessing, supersteps of exchange / negotiate /
/// OR-reduce until no rank reports a conflict, then finalisation and merge.
/// A MoebiusError from any rank aborts the run at the next synchronisation
/// point; the lowest aborting rank's error is rethrown. Throws
/// Error(protocol) if two ranks end up disagreeing on a shared edge.
ParallelResult run_parallel(const QuadMesh& mesh, std::uint32_t processes,
                            const RunOptions& options = {});
ParallelResult run_parallel(const QuadMesh& mesh,
                            const CellPartition& partition,
                            const RunOptions& options = {});

/// Max over global ribbons of the number of maximal runs of opposite edges
/// through cells of a single owner.
std::uint32_t max_segments_per_ribbon(const QuadMesh& mesh,
                                      const CellPartition& partition);

/// One (P, rounds) row per process count, in the given order.
std::vector<RoundsRow> scaling_sweep(const QuadMesh& mesh,
                                     std::span<const std::uint32_t> processes,
                                     const RunOptions& options = {});

/// Least-squares slope of log(rounds) against log(P). Needs two distinct P.
double log_log_slope(std::span<const RoundsRow> rows);

}  // namespace quadorient
