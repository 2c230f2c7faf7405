#include "quadorient/negotiation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>

#include "quadorient/error.hpp"
#include "quadorient/generate.hpp"
#include "quadorient/orient_serial.hpp"
#include "quadorient/union_find.hpp"

namespace quadorient {

std::vector<RoundMessage> outgoing_messages(const LocalState& state) {
  std::map<std::uint32_t, RoundMessage> by_receiver;
  for (std::size_t k = 0; k < state.shared.size(); ++k) {
    RoundMessage& msg = by_receiver[state.neighbor[k]];
    msg.sender = state.rank;
    msg.receiver = state.neighbor[k];
    msg.proposals.push_back(
        {state.shared[k], state.our_orient[k], state.our_weight[k]});
  }
  std::vector<RoundMessage> out;
  out.reserve(by_receiver.size());
  for (auto& [receiver, msg] : by_receiver) out.push_back(std::move(msg));
  return out;
}

namespace {

[[noreturn]] void protocol_fail(const LocalState& state, const std::string& what) {
  throw Error(Errc::protocol,
              "rank " + std::to_string(state.rank) + ": " + what);
}

}  // namespace

bool negotiate_round(LocalState& state, std::span<const RoundMessage> incoming,
                     ConflictRule rule) {
  const std::size_t m = state.shared.size();
  std::vector<std::int64_t> their_weight(m);
  std::vector<RelOrientation> their_orient(m);
  std::vector<bool> covered(m, false);
  for (const RoundMessage& msg : incoming) {
    for (const EdgeProposal& p : msg.proposals) {
      const auto slot = state.shared_slot(p.edge);
      if (!slot || state.neighbor[*slot] != msg.sender) {
        protocol_fail(state, "unexpected proposal for edge " +
                                 std::to_string(p.edge) + " from rank " +
                                 std::to_string(msg.sender));
      }
      if (covered[*slot]) {
        protocol_fail(state, "edge " + std::to_string(p.edge) +
                                 " proposed twice");
      }
      covered[*slot] = true;
      their_weight[*slot] = p.weight;
      their_orient[*slot] = p.orient;
    }
  }
  if (std::find(covered.begin(), covered.end(), false) != covered.end()) {
    protocol_fail(state, "incoming messages miss a shared edge");
  }

  bool conflict = false;
  for (std::size_t k = 0; k < m; ++k) {
    if (state.our_weight[k] == their_weight[k]) {
      if (state.our_orient[k] != their_orient[k]) {
        throw MoebiusError(state.shared_keys[k], state.our_orient[k],
                           their_orient[k],
                           static_cast<int>(state.rank));
      }
    } else if (state.our_weight[k] < their_weight[k]) {
      state.our_weight[k] = their_weight[k];
      state.our_orient[k] = their_orient[k];
      if (const std::int32_t j = state.affects_edge[k]; j >= 0) {
        const RelOrientation propagated =
            state.affects_orient[k] ^ state.our_orient[k];
        if (state.our_orient[j] != propagated ||
            (rule == ConflictRule::propagation &&
             state.our_weight[j] != state.our_weight[k])) {
          conflict = true;
        }
        state.our_weight[j] = state.our_weight[k];
        state.our_orient[j] = propagated;
      }
    }
  }

  return conflict;
}

void finalize(LocalState& state) {
  for (const Segment& seg : state.segments) {
    std::optional<bool> flip;
    for (std::int32_t slot : seg.shared_ends) {
      if (slot < 0) continue;
      const bool changed =
          state.our_orient[slot] != state.initial_orient[slot];
      if (flip && *flip != changed) {
        throw MoebiusError(state.shared_keys[slot], state.initial_orient[slot],
                           state.our_orient[slot],
                           static_cast<int>(state.rank));
      }
      flip = changed;
    }
    if (flip.value_or(false)) {
      for (std::uint32_t i : seg.members) state.orient[i] = !state.orient[i];
    }
  }
}

namespace {

class Superstep {
 public:
  Superstep(std::vector<LocalState>& states, const RunOptions& options)
      : states_(states), options_(options) {
    order_.resize(states.size());
    std::iota(order_.begin(), order_.end(), std::uint32_t{0});
    if (options.schedule == Schedule::reversed) {
      std::reverse(order_.begin(), order_.end());
    }
  }

  /// Runs `step(rank)` for every rank in the configured order, collecting
  /// exceptions per rank. Returns the failed ranks' exceptions.
  template <typename Step>
  std::vector<std::exception_ptr> run(Step&& step) {
    if (options_.schedule == Schedule::shuffled) {
      SplitMix64 rng(options_.seed + 0x51ED2701ULL * ++round_);
      shuffle_in_place(order_, rng);
    }
    std::vector<std::exception_ptr> errors(states_.size());
    auto guarded = [&](std::uint32_t rank) {
      try {
        step(rank);
      } catch (...) {
        errors[rank] = std::current_exception();
      }
    };
    if (options_.schedule == Schedule::threaded && states_.size() > 1) {
      unsigned workers = options_.threads;
      if (workers == 0) workers = std::max(2u, std::thread::hardware_concurrency());
      workers = std::min<unsigned>(workers, static_cast<unsigned>(states_.size()));
      std::atomic<std::size_t> next{0};
      std::vector<std::jthread> pool;
      pool.reserve(workers);
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
          for (std::size_t i = next++; i < order_.size(); i = next++) {
            guarded(order_[i]);
          }
        });
      }
    } else {
      for (std::uint32_t rank : order_) guarded(rank);
    }
    return errors;
  }

 private:
  std::vector<LocalState>& states_;
  const RunOptions& options_;
  std::vector<std::uint32_t> order_;
  std::uint64_t round_ = 0;
};

/// Rethrows the lowest rank's exception, if any.
void synchronise(const std::vector<std::exception_ptr>& errors) {
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
}

}  // namespace

std::uint32_t max_segments_per_ribbon(const QuadMesh& mesh,
                                      const CellPartition& partition) {
  // Node 2e stands for edge e as held by the owner of its first cell, node
  // 2e + 1 for the owner of its second cell when that is another rank.
  auto node = [&](EdgeId e, std::uint32_t rank) {
    const auto cells = mesh.edge_cells(e);
    return partition.owner[cells[0]] == rank ? 2 * e : 2 * e + 1;
  };
  OrientedForest forest(2 * mesh.num_edges());
  for (CellId c = 0; c < mesh.num_cells(); ++c) {
    const std::uint32_t rank = partition.owner[c];
    const auto& e = mesh.cell_edges(c);
    forest.unite(node(e[0], rank), node(e[2], rank), RelOrientation::same);
    forest.unite(node(e[1], rank), node(e[3], rank), RelOrientation::same);
  }
  const RibbonPartition global = ribbons(mesh);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> ribbon_segment;
  for (EdgeId e = 0; e < mesh.num_edges(); ++e) {
    const auto cells = mesh.edge_cells(e);
    ribbon_segment.emplace_back(global.ribbon_of[e], forest.find(2 * e).root);
    if (cells.size() == 2 &&
        partition.owner[cells[0]] != partition.owner[cells[1]]) {
      ribbon_segment.emplace_back(global.ribbon_of[e],
                                  forest.find(2 * e + 1).root);
    }
  }
  std::sort(ribbon_segment.begin(), ribbon_segment.end());
  ribbon_segment.erase(
      std::unique(ribbon_segment.begin(), ribbon_segment.end()),
      ribbon_segment.end());
  std::uint32_t best = 0;
  for (std::size_t i = 0; i < ribbon_segment.size();) {
    std::size_t j = i;
    while (j < ribbon_segment.size() &&
           ribbon_segment[j].first == ribbon_segment[i].first) {
      ++j;
    }
    best = std::max(best, static_cast<std::uint32_t>(j - i));
    i = j;
  }
  return best;
}

ParallelResult run_parallel(const QuadMesh& mesh, std::uint32_t processes,
                            const RunOptions& options) {
  if (processes < 1) throw Error(Errc::invalid_p, "P must be at least 1");
  return run_parallel(mesh, partition_cells(mesh, processes, options.method),
                      options);
}

ParallelResult run_parallel(const QuadMesh& mesh,
                            const CellPartition& partition,
                            const RunOptions& options) {
  const std::uint32_t processes = partition.processes;
  if (processes < 1 || partition.owner.size() != mesh.num_cells()) {
    throw Error(Errc::invalid_p, "partition does not match the mesh");
  }

  std::vector<LocalState> states(processes);
  Superstep superstep(states, options);
  synchronise(superstep.run([&](std::uint32_t rank) {
    states[rank] = local_preprocess(mesh,
                                    build_local_domain(mesh, partition, rank));
  }));

  std::size_t total_segments = 0;
  for (const LocalState& s : states) total_segments += s.segments.size();
  // Every conflict round adopts at least one strictly larger weight, so this
  // is far above anything a correct run reaches.
  const std::size_t max_rounds = 4 * total_segments + 8;

  NegotiationTrace trace;
  trace.partition = partition;
  trace.k_observed = max_segments_per_ribbon(mesh, partition);

  bool conflict = true;
  while (conflict) {
    if (trace.rounds >= max_rounds) {
      throw Error(Errc::protocol, "negotiation did not terminate");
    }
    std::vector<std::vector<RoundMessage>> inbox(processes);
    for (const LocalState& s : states) {
      for (RoundMessage& msg : outgoing_messages(s)) {
        inbox[msg.receiver].push_back(std::move(msg));
      }
    }
    std::vector<char> flags(processes, 0);
    const auto errors = superstep.run([&](std::uint32_t rank) {
      flags[rank] = negotiate_round(states[rank], inbox[rank], options.rule);
    });
    ++trace.rounds;
    synchronise(errors);
    conflict = std::any_of(flags.begin(), flags.end(),
                           [](char f) { return f != 0; });
    trace.conflicts.push_back(conflict);
    if (options.on_round) options.on_round(trace.rounds, states);
  }

  synchronise(superstep.run(
      [&](std::uint32_t rank) { finalize(states[rank]); }));

  OrientationMap orientation(mesh.num_edges());
  for (const LocalState& s : states) {
    for (std::size_t i = 0; i < s.edges.size(); ++i) {
      const EdgeId e = s.edges[i];
      if (orientation.defined(e) && orientation[e] != s.orient[i]) {
        std::ostringstream os;
        os << "ranks disagree on shared edge " << mesh.edge(e)
           << " after negotiation";
        throw Error(Errc::protocol, os.str());
      }
      orientation.set(e, s.orient[i]);
    }
  }
  trace.states = std::move(states);
  return {std::move(orientation), std::move(trace)};
}

std::vector<RoundsRow> scaling_sweep(const QuadMesh& mesh,
                                     std::span<const std::uint32_t> processes,
                                     const RunOptions& options) {
  std::vector<RoundsRow> rows;
  rows.reserve(processes.size());
  for (std::uint32_t p : processes) {
    const ParallelResult result = run_parallel(mesh, p, options);
    rows.push_back({p, result.trace.rounds});
  }
  return rows;
}

double log_log_slope(std::span<const RoundsRow> rows) {
  if (rows.size() < 2) {
    throw Error(Errc::empty_input, "slope needs at least two rows");
  }
  double sx = 0, sy = 0;
  for (const RoundsRow& r : rows) {
    sx += std::log(static_cast<double>(r.processes));
    sy += std::log(static_cast<double>(r.rounds));
  }
  const double n = static_cast<double>(rows.size());
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0, sxy = 0;
  for (const RoundsRow& r : rows) {
    const double dx = std::log(static_cast<double>(r.processes)) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(static_cast<double>(r.rounds)) - my);
  }
  if (sxx == 0) throw Error(Errc::empty_input, "slope needs two distinct P");
  return sxy / sxx;
}

}  // namespace quadorient
