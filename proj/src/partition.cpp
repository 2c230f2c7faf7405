#include "quadorient/partition.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <set>
#include <sstream>

#include "quadorient/error.hpp"

namespace quadorient {

PartitionMethod parse_partition_method(const std::string& name) {
  if (name == "block") return PartitionMethod::block;
  if (name == "bfs") return PartitionMethod::bfs;
  throw Error(Errc::invalid_spec, "unknown partitioner '" + name + "'");
}

std::string to_string(PartitionMethod method) {
  return method == PartitionMethod::block ? "block" : "bfs";
}

std::optional<std::pair<std::uint32_t, std::uint32_t>> block_grid(
    const GridShape& grid, std::uint32_t processes) {
  std::optional<std::pair<std::uint32_t, std::uint32_t>> best;
  std::uint64_t best_cut = std::numeric_limits<std::uint64_t>::max();
  for (std::uint32_t px = processes; px >= 1; --px) {
    if (processes % px != 0) continue;
    const std::uint32_t py = processes / px;
    if (grid.nx % px != 0 || grid.ny % py != 0) continue;
    const std::uint64_t cut = std::uint64_t{px - 1} * grid.ny +
                              std::uint64_t{py - 1} * grid.nx;
    if (cut < best_cut) {
      best_cut = cut;
      best = std::pair{px, py};
    }
  }
  return best;
}

bool block_partition_available(const QuadMesh& mesh, std::uint32_t processes) {
  return processes >= 1 && mesh.grid() &&
         block_grid(*mesh.grid(), processes).has_value();
}

namespace {

constexpr std::uint32_t kFree = std::numeric_limits<std::uint32_t>::max();
constexpr std::uint32_t kBlocked = kFree - 1;

CellPartition partition_block(const QuadMesh& mesh, std::uint32_t processes) {
  if (!mesh.grid()) {
    throw Error(Errc::invalid_p,
                "block partitioning needs a structured grid mesh");
  }
  const GridShape& grid = *mesh.grid();
  const auto layout = block_grid(grid, processes);
  if (!layout) {
    throw Error(Errc::invalid_p,
                "no process grid px * py = " + std::to_string(processes) +
                    " divides the " + std::to_string(grid.nx) + " x " +
                    std::to_string(grid.ny) + " cell grid");
  }
  const auto [px, py] = *layout;
  const std::uint32_t bw = grid.nx / px;
  const std::uint32_t bh = grid.ny / py;
  CellPartition out{processes, std::vector<std::uint32_t>(mesh.num_cells())};
  for (std::uint32_t j = 0; j < grid.ny; ++j) {
    for (std::uint32_t i = 0; i < grid.nx; ++i) {
      out.owner[std::size_t{j} * grid.nx + i] = (j / bh) * px + i / bw;
    }
  }
  return out;
}

/// Greedy breadth-first growth that keeps the unassigned cells connected.
class BfsPartitioner {
 public:
  BfsPartitioner(const QuadMesh& mesh, std::uint32_t processes)
      : mesh_(mesh),
        processes_(processes),
        owner_(mesh.num_cells(), kFree),
        mark_(mesh.num_cells(), 0),
        dist_(mesh.num_cells(), -1) {
    vertex_start_.assign(mesh.num_vertices() + 1, 0);
    for (const QuadCell& q : mesh.cells()) {
      for (VertexId v : q) ++vertex_start_[v + 1];
    }
    for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
      vertex_start_[v + 1] += vertex_start_[v];
    }
    vertex_cells_.resize(vertex_start_.back());
    std::vector<std::size_t> fill(vertex_start_.begin(),
                                  vertex_start_.end() - 1);
    for (CellId c = 0; c < mesh.num_cells(); ++c) {
      for (VertexId v : mesh.cell(c)) vertex_cells_[fill[v]++] = c;
    }
  }

  /// One greedy pass whose first part grows from the free region as seen
  /// from cell `start`. A compact pass prefers cells touching the part on
  /// more sides.
  CellPartition run(CellId start, bool compact) {
    compact_ = compact;
    std::fill(owner_.begin(), owner_.end(), kFree);
    cursor_ = 0;
    first_ = start;
    const std::size_t total = mesh_.num_cells();
    for (std::uint32_t r = 0; r < processes_; ++r) {
      const std::size_t need =
          total / processes_ + (r < total % processes_ ? 1 : 0);
      grow(r, need);
    }
    return {processes_, owner_};
  }

  /// Number of connected pieces summed over all parts.
  std::size_t pieces(const std::vector<std::uint32_t>& owner) {
    const std::uint32_t stamp = next_stamp();
    std::size_t count = 0;
    std::vector<CellId> stack;
    for (CellId c = 0; c < owner.size(); ++c) {
      if (mark_[c] == stamp) continue;
      ++count;
      mark_[c] = stamp;
      stack.push_back(c);
      while (!stack.empty()) {
        const CellId x = stack.back();
        stack.pop_back();
        for_each_neighbor(x, [&](CellId n) {
          if (owner[n] == owner[x] && mark_[n] != stamp) {
            mark_[n] = stamp;
            stack.push_back(n);
          }
        });
      }
    }
    return count;
  }

 private:
  template <typename F>
  void for_each_neighbor(CellId c, F&& f) const {
    for (EdgeId e : mesh_.cell_edges(c)) {
      for (CellId other : mesh_.edge_cells(e)) {
        if (other != c) f(other);
      }
    }
  }

  bool free(CellId c) const { return owner_[c] == kFree; }

  std::uint32_t next_stamp() {
    if (++stamp_ == 0) {
      std::fill(mark_.begin(), mark_.end(), 0);
      stamp_ = 1;
    }
    return stamp_;
  }

  /// Last cell reached by a BFS of the free cells from the lowest free one.
  /// A BFS-tree leaf, so taking it cannot split that component.
  CellId peripheral_seed() {
    CellId origin = first_;
    if (origin == kFree || !free(origin)) {
      while (cursor_ < owner_.size() && !free(cursor_)) ++cursor_;
      origin = static_cast<CellId>(cursor_);
    }
    first_ = kFree;
    const std::uint32_t stamp = next_stamp();
    std::deque<CellId> queue{origin};
    mark_[origin] = stamp;
    CellId last = origin;
    while (!queue.empty()) {
      last = queue.front();
      queue.pop_front();
      for_each_neighbor(last, [&](CellId n) {
        if (free(n) && mark_[n] != stamp) {
          mark_[n] = stamp;
          queue.push_back(n);
        }
      });
    }
    return last;
  }

  /// Whether the free neighbours of c stay connected once c is taken.
  bool removable(CellId c) {
    std::vector<CellId> around;
    for_each_neighbor(c, [&](CellId n) {
      if (free(n)) around.push_back(n);
    });
    if (around.size() <= 1) return true;

    // Try within the vertex ring of c first, then fall back to the whole
    // free region.
    const std::uint32_t ring = next_stamp();
    for (VertexId v : mesh_.cell(c)) {
      for (std::size_t k = vertex_start_[v]; k < vertex_start_[v + 1]; ++k) {
        const CellId n = vertex_cells_[k];
        if (n != c && free(n)) mark_[n] = ring;
      }
    }
    if (reaches_all(c, around, ring, /*restrict_to_ring=*/true)) return true;
    return reaches_all(c, around, next_stamp(), /*restrict_to_ring=*/false);
  }

  bool reaches_all(CellId removed, const std::vector<CellId>& targets,
                   std::uint32_t stamp, bool restrict_to_ring) {
    // Ring cells carry `stamp` on entry; visited ones are bumped to
    // stamp + 1. Whole-region runs use a fresh stamp.
    const std::uint32_t seen = restrict_to_ring ? next_stamp() : stamp;
    auto allowed = [&](CellId n) {
      if (n == removed || !free(n)) return false;
      return !restrict_to_ring || mark_[n] == stamp;
    };
    std::deque<CellId> queue{targets.front()};
    mark_[targets.front()] = seen;
    while (!queue.empty()) {
      const CellId x = queue.front();
      queue.pop_front();
      for_each_neighbor(x, [&](CellId n) {
        if (mark_[n] != seen && allowed(n)) {
          mark_[n] = seen;
          queue.push_back(n);
        }
      });
    }
    return std::all_of(targets.begin(), targets.end(),
                       [&](CellId t) { return mark_[t] == seen; });
  }

  /// BFS distances over the free cells from `from`; the last cell reached
  /// is returned.
  CellId free_distances(CellId from) {
    std::fill(dist_.begin(), dist_.end(), -1);
    std::deque<CellId> queue{from};
    dist_[from] = 0;
    CellId last = from;
    while (!queue.empty()) {
      last = queue.front();
      queue.pop_front();
      for_each_neighbor(last, [&](CellId n) {
        if (free(n) && dist_[n] < 0) {
          dist_[n] = dist_[last] + 1;
          queue.push_back(n);
        }
      });
    }
    return last;
  }

  // The part grows from a peripheral seed and always prefers the frontier
  // cell farthest from the opposite end of the free region, so what is left
  // behind tends to stay in one piece.
  void grow(std::uint32_t rank, std::size_t need) {
    if (need == 0) return;
    const CellId seed = peripheral_seed();
    free_distances(free_distances(seed));
    std::set<std::pair<std::int64_t, CellId>> frontier;
    auto take = [&](CellId c) {
      owner_[c] = rank;
      frontier.erase({-dist_[c], c});
      for_each_neighbor(c, [&](CellId n) {
        if (free(n)) frontier.insert({-dist_[n], n});
      });
    };
    take(seed);
    for (std::size_t taken = 1; taken < need; ++taken) {
      if (frontier.empty()) {
        // The part's component is used up: continue in a fresh one.
        const CellId next = peripheral_seed();
        free_distances(free_distances(next));
        take(next);
        continue;
      }
      auto pick = frontier.end();
      int best_contact = -1;
      for (auto it = frontier.begin(); it != frontier.end(); ++it) {
        int contact = 0;
        if (compact_) {
          for_each_neighbor(it->second, [&](CellId n) { contact += owner_[n] == rank; });
        }
        if (contact > best_contact && removable(it->second)) {
          best_contact = contact;
          pick = it;
          if (!compact_) break;
        }
      }
      if (pick != frontier.end()) {
        take(pick->second);
        continue;
      }
      // Every candidate cuts the free region. Take the one whose cut-off
      // pieces are smallest and swallow them too, if they fit.
      CellId best = frontier.begin()->second;
      std::vector<CellId> best_pieces;
      std::size_t best_cost = std::numeric_limits<std::size_t>::max();
      for (const auto& f : frontier) {
        std::vector<CellId> pieces = cut_off(f.second);
        if (pieces.size() < best_cost) {
          best_cost = pieces.size();
          best = f.second;
          best_pieces = std::move(pieces);
        }
      }
      take(best);
      if (taken + best_pieces.size() < need) {
        for (CellId c : best_pieces) take(c);
        taken += best_pieces.size();
      }
    }
  }

  /// Cells of every free component that taking c would separate from the
  /// largest one.
  std::vector<CellId> cut_off(CellId c) {
    owner_[c] = kBlocked;
    std::vector<std::vector<CellId>> parts;
    const std::uint32_t stamp = next_stamp();
    for_each_neighbor(c, [&](CellId start) {
      if (!free(start) || mark_[start] == stamp) return;
      std::vector<CellId> comp{start};
      mark_[start] = stamp;
      for (std::size_t i = 0; i < comp.size(); ++i) {
        for_each_neighbor(comp[i], [&](CellId n) {
          if (free(n) && mark_[n] != stamp) {
            mark_[n] = stamp;
            comp.push_back(n);
          }
        });
      }
      parts.push_back(std::move(comp));
    });
    owner_[c] = kFree;
    std::vector<CellId> out;
    if (parts.empty()) return out;
    const auto largest = std::max_element(
        parts.begin(), parts.end(),
        [](const auto& a, const auto& b) { return a.size() < b.size(); });
    for (auto it = parts.begin(); it != parts.end(); ++it) {
      if (it != largest) out.insert(out.end(), it->begin(), it->end());
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  const QuadMesh& mesh_;
  std::uint32_t processes_;
  std::vector<std::uint32_t> owner_;
  std::vector<std::uint32_t> mark_;
  std::uint32_t stamp_ = 0;
  std::size_t cursor_ = 0;
  CellId first_ = kFree;
  bool compact_ = false;
  std::vector<std::size_t> vertex_start_;
  std::vector<CellId> vertex_cells_;
  std::vector<std::int64_t> dist_;
};

}  // namespace

CellPartition partition_cells(const QuadMesh& mesh, std::uint32_t processes,
                              PartitionMethod method) {
  if (processes < 1) throw Error(Errc::invalid_p, "P must be at least 1");
  if (processes == 1) {
    return {1, std::vector<std::uint32_t>(mesh.num_cells(), 0)};
  }
  if (method == PartitionMethod::block) return partition_block(mesh, processes);
  // The greedy pass can box a part in. Retry from a few other starting
  // cells and keep the first result whose parts are all connected.
  const std::size_t n = mesh.num_cells();
  if (n == 0) return {processes, {}};
  BfsPartitioner grower(mesh, processes);
  const std::size_t target = grower.pieces(std::vector<std::uint32_t>(n, 0)) == 1
                                 ? std::min<std::size_t>(processes, n)
                                 : 0;
  constexpr std::size_t kAttempts = 16;
  CellPartition first;
  const std::size_t attempts = std::min(kAttempts, n);
  for (std::size_t a = 0; a < 2 * attempts; ++a) {
    CellPartition p =
        grower.run(static_cast<CellId>(a / 2 * n / attempts), a % 2 == 1);
    if (target == 0 || grower.pieces(p.owner) == target) return p;
    if (a == 0) first = std::move(p);
  }
  return first;
}

std::string write_partition(const CellPartition& partition) {
  std::string out;
  for (std::size_t c = 0; c < partition.owner.size(); ++c) {
    out += std::to_string(c);
    out += ' ';
    out += std::to_string(partition.owner[c]);
    out += '\n';
  }
  return out;
}

LocalDomain build_local_domain(const QuadMesh& mesh,
                               const CellPartition& partition,
                               std::uint32_t rank) {
  if (rank >= partition.processes) {
    throw Error(Errc::invalid_p, "rank " + std::to_string(rank) +
                                     " out of range for P = " +
                                     std::to_string(partition.processes));
  }
  LocalDomain d;
  d.rank = rank;
  d.processes = partition.processes;
  for (CellId c = 0; c < mesh.num_cells(); ++c) {
    if (partition.owner[c] != rank) continue;
    d.cells.push_back(c);
    for (EdgeId e : mesh.cell_edges(c)) d.edges.push_back(e);
  }
  std::sort(d.edges.begin(), d.edges.end());
  d.edges.erase(std::unique(d.edges.begin(), d.edges.end()), d.edges.end());
  for (EdgeId e : d.edges) {
    const auto cells = mesh.edge_cells(e);
    if (cells.size() != 2) continue;
    const std::uint32_t a = partition.owner[cells[0]];
    const std::uint32_t b = partition.owner[cells[1]];
    if (a == b) continue;
    d.shared.push_back(e);
    d.neighbor.push_back(a == rank ? b : a);
  }
  return d;
}

namespace {

template <typename T>
std::optional<std::uint32_t> index_in(const std::vector<T>& sorted, T value) {
  const auto it = std::lower_bound(sorted.begin(), sorted.end(), value);
  if (it == sorted.end() || *it != value) return std::nullopt;
  return static_cast<std::uint32_t>(it - sorted.begin());
}

}  // namespace

std::optional<std::uint32_t> LocalState::local_index(EdgeId e) const {
  return index_in(edges, e);
}

std::optional<std::uint32_t> LocalState::shared_slot(EdgeId e) const {
  return index_in(shared, e);
}

std::optional<EdgeId> LocalState::affects(EdgeId e) const {
  const auto slot = shared_slot(e);
  if (!slot || affects_edge[*slot] < 0) return std::nullopt;
  return shared[static_cast<std::size_t>(affects_edge[*slot])];
}

LocalState local_preprocess(const QuadMesh& mesh, const LocalDomain& domain) {
  LocalState s;
  s.rank = domain.rank;
  s.processes = domain.processes;
  s.edges = domain.edges;
  s.shared = domain.shared;
  s.neighbor = domain.neighbor;

  const std::size_t n = s.edges.size();
  constexpr auto kNone = std::numeric_limits<std::uint32_t>::max();
  s.orient.assign(n, RelOrientation::same);
  s.segment_of.assign(n, kNone);

  auto owned = [&](CellId c) {
    return std::binary_search(domain.cells.begin(), domain.cells.end(), c);
  };

  std::vector<std::pair<std::uint32_t, RelOrientation>> pending;
  for (std::uint32_t seed = 0; seed < n; ++seed) {
    if (s.segment_of[seed] != kNone) continue;
    const auto l = static_cast<std::uint32_t>(s.segments.size());
    Segment segment;
    std::vector<std::uint32_t> ends;
    pending.emplace_back(seed, RelOrientation::same);
    while (!pending.empty()) {
      const auto [i, o] = pending.back();
      pending.pop_back();
      if (s.segment_of[i] != kNone) {
        if (s.orient[i] != o) {
          throw MoebiusError(mesh.edge(s.edges[i]), s.orient[i], o,
                             static_cast<int>(domain.rank));
        }
        continue;
      }
      s.segment_of[i] = l;
      s.orient[i] = o;
      segment.members.push_back(i);
      const EdgeId e = s.edges[i];
      int local_cells = 0;
      for (CellId c : mesh.edge_cells(e)) {
        if (!owned(c)) continue;
        ++local_cells;
        const int slot = mesh.slot_of(c, e);
        const auto j = s.local_index(mesh.opposite(c, slot));
        pending.emplace_back(*j, o ^ mesh.slot_rel(c, slot));
      }
      if (local_cells == 1) ends.push_back(i);
    }
    std::sort(segment.members.begin(), segment.members.end());
    segment.closed = ends.empty();
    std::sort(ends.begin(), ends.end());
    for (std::size_t k = 0; k < ends.size() && k < 2; ++k) {
      if (auto slot = s.shared_slot(s.edges[ends[k]])) {
        segment.shared_ends[k] = static_cast<std::int32_t>(*slot);
      }
    }
    s.segments.push_back(std::move(segment));
  }

  const std::size_t m = s.shared.size();
  s.shared_local.resize(m);
  s.shared_keys.resize(m);
  s.affects_edge.assign(m, -1);
  s.affects_orient.assign(m, RelOrientation::same);
  s.our_weight.resize(m);
  s.our_orient.resize(m);
  for (std::uint32_t k = 0; k < m; ++k) {
    const std::uint32_t i = *s.local_index(s.shared[k]);
    s.shared_local[k] = i;
    s.shared_keys[k] = mesh.edge(s.shared[k]);
    s.our_weight[k] = std::int64_t{s.processes} * s.segment_of[i] + s.rank;
    s.our_orient[k] = s.orient[i];
  }
  for (const Segment& seg : s.segments) {
    const auto [a, b] = seg.shared_ends;
    if (a < 0 || b < 0) continue;
    const RelOrientation rel = s.our_orient[a] ^ s.our_orient[b];
    s.affects_edge[a] = b;
    s.affects_edge[b] = a;
    s.affects_orient[a] = rel;
    s.affects_orient[b] = rel;
  }
  s.initial_orient = s.our_orient;
  return s;
}

}  // namespace quadorient
