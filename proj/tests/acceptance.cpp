// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "quadorient/error.hpp"
#include "quadorient/generate.hpp"
#include "quadorient/io.hpp"
#include "quadorient/negotiation.hpp"
#include "quadorient/orient_serial.hpp"
#include "quadorient/union_find.hpp"
#include "quadorient/verify.hpp"

using namespace quadorient;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Named {
  std::string name;
  QuadMesh mesh;
};

std::vector<Named> oracle_meshes() {
  std::vector<Named> base;
  for (std::uint32_t n : {1u, 2u, 3u, 4u, 5u, 6u, 7u, 8u, 16u, 32u}) {
    base.push_back({"square " + std::to_string(n), gen_structured({n, n})});
  }
  for (std::uint32_t m : {3u, 5u, 7u}) {
    base.push_back({"torus " + std::to_string(m), gen_structured({m, m, true, true})});
  }
  for (std::uint32_t n = 1; n <= 4; ++n) {
    base.push_back({"cubed-sphere " + std::to_string(n), gen_cubed_sphere(n)});
  }
  std::vector<Named> out;
  for (const Named& b : base) {
    out.push_back(b);
    for (std::uint64_t seed = 0; seed <= 4; ++seed) {
      out.push_back({b.name + " shuffle " + std::to_string(seed), shuffle_mesh(b.mesh, seed)});
    }
  }
  return out;
}

constexpr std::uint32_t kProcesses[] = {1, 2, 4, 8, 16};

template <typename F>
bool raises_moebius(F&& f) {
  try {
    f();
  } catch (const MoebiusError&) {
    return true;
  } catch (const std::exception&) {
    return false;
  }
  return false;
}

class Report {
 public:
  void add(int id, const std::string& title, bool pass, const std::string& detail) {
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << id << ": " << title << " ("
              << detail << ")" << std::endl;
    all_ = all_ && pass;
  }
  bool all() const { return all_; }

 private:
  bool all_ = true;
};

/// Criteria 1, 3 and 5 share one pass over the oracle meshes.
void oracle_pass(Report& report, const std::vector<Named>& meshes) {
  const auto start = Clock::now();
  std::size_t runs = 0;
  std::string first_failure;
  std::string ribbon_failure;
  std::string bound_failure;
  std::uint32_t worst_slack = 0;
  std::size_t parallel_runs = 0;

  auto fail = [](std::string& slot, const std::string& what) {
    if (slot.empty()) slot = what;
  };

  for (const Named& m : meshes) {
    auto check = [&](const std::string& what, const std::function<OrientationMap()>& run) {
      ++runs;
      try {
        if (!check_consistent(m.mesh, run()).empty()) fail(first_failure, m.name + " " + what + " inconsistent");
      } catch (const std::exception& e) {
        fail(first_failure, m.name + " " + what + ": " + e.what());
      }
    };
    check("serial", [&] { return orient_serial(m.mesh); });
    check("unionfind", [&] { return orient_unionfind(m.mesh); });
    for (std::uint32_t p : kProcesses) {
      for (auto method : {PartitionMethod::bfs, PartitionMethod::block}) {
        if (method == PartitionMethod::block && !block_partition_available(m.mesh, p)) continue;
        RunOptions opts;
        opts.method = method;
        const std::string what = "parallel P=" + std::to_string(p) + " " + to_string(method);
        check(what, [&] {
          ParallelResult r = run_parallel(m.mesh, p, opts);
          ++parallel_runs;
          if (r.trace.rounds > r.trace.k_observed + 1) {
            fail(bound_failure, m.name + " " + what + ": " + std::to_string(r.trace.rounds) +
                                    " rounds, k = " + std::to_string(r.trace.k_observed));
          }
          worst_slack = std::max(worst_slack, r.trace.rounds);
          return r.orientation;
        });
      }
    }

    try {
      UnionFindResult uf = orient_unionfind_detailed(m.mesh);
      if (!(forest_partition(uf.forest) == ribbons(m.mesh))) fail(ribbon_failure, m.name);
    } catch (const std::exception& e) {
      fail(ribbon_failure, m.name + ": " + e.what());
    }
  }
  const double elapsed = seconds_since(start);

  std::ostringstream d1;
  d1 << meshes.size() << " meshes, " << runs << " runs, " << elapsed << " s";
  if (!first_failure.empty()) d1 << "; first failure: " << first_failure;
  if (elapsed >= 60.0) d1 << "; over the 60 s budget";
  report.add(1, "oracle equivalence", first_failure.empty() && elapsed < 60.0, d1.str());

  bool counts_ok = true;
  std::ostringstream d3;
  for (std::uint32_t n : {1u, 2u, 3u, 4u, 5u, 6u, 7u, 8u, 16u, 32u}) {
    const std::size_t got = ribbons(gen_structured({n, n})).size();
    if (got != 2 * n) {
      counts_ok = false;
      d3 << "square " << n << " has " << got << " ribbons; ";
    }
  }
  const std::size_t cube = ribbons(gen_cubed_sphere(1)).size();
  counts_ok = counts_ok && cube == 3;
  d3 << "union-find partition equals traversal on " << meshes.size() << " meshes"
     << (ribbon_failure.empty() ? "" : " except " + ribbon_failure) << ", cube has " << cube
     << " ribbons";
  report.add(3, "ribbon structure", ribbon_failure.empty() && counts_ok, d3.str());

  std::ostringstream d5;
  d5 << parallel_runs << " parallel runs checked for rounds <= k_observed + 1";
  if (!bound_failure.empty()) d5 << "; first failure: " << bound_failure;
  report.add(5, "round bound", bound_failure.empty() && parallel_runs > 0, d5.str());
}

void moebius_detection(Report& report) {
  std::size_t cases = 0, misses = 0;
  std::string miss;
  std::set<std::uint32_t> missed_ny;
  for (std::uint32_t nx = 3; nx <= 9; ++nx) {
    for (std::uint32_t ny = 1; ny <= 3; ++ny) {
      const QuadMesh plain = gen_structured({nx, ny, true, false, true});
      std::vector<Named> variants = {{"plain", plain}};
      for (std::uint64_t seed = 0; seed <= 4; ++seed) {
        variants.push_back({"shuffle " + std::to_string(seed), shuffle_mesh(plain, seed)});
      }
      for (const Named& v : variants) {
        const std::string name =
            "twisted " + std::to_string(nx) + "x" + std::to_string(ny) + " " + v.name;
        auto expect = [&](const std::string& what, auto&& run) {
          ++cases;
          if (raises_moebius(run)) return;
          ++misses;
          missed_ny.insert(ny);
          if (miss.empty()) miss = name + " " + what;
        };
        expect("serial", [&] { orient_serial(v.mesh); });
        expect("unionfind", [&] { orient_unionfind(v.mesh); });
        for (std::uint32_t p : {1u, 2u, 3u, 4u}) {
          for (auto method : {PartitionMethod::bfs, PartitionMethod::block}) {
            if (method == PartitionMethod::block && !block_partition_available(v.mesh, p)) continue;
            RunOptions opts;
            opts.method = method;
            expect("parallel P=" + std::to_string(p) + " " + to_string(method),
                   [&] { run_parallel(v.mesh, p, opts); });
          }
        }
      }
    }
  }
  std::ostringstream d;
  d << cases << " runs";
  if (misses > 0) {
    d << "; " << misses << " raised nothing, all with ny in {";
    for (auto it = missed_ny.begin(); it != missed_ny.end(); ++it) {
      d << (it == missed_ny.begin() ? "" : ", ") << *it;
    }
    d << "} (first: " << miss << ")";
  }
  d << "; false positives are covered by criterion 1";
  report.add(2, "Moebius detection", misses == 0, d.str());
}

void flip_invariance(Report& report, const std::vector<Named>& meshes) {
  SplitMix64 rng(2024);
  int done = 0;
  std::string failure;
  while (done < 20) {
    const Named& m = meshes[rng.below(meshes.size())];
    const RibbonPartition part = ribbons(m.mesh);
    const auto& ribbon = part.ribbons[rng.below(part.size())];
    if (ribbon.size() < 2) continue;
    ++done;
    const OrientationMap o = orient_serial(m.mesh);
    if (!check_consistent(m.mesh, flip_ribbon(o, part, ribbon)).empty() && failure.empty()) {
      failure = m.name + ": whole-ribbon flip broke consistency";
    }
    // Random strict nonempty subset.
    std::vector<EdgeId> members = ribbon;
    shuffle_in_place(members, rng);
    const std::size_t take = 1 + rng.below(members.size() - 1);
    OrientationMap partial = o;
    for (std::size_t i = 0; i < take; ++i) partial.toggle(members[i]);
    if (check_consistent(m.mesh, partial).empty() && failure.empty()) {
      failure = m.name + ": partial flip of " + std::to_string(take) + " of " +
                std::to_string(members.size()) + " edges stayed consistent";
    }
  }
  report.add(4, "flip invariance", failure.empty(),
             "20 (mesh, ribbon, seed) triples" + (failure.empty() ? "" : "; " + failure));
}

void scaling_slope(Report& report) {
  const QuadMesh m = gen_structured({256, 256});
  RunOptions opts;
  opts.method = PartitionMethod::block;
  const std::uint32_t ps[] = {4, 16, 64, 256};
  const auto rows = scaling_sweep(m, ps, opts);
  const double slope = log_log_slope(rows);
  std::ostringstream d;
  d << "rounds";
  for (const RoundsRow& r : rows) d << " P=" << r.processes << ":" << r.rounds;
  d << ", slope " << slope << ", accepted [0.35, 0.65]";
  report.add(6, "scaling slope", slope >= 0.35 && slope <= 0.65, d.str());
}

void schedule_determinism(Report& report) {
  const QuadMesh m = gen_structured({32, 32});
  auto run = [&](Schedule s, std::uint64_t seed) {
    RunOptions opts;
    opts.schedule = s;
    opts.seed = seed;
    return run_parallel(m, 16, opts);
  };
  const ParallelResult a = run(Schedule::sequential, 0);
  const ParallelResult b = run(Schedule::reversed, 0);
  const ParallelResult c = run(Schedule::shuffled, 12345);
  const bool same = a.trace == b.trace && a.trace == c.trace && a.orientation == b.orientation &&
                    a.orientation == c.orientation;
  report.add(7, "determinism under scheduling", same,
             "sequential, reversed and shuffled rank order; " + std::to_string(a.trace.rounds) +
                 " rounds");
}

void large_strip(Report& report) {
  const QuadMesh m = gen_structured({1000000, 1});
  const auto start = Clock::now();
  bool ok = false;
  std::string detail;
  try {
    SerialStats stats;
    const OrientationMap o = orient_serial(m, &stats);
    const double s = seconds_since(start);
    std::size_t longest = 0;
    for (const auto& r : ribbons(m).ribbons) longest = std::max(longest, r.size());
    ok = s < 5.0 && check_consistent(m, o).empty();
    std::ostringstream d;
    d << m.num_edges() << " edges, longest ribbon " << longest << ", " << s
      << " s, accepted < 5 s";
    detail = d.str();
  } catch (const std::exception& e) {
    detail = e.what();
  }
  report.add(8, "large-instance robustness", ok, detail);
}

void format_round_trips(Report& report) {
  bool ok = true;
  std::string detail;
  const std::vector<QuadMesh> meshes = {gen_structured({3, 3}), gen_cubed_sphere(4),
                                        shuffle_mesh(gen_structured({7, 7, true, true}), 3)};
  for (const QuadMesh& m : meshes) {
    const std::string text = write_native(m);
    const QuadMesh back = read_native(text);
    ok = ok && back == m && write_native(back) == text;
    const OrientationMap o = orient_unionfind(m);
    const std::string otext = write_orientation(m, o);
    ok = ok && read_orientation(back, otext) == o &&
         write_orientation(back, read_orientation(back, otext)) == otext;
  }
  std::ifstream in(std::string(QUADORIENT_FIXTURES) + "/quad.msh");
  try {
    const QuadMesh fixture = read_msh(in);
    const bool msh_ok = fixture == build_mesh(4, {{0, 1, 3, 2}});
    ok = ok && msh_ok;
    detail = msh_ok ? "native and orientation files byte-exact; quad.msh is the 1-cell mesh"
                    : "quad.msh parsed to an unexpected mesh";
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("quad.msh: ") + e.what();
  }
  report.add(9, "format round-trips", ok, detail);
}

}  // namespace

int main() {
  Report report;
  const std::vector<Named> meshes = oracle_meshes();
  oracle_pass(report, meshes);
  moebius_detection(report);
  flip_invariance(report, meshes);
  scaling_slope(report);
  schedule_determinism(report);
  large_strip(report);
  format_round_trips(report);
  return report.all() ? 0 : 1;
}
