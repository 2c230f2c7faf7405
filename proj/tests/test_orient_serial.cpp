#include <gtest/gtest.h>

#include <chrono>
#include <set>

#include "oracles.hpp"
#include "quadorient/error.hpp"
#include "quadorient/generate.hpp"
#include "quadorient/orient_serial.hpp"
#include "quadorient/verify.hpp"

using namespace quadorient;

namespace {

std::set<std::set<EdgeKey>> as_key_sets(const QuadMesh& m, const RibbonPartition& p) {
  std::set<std::set<EdgeKey>> out;
  for (const auto& r : p.ribbons) {
    std::set<EdgeKey> keys;
    for (EdgeId e : r) keys.insert(m.edge(e));
    out.insert(keys);
  }
  return out;
}

// Small meshes for exhaustive enumeration (at most 20 edges).
std::vector<QuadMesh> small_meshes() {
  std::vector<QuadMesh> out = {build_mesh(4, {{0, 1, 3, 2}}),
                               gen_structured({2, 1}),
                               gen_structured({3, 1}),
                               gen_structured({2, 2}),
                               gen_structured({3, 2}),
                               gen_cubed_sphere(1),
                               gen_structured({3, 1, true, false, true}),
                               gen_structured({4, 1, true, false, true}),
                               gen_structured({3, 1, true}),
                               gen_structured({3, 3, true, true})};
  const std::size_t base = out.size();
  for (std::size_t i = 0; i < base; ++i) out.push_back(shuffle_mesh(out[i], 100 + i));
  return out;
}

}  // namespace

TEST(OrientSerial, OneCellAllSame) {
  const QuadMesh m = build_mesh(4, {{0, 1, 3, 2}});
  EXPECT_EQ(orient_serial(m), OrientationMap::uniform(4, RelOrientation::same));
}

TEST(OrientSerial, SeedsGetSame) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const QuadMesh m = shuffle_mesh(gen_structured({4, 3}), seed);
    const OrientationMap o = orient_serial(m);
    for (const auto& r : ribbons(m).ribbons) EXPECT_EQ(o[r.front()], RelOrientation::same);
  }
}

TEST(OrientSerial, MatchesExhaustiveEnumeration) {
  for (const QuadMesh& m : small_meshes()) {
    ASSERT_LE(m.num_edges(), 20u);
    const std::uint64_t count = oracle::count_consistent(m);
    const std::size_t k = oracle::ribbon_sets(m).size();
    if (oracle::orientable(m)) {
      // Each ribbon can be flipped independently and nothing else is allowed.
      EXPECT_EQ(count, std::uint64_t{1} << k);
      const OrientationMap o = orient_serial(m);
      EXPECT_TRUE(oracle::consistent_by_definition(m, o));
      EXPECT_TRUE(check_consistent(m, o).empty());
    } else {
      EXPECT_EQ(count, 0u);
      EXPECT_THROW(orient_serial(m), MoebiusError);
    }
  }
}

TEST(OrientSerial, MoebiusWitness) {
  const QuadMesh m = gen_structured({3, 1, true, false, true});
  try {
    orient_serial(m);
    FAIL();
  } catch (const MoebiusError& e) {
    EXPECT_TRUE(m.find_edge(e.edge()).has_value());
    EXPECT_NE(e.held(), e.demanded());
    EXPECT_FALSE(e.rank().has_value());
    EXPECT_EQ(e.code(), Errc::moebius);
  }
}

TEST(OrientSerial, CallCounts) {
  for (const QuadMesh& m : {gen_structured({5, 4}), gen_cubed_sphere(3),
                            gen_structured({5, 5, true, true})}) {
    SerialStats stats;
    orient_serial(m, &stats);
    EXPECT_EQ(stats.edges_visited, m.num_edges());
    std::uint64_t incidences = 0;
    for (EdgeId e = 0; e < m.num_edges(); ++e) incidences += m.edge_cells(e).size();
    // One outer call per edge plus one per (edge, incident cell).
    EXPECT_EQ(stats.orient_calls, m.num_edges() + incidences);
    EXPECT_GE(stats.orient_calls, m.num_edges());
    EXPECT_LE(stats.orient_calls, 3 * m.num_edges());
  }
}

TEST(Ribbons, MatchRelaxationOracle) {
  for (const QuadMesh& m : small_meshes()) {
    EXPECT_EQ(as_key_sets(m, ribbons(m)), oracle::ribbon_sets(m));
  }
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const QuadMesh m = shuffle_mesh(gen_cubed_sphere(4), seed);
    EXPECT_EQ(as_key_sets(m, ribbons(m)), oracle::ribbon_sets(m));
  }
}

TEST(Ribbons, Counts) {
  EXPECT_EQ(ribbons(build_mesh(4, {{0, 1, 3, 2}})).size(), 2u);
  for (std::uint32_t n = 1; n <= 8; ++n) EXPECT_EQ(ribbons(gen_structured({n, n})).size(), 2 * n);
  const RibbonPartition cube = ribbons(gen_cubed_sphere(1));
  ASSERT_EQ(cube.size(), 3u);
  for (const auto& r : cube.ribbons) EXPECT_EQ(r.size(), 4u);
  // Cube-sphere belts: 3n loops of 4n edges.
  for (std::uint32_t n = 1; n <= 4; ++n) {
    const RibbonPartition p = ribbons(gen_cubed_sphere(n));
    EXPECT_EQ(p.size(), 3 * n);
    for (const auto& r : p.ribbons) EXPECT_EQ(r.size(), 4 * n);
  }
}

TEST(Ribbons, CanonicalLayout) {
  const QuadMesh m = shuffle_mesh(gen_structured({4, 4, true, true}), 5);
  const RibbonPartition p = ribbons(m);
  for (std::size_t r = 0; r < p.size(); ++r) {
    EXPECT_TRUE(std::is_sorted(p.ribbons[r].begin(), p.ribbons[r].end()));
    if (r > 0) EXPECT_LT(p.ribbons[r - 1].front(), p.ribbons[r].front());
    for (EdgeId e : p.ribbons[r]) EXPECT_EQ(p.ribbon_of[e], r);
  }
}

TEST(OrientSerial, SeedFlipGivesRibbonComplement) {
  // Orientation is fixed per ribbon by one edge: flipping the seed's ribbon
  // in the output leaves a consistent map that differs on that ribbon only.
  const QuadMesh m = gen_structured({4, 3});
  const OrientationMap o = orient_serial(m);
  const RibbonPartition p = ribbons(m);
  for (const auto& r : p.ribbons) {
    const OrientationMap f = flip_ribbon(o, p, r);
    for (EdgeId e = 0; e < m.num_edges(); ++e) {
      EXPECT_EQ(f[e] != o[e], p.ribbon_of[e] == p.ribbon_of[r.front()]);
    }
  }
}

TEST(OrientSerial, LongStripNoRecursion) {
  const QuadMesh m = gen_structured({200000, 1});
  const auto start = std::chrono::steady_clock::now();
  const OrientationMap o = orient_serial(m);
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_TRUE(check_consistent(m, o).empty());
  EXPECT_LT(s, 2.0);
}
