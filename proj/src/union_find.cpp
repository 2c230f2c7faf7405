#include "quadorient/union_find.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "quadorient/error.hpp"

namespace quadorient {

OrientedForest::OrientedForest(std::size_t n, Options options)
    : options_(options),
      parent_(n),
      label_(n, RelOrientation::same),
      rank_(n, 0) {
  std::iota(parent_.begin(), parent_.end(), std::uint32_t{0});
}

void OrientedForest::check(std::uint32_t u) const {
  if (u >= parent_.size()) {
    throw Error(Errc::unknown_element,
                "element " + std::to_string(u) + " is not in the forest");
  }
}

OrientedForest::Found OrientedForest::find(std::uint32_t u) {
  check(u);
  std::uint32_t root = u;
  RelOrientation orient = RelOrientation::same;
  while (parent_[root] != root) {
    orient = orient ^ label_[root];
    root = parent_[root];
  }
  if (options_.path_compression) {
    // Second pass: each element's label becomes its orientation relative to
    // the root, which is the remaining XOR from it to the root.
    RelOrientation remaining = orient;
    std::uint32_t x = u;
    while (parent_[x] != root && x != root) {
      const std::uint32_t next = parent_[x];
      const RelOrientation own = label_[x];
      parent_[x] = root;
      label_[x] = remaining;
      remaining = remaining ^ own;
      x = next;
    }
  }
  return {root, orient};
}

bool OrientedForest::unite(std::uint32_t u, std::uint32_t v, RelOrientation o,
                           EdgeKey witness_edge) {
  const Found fu = find(u);
  const Found fv = find(v);
  const RelOrientation link = fu.orient ^ o ^ fv.orient;
  if (fu.root == fv.root) {
    if (link == RelOrientation::flip) {
      throw MoebiusError(witness_edge, fu.orient ^ fv.orient, o);
    }
    return false;
  }

  std::uint32_t child = fu.root;
  std::uint32_t root = fv.root;
  if (options_.union_by_rank) {
    if (rank_[child] > rank_[root] ||
        (rank_[child] == rank_[root] && child > root)) {
      std::swap(child, root);
    }
    if (rank_[child] == rank_[root]) ++rank_[root];
  }
  // The link label is symmetric, so it does not depend on which root ends up
  // on top.
  parent_[child] = root;
  label_[child] = link;
  return true;
}

std::size_t OrientedForest::depth(std::uint32_t u) const {
  check(u);
  std::size_t d = 0;
  while (parent_[u] != u) {
    u = parent_[u];
    ++d;
  }
  return d;
}

UnionFindResult orient_unionfind_detailed(const QuadMesh& mesh,
                                          OrientedForest::Options options) {
  OrientedForest forest(mesh.num_edges(), options);
  for (CellId c = 0; c < mesh.num_cells(); ++c) {
    const auto& e = mesh.cell_edges(c);
    // Slots 0..3 go round the cell, so (0, 2) and (1, 3) are the opposite
    // pairs.
    forest.unite(e[0], e[2], mesh.slot_rel(c, 0), mesh.edge(e[0]));
    forest.unite(e[1], e[3], mesh.slot_rel(c, 1), mesh.edge(e[1]));
  }
  OrientationMap orientation(mesh.num_edges());
  for (EdgeId e = 0; e < mesh.num_edges(); ++e) {
    orientation.set(e, forest.find(e).orient);
  }
  return {std::move(orientation), std::move(forest)};
}

OrientationMap orient_unionfind(const QuadMesh& mesh) {
  return orient_unionfind_detailed(mesh).orientation;
}

RibbonPartition forest_partition(OrientedForest& forest) {
  const auto n = static_cast<std::uint32_t>(forest.size());
  constexpr auto kUnassigned = ~std::uint32_t{0};
  std::vector<std::uint32_t> class_of_root(n, kUnassigned);
  RibbonPartition out;
  out.ribbon_of.resize(n);
  for (std::uint32_t u = 0; u < n; ++u) {
    const std::uint32_t root = forest.find(u).root;
    if (class_of_root[root] == kUnassigned) {
      class_of_root[root] = static_cast<std::uint32_t>(out.ribbons.size());
      out.ribbons.emplace_back();
    }
    out.ribbon_of[u] = class_of_root[root];
    out.ribbons[class_of_root[root]].push_back(u);
  }
  return out;
}

}  // namespace quadorient
