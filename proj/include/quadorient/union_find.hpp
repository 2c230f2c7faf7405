#pragma once

#include <cstdint>
#include <vector>

#include "quadorient/mesh.hpp"
#include "quadorient/orientation.hpp"
#include "quadorient/orient_serial.hpp"

namespace quadorient {

/// Union-Find forest whose parent links carry the relative orientation
/// between an element and its parent. Following links to the root and
/// XOR-ing the labels gives the element's orientation relative to its set
/// representative; roots carry `same`.
///
/// Two knobs select between the textbook and the literal variant:
///  - path compression in find (default on) rewires every element on the
///    path straight to the root together with its accumulated label;
///  - union by rank (default on) attaches the lower-rank root below the
///    higher one, ties making the larger id the root. With it off, the root
///    of v's set always becomes the representative.
///
/// Single-owner and not thread-safe.
class OrientedForest {
 public:
  struct Options {
    bool path_compression = true;
    bool union_by_rank = true;
  };

  struct Found {
    std::uint32_t root;
    RelOrientation orient;

    friend bool operator==(const Found&, const Found&) = default;
  };

  OrientedForest() = default;
  explicit OrientedForest(std::size_t n) : OrientedForest(n, Options{}) {}
  OrientedForest(std::size_t n, Options options);

  std::size_t size() const noexcept { return parent_.size(); }
  const Options& options() const noexcept { return options_; }

  /// Throws Error(unknown_element) when u is out of range.
  Found find(std::uint32_t u);

  /// Requires orient(u) ^ orient(v) == o. Returns true when two sets were
  /// merged, false when u and v already shared a root and agreed. Throws
  /// MoebiusError when they already shared a root and disagree; the witness
  /// carries the existing relative orientation of u and v as `held`.
  /// `witness_edge` only labels that error.
  bool unite(std::uint32_t u, std::uint32_t v, RelOrientation o,
             EdgeKey witness_edge = {});

  std::uint32_t parent(std::uint32_t u) const { return parent_.at(u); }
  RelOrientation label(std::uint32_t u) const { return label_.at(u); }
  /// Number of parent links between u and its root, without modifying the
  /// forest.
  std::size_t depth(std::uint32_t u) const;

 private:
  void check(std::uint32_t u) const;

  Options options_;
  std::vector<std::uint32_t> parent_;
  std::vector<RelOrientation> label_;
  std::vector<std::uint8_t> rank_;
};

struct UnionFindResult {
  OrientationMap orientation;
  OrientedForest forest;
};

/// For every cell, unites both opposite pairs with their required relation,
/// then reads each edge's orientation relative to its representative.
/// Throws MoebiusError.
UnionFindResult orient_unionfind_detailed(const QuadMesh& mesh,
                                          OrientedForest::Options options = {});

OrientationMap orient_unionfind(const QuadMesh& mesh);

/// Set partition induced by the forest, in RibbonPartition layout. Runs a
/// find on every element.
RibbonPartition forest_partition(OrientedForest& forest);

}  // namespace quadorient
