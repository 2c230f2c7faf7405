#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "quadorient/types.hpp"

namespace quadorient {

/// Per-edge orientation flag indexed by EdgeId. An entry is undefined until
/// set; the visited marker of the traversal is exactly "is defined".
class OrientationMap {
 public:
  OrientationMap() = default;
  explicit OrientationMap(std::size_t num_edges)
      : flags_(num_edges, kUnset) {}

  /// All edges defined with the given flag.
  static OrientationMap uniform(std::size_t num_edges, RelOrientation o) {
    OrientationMap m(num_edges);
    for (auto& f : m.flags_) f = static_cast<std::uint8_t>(o);
    return m;
  }

  std::size_t size() const noexcept { return flags_.size(); }

  bool defined(EdgeId e) const { return flags_.at(e) != kUnset; }
  bool complete() const {
    for (auto f : flags_) {
      if (f == kUnset) return false;
    }
    return true;
  }

  /// Precondition: defined(e).
  RelOrientation operator[](EdgeId e) const {
    return static_cast<RelOrientation>(flags_[e]);
  }

  void set(EdgeId e, RelOrientation o) {
    flags_.at(e) = static_cast<std::uint8_t>(o);
  }
  void toggle(EdgeId e) { flags_.at(e) ^= 1; }

  friend bool operator==(const OrientationMap&,
                         const OrientationMap&) = default;

 private:
  static constexpr std::uint8_t kUnset = 0xFF;
  std::vector<std::uint8_t> flags_;
};

}  // namespace quadorient
