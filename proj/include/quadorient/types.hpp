#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>

namespace quadorient {

using VertexId = std::uint32_t;
using CellId = std::uint32_t;
// Dense index into QuadMesh::edges(); ascending EdgeId is ascending EdgeKey.
using EdgeId = std::uint32_t;

inline constexpr EdgeId kNoEdge = ~EdgeId{0};
inline constexpr CellId kNoCell = ~CellId{0};

/// Four vertices in cyclic order around the cell. Slot i is the edge
/// {v[i], v[(i + 1) % 4]}; slot i and slot i + 2 are opposite.
using QuadCell = std::array<VertexId, 4>;

/// Unordered endpoint pair stored as lo < hi. The canonical direction of an
/// edge is lo -> hi.
struct EdgeKey {
  VertexId lo = 0;
  VertexId hi = 0;

  static constexpr EdgeKey from(VertexId a, VertexId b) {
    return a < b ? EdgeKey{a, b} : EdgeKey{b, a};
  }

  friend constexpr auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};

std::ostream& operator<<(std::ostream& os, const EdgeKey& e);

/// Element of the two-element group {same, flip} under XOR. As an edge flag,
/// `same` means the consistent direction is the canonical lo -> hi.
enum class RelOrientation : std::uint8_t { same = 0, flip = 1 };

constexpr RelOrientation operator^(RelOrientation a, RelOrientation b) {
  return static_cast<RelOrientation>(static_cast<std::uint8_t>(a) ^
                                     static_cast<std::uint8_t>(b));
}

constexpr RelOrientation operator!(RelOrientation a) {
  return a ^ RelOrientation::flip;
}

constexpr RelOrientation rel_from_bool(bool flip) {
  return flip ? RelOrientation::flip : RelOrientation::same;
}

std::ostream& operator<<(std::ostream& os, RelOrientation o);

}  // namespace quadorient
