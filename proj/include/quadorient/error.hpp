#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "quadorient/types.hpp"

namespace quadorient {

enum class Errc {
  non_manifold,
  duplicate_edge,
  degenerate_cell,
  vertex_out_of_range,
  not_incident,
  unknown_edge,
  invalid_spec,
  unsupported_version,
  malformed_section,
  no_quadrangles,
  parse_error,
  missing_edge,
  empty_input,
  unknown_element,
  invalid_p,
  not_a_ribbon,
  moebius,
  protocol,
};

std::string_view to_string(Errc code);

/// Base exception for every failure raised by the library. The code is the
/// stable part; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Raised when orientation propagation returns to an edge with the opposite
/// orientation, i.e. the cells along the cycle form a Moebius strip.
///
/// `held` is the orientation the edge already carried and `demanded` the one
/// propagation tried to impose. For union-find the pair describes the
/// relative orientation between the two united edges instead. `rank` is set
/// when the conflict was found by a simulated process.
class MoebiusError : public Error {
 public:
  MoebiusError(EdgeKey edge, RelOrientation held, RelOrientation demanded,
               std::optional<int> rank = std::nullopt);

  EdgeKey edge() const noexcept { return edge_; }
  RelOrientation held() const noexcept { return held_; }
  RelOrientation demanded() const noexcept { return demanded_; }
  std::optional<int> rank() const noexcept { return rank_; }

 private:
  EdgeKey edge_;
  RelOrientation held_;
  RelOrientation demanded_;
  std::optional<int> rank_;
};

}  // namespace quadorient
