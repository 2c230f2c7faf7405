#include "quadorient/error.hpp"

#include <ostream>
#include <sstream>

namespace quadorient {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::non_manifold: return "NonManifold";
    case Errc::duplicate_edge: return "DuplicateEdge";
    case Errc::degenerate_cell: return "DegenerateCell";
    case Errc::vertex_out_of_range: return "VertexOutOfRange";
    case Errc::not_incident: return "NotIncident";
    case Errc::unknown_edge: return "UnknownEdge";
    case Errc::invalid_spec: return "InvalidSpec";
    case Errc::unsupported_version: return "UnsupportedVersion";
    case Errc::malformed_section: return "MalformedSection";
    case Errc::no_quadrangles: return "NoQuadrangles";
    case Errc::parse_error: return "ParseError";
    case Errc::missing_edge: return "MissingEdge";
    case Errc::empty_input: return "EmptyInput";
    case Errc::unknown_element: return "UnknownElement";
    case Errc::invalid_p: return "InvalidP";
    case Errc::not_a_ribbon: return "NotARibbon";
    case Errc::moebius: return "MoebiusError";
    case Errc::protocol: return "ProtocolError";
  }
  return "Unknown";
}

std::ostream& operator<<(std::ostream& os, const EdgeKey& e) {
  return os << '{' << e.lo << ',' << e.hi << '}';
}

std::ostream& operator<<(std::ostream& os, RelOrientation o) {
  return os << (o == RelOrientation::same ? "same" : "flip");
}

namespace {

std::string moebius_message(EdgeKey edge, RelOrientation held,
                            RelOrientation demanded, std::optional<int> rank) {
  std::ostringstream os;
  os << "Moebius strip found at edge " << edge << ": holds " << held
     << ", propagation demands " << demanded;
  if (rank) os << " (rank " << *rank << ")";
  return os.str();
}

}  // namespace

MoebiusError::MoebiusError(EdgeKey edge, RelOrientation held,
                           RelOrientation demanded, std::optional<int> rank)
    : Error(Errc::moebius, moebius_message(edge, held, demanded, rank)),
      edge_(edge),
      held_(held),
      demanded_(demanded),
      rank_(rank) {}

}  // namespace quadorient
