#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "quadorient/mesh.hpp"
#include "quadorient/orientation.hpp"

namespace quadorient {

// Text formats. All use '\n' line endings and ASCII decimal integers.
//
//   native mesh:   "quadmesh <nv> <nc>\n" then nc lines "<v0> <v1> <v2> <v3>\n"
//   orientation:   one line "<lo> <hi> <+|->\n" per edge, sorted by (lo, hi);
//                  '+' means the consistent direction is lo -> hi
//   rounds csv:    "P,rounds\n" then "<P>,<rounds>\n" rows, P increasing

/// Gmsh MSH 2.2 ASCII subset: $MeshFormat, $Nodes, $Elements. Only type 3
/// (4-node quadrangle) elements are kept; node ids are compacted to 0-based
/// ids in ascending order and coordinates are discarded.
/// Throws Error with unsupported_version, malformed_section, no_quadrangles,
/// or any build_mesh error.
QuadMesh read_msh(std::istream& in);

std::string write_native(const QuadMesh& mesh);
/// Throws Error(parse_error) or any build_mesh error.
QuadMesh read_native(std::string_view text);

std::string write_orientation(const QuadMesh& mesh,
                              const OrientationMap& orientation);
/// Throws Error with parse_error, unknown_edge or missing_edge.
OrientationMap read_orientation(const QuadMesh& mesh, std::string_view text);

struct RoundsRow {
  std::uint64_t processes = 0;
  std::uint64_t rounds = 0;

  friend bool operator==(const RoundsRow&, const RoundsRow&) = default;
};

/// Throws Error(empty_input) for no rows and Error(parse_error) when P is
/// not strictly increasing or a value is zero.
std::string write_rounds_csv(const std::vector<RoundsRow>& rows);
std::vector<RoundsRow> read_rounds_csv(std::string_view text);

enum class MeshFormat { native, msh };

/// `.msh` selects Gmsh, anything else the native format.
MeshFormat format_for_path(const std::filesystem::path& path);
QuadMesh load_mesh(const std::filesystem::path& path, MeshFormat format);
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace quadorient
