#include "quadorient/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include "quadorient/error.hpp"

namespace quadorient {

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

template <typename T>
bool parse_uint(std::string_view token, T& out) {
  const char* first = token.data();
  const char* last = first + token.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
  throw Error(Errc::parse_error,
              "line " + std::to_string(line_no) + ": " + what);
}

[[noreturn]] void msh_fail(Errc code, const std::string& what) {
  throw Error(code, "msh: " + what);
}

}  // namespace

QuadMesh read_msh(std::istream& in) {
  std::string line;
  auto next_line = [&](const char* section) -> const std::string& {
    if (!std::getline(in, line)) {
      msh_fail(Errc::malformed_section,
               std::string("unexpected end of file in ") + section);
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  };
  auto expect_end = [&](const std::string& name) {
    if (next_line(name.c_str()) != "$End" + name) {
      msh_fail(Errc::malformed_section, "missing $End" + name);
    }
  };

  bool have_format = false;
  bool have_nodes = false;
  bool have_elements = false;
  std::vector<std::uint64_t> node_ids;
  std::vector<std::array<std::uint64_t, 4>> quads;

  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line == "$MeshFormat") {
      const auto tokens = split_ws(next_line("MeshFormat"));
      if (tokens.size() < 3) {
        msh_fail(Errc::malformed_section, "bad $MeshFormat header");
      }
      const std::string version(tokens[0]);
      if (version.rfind("2.", 0) != 0 && version != "2") {
        msh_fail(Errc::unsupported_version, "version " + version);
      }
      if (tokens[1] != "0") {
        msh_fail(Errc::unsupported_version, "binary files are not supported");
      }
      expect_end("MeshFormat");
      have_format = true;
    } else if (line == "$Nodes") {
      if (!have_format) msh_fail(Errc::malformed_section, "$Nodes before $MeshFormat");
      std::size_t count = 0;
      const auto header = split_ws(next_line("Nodes"));
      if (header.size() != 1 || !parse_uint(header[0], count)) {
        msh_fail(Errc::malformed_section, "bad node count");
      }
      node_ids.reserve(count);
      for (std::size_t k = 0; k < count; ++k) {
        const auto tokens = split_ws(next_line("Nodes"));
        std::uint64_t id = 0;
        if (tokens.size() != 4 || !parse_uint(tokens[0], id)) {
          msh_fail(Errc::malformed_section, "bad node line '" + line + "'");
        }
        node_ids.push_back(id);
      }
      expect_end("Nodes");
      have_nodes = true;
    } else if (line == "$Elements") {
      if (!have_format) msh_fail(Errc::malformed_section, "$Elements before $MeshFormat");
      std::size_t count = 0;
      const auto header = split_ws(next_line("Elements"));
      if (header.size() != 1 || !parse_uint(header[0], count)) {
        msh_fail(Errc::malformed_section, "bad element count");
      }
      for (std::size_t k = 0; k < count; ++k) {
        const auto tokens = split_ws(next_line("Elements"));
        std::uint64_t number = 0, type = 0, ntags = 0;
        if (tokens.size() < 3 || !parse_uint(tokens[0], number) ||
            !parse_uint(tokens[1], type) || !parse_uint(tokens[2], ntags)) {
          msh_fail(Errc::malformed_section, "bad element line '" + line + "'");
        }
        if (type != 3) continue;
        if (tokens.size() != 3 + ntags + 4) {
          msh_fail(Errc::malformed_section,
                   "quadrangle element " + std::to_string(number) +
                       " does not list 4 nodes");
        }
        std::array<std::uint64_t, 4> q{};
        for (int v = 0; v < 4; ++v) {
          if (!parse_uint(tokens[3 + ntags + v], q[v])) {
            msh_fail(Errc::malformed_section, "bad node reference");
          }
        }
        quads.push_back(q);
      }
      expect_end("Elements");
      have_elements = true;
    } else if (line.front() == '$') {
      // Sections we do not consume, e.g. $PhysicalNames.
      const std::string end = "$End" + line.substr(1);
      const std::string name = line.substr(1);
      while (next_line(name.c_str()) != end) {
      }
    } else {
      msh_fail(Errc::malformed_section, "unexpected line '" + line + "'");
    }
  }

  if (!have_format) msh_fail(Errc::malformed_section, "missing $MeshFormat");
  if (!have_nodes) msh_fail(Errc::malformed_section, "missing $Nodes");
  if (!have_elements) msh_fail(Errc::malformed_section, "missing $Elements");
  if (quads.empty()) {
    msh_fail(Errc::no_quadrangles, "no type-3 elements");
  }

  std::vector<std::uint64_t> sorted = node_ids;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    msh_fail(Errc::malformed_section, "duplicate node id");
  }
  std::vector<QuadCell> cells;
  cells.reserve(quads.size());
  for (const auto& q : quads) {
    QuadCell cell;
    for (int v = 0; v < 4; ++v) {
      auto it = std::lower_bound(sorted.begin(), sorted.end(), q[v]);
      if (it == sorted.end() || *it != q[v]) {
        msh_fail(Errc::malformed_section,
                 "element references unknown node " + std::to_string(q[v]));
      }
      cell[v] = static_cast<VertexId>(it - sorted.begin());
    }
    cells.push_back(cell);
  }
  return QuadMesh::build(sorted.size(), std::move(cells));
}

std::string write_native(const QuadMesh& mesh) {
  std::ostringstream os;
  os << "quadmesh " << mesh.num_vertices() << ' ' << mesh.num_cells() << '\n';
  for (const QuadCell& q : mesh.cells()) {
    os << q[0] << ' ' << q[1] << ' ' << q[2] << ' ' << q[3] << '\n';
  }
  return os.str();
}

QuadMesh read_native(std::string_view text) {
  auto lines = split_lines(text);
  if (lines.empty()) parse_fail(1, "empty input");

  const auto header = split_ws(lines[0]);
  std::size_t nv = 0, nc = 0;
  if (header.size() != 3 || header[0] != "quadmesh" ||
      !parse_uint(header[1], nv) || !parse_uint(header[2], nc)) {
    parse_fail(1, "expected 'quadmesh <nv> <nc>'");
  }
  if (lines.size() != nc + 1) {
    parse_fail(lines.size() + 1, "expected " + std::to_string(nc) +
                                     " cell lines, found " +
                                     std::to_string(lines.size() - 1));
  }
  std::vector<QuadCell> cells;
  cells.reserve(nc);
  for (std::size_t k = 1; k <= nc; ++k) {
    const auto tokens = split_ws(lines[k]);
    if (tokens.size() != 4) parse_fail(k + 1, "expected 4 vertex indices");
    QuadCell q;
    for (int v = 0; v < 4; ++v) {
      if (!parse_uint(tokens[v], q[v])) parse_fail(k + 1, "bad vertex index");
    }
    cells.push_back(q);
  }
  return QuadMesh::build(nv, std::move(cells));
}

std::string write_orientation(const QuadMesh& mesh,
                              const OrientationMap& orientation) {
  if (orientation.size() != mesh.num_edges()) {
    throw Error(Errc::missing_edge, "orientation does not cover the mesh");
  }
  std::string out;
  out.reserve(mesh.num_edges() * 16);
  for (EdgeId e = 0; e < mesh.num_edges(); ++e) {
    if (!orientation.defined(e)) {
      std::ostringstream os;
      os << "edge " << mesh.edge(e) << " has no orientation";
      throw Error(Errc::missing_edge, os.str());
    }
    const EdgeKey key = mesh.edge(e);
    out += std::to_string(key.lo);
    out += ' ';
    out += std::to_string(key.hi);
    out += orientation[e] == RelOrientation::same ? " +\n" : " -\n";
  }
  return out;
}

OrientationMap read_orientation(const QuadMesh& mesh, std::string_view text) {
  OrientationMap map(mesh.num_edges());
  const auto lines = split_lines(text);
  for (std::size_t k = 0; k < lines.size(); ++k) {
    const auto tokens = split_ws(lines[k]);
    EdgeKey key;
    if (tokens.size() != 3 || !parse_uint(tokens[0], key.lo) ||
        !parse_uint(tokens[1], key.hi) ||
        (tokens[2] != "+" && tokens[2] != "-")) {
      parse_fail(k + 1, "expected '<lo> <hi> <+|->'");
    }
    if (key.lo >= key.hi) parse_fail(k + 1, "endpoints must satisfy lo < hi");
    const auto e = mesh.find_edge(key);
    if (!e) {
      std::ostringstream os;
      os << "line " << k + 1 << ": edge " << key << " is not in the mesh";
      throw Error(Errc::unknown_edge, os.str());
    }
    if (map.defined(*e)) parse_fail(k + 1, "edge listed twice");
    map.set(*e, rel_from_bool(tokens[2] == "-"));
  }
  for (EdgeId e = 0; e < mesh.num_edges(); ++e) {
    if (!map.defined(e)) {
      std::ostringstream os;
      os << "edge " << mesh.edge(e) << " has no orientation line";
      throw Error(Errc::missing_edge, os.str());
    }
  }
  return map;
}

std::string write_rounds_csv(const std::vector<RoundsRow>& rows) {
  if (rows.empty()) throw Error(Errc::empty_input, "no rounds rows");
  std::string out = "P,rounds\n";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].processes == 0 || rows[k].rounds == 0) {
      throw Error(Errc::parse_error, "rounds rows must be positive");
    }
    if (k > 0 && rows[k].processes <= rows[k - 1].processes) {
      throw Error(Errc::parse_error, "P must be strictly increasing");
    }
    out += std::to_string(rows[k].processes);
    out += ',';
    out += std::to_string(rows[k].rounds);
    out += '\n';
  }
  return out;
}

std::vector<RoundsRow> read_rounds_csv(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty() || lines[0] != "P,rounds") {
    parse_fail(1, "expected header 'P,rounds'");
  }
  std::vector<RoundsRow> rows;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto comma = lines[k].find(',');
    RoundsRow row;
    if (comma == std::string_view::npos ||
        !parse_uint(lines[k].substr(0, comma), row.processes) ||
        !parse_uint(lines[k].substr(comma + 1), row.rounds)) {
      parse_fail(k + 1, "expected '<P>,<rounds>'");
    }
    if (!rows.empty() && row.processes <= rows.back().processes) {
      parse_fail(k + 1, "P must be strictly increasing");
    }
    rows.push_back(row);
  }
  if (rows.empty()) throw Error(Errc::empty_input, "no rounds rows");
  return rows;
}

MeshFormat format_for_path(const std::filesystem::path& path) {
  return path.extension() == ".msh" ? MeshFormat::msh : MeshFormat::native;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

QuadMesh load_mesh(const std::filesystem::path& path, MeshFormat format) {
  if (format == MeshFormat::msh) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return read_msh(in);
  }
  return read_native(read_file(path));
}

}  // namespace quadorient
