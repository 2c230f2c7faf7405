#include "quadorient/generate.hpp"

#include <algorithm>
#include <numeric>

#include "quadorient/error.hpp"

namespace quadorient {

QuadMesh gen_structured(const GridSpec& spec) {
  if (spec.nx < 1 || spec.ny < 1) {
    throw Error(Errc::invalid_spec, "grid needs at least one cell per side");
  }
  if (spec.twist_x && !spec.periodic_x) {
    throw Error(Errc::invalid_spec, "twist_x requires periodic_x");
  }
  if (spec.periodic_x && spec.nx < 3) {
    throw Error(Errc::invalid_spec, "periodic x needs nx >= 3");
  }
  if (spec.periodic_y && spec.ny < 3) {
    throw Error(Errc::invalid_spec, "periodic y needs ny >= 3");
  }

  const std::uint32_t cols = spec.periodic_x ? spec.nx : spec.nx + 1;
  const std::uint32_t rows = spec.periodic_y ? spec.ny : spec.ny + 1;

  auto vertex = [&](std::uint32_t i, std::uint32_t j) -> VertexId {
    if (spec.periodic_x && i == spec.nx) {
      i = 0;
      if (spec.twist_x) j = spec.ny - j;
    }
    if (spec.periodic_y) j %= spec.ny;
    return static_cast<VertexId>(j) * cols + i;
  };

  std::vector<QuadCell> cells;
  cells.reserve(static_cast<std::size_t>(spec.nx) * spec.ny);
  for (std::uint32_t j = 0; j < spec.ny; ++j) {
    for (std::uint32_t i = 0; i < spec.nx; ++i) {
      cells.push_back({vertex(i, j), vertex(i + 1, j), vertex(i + 1, j + 1),
                       vertex(i, j + 1)});
    }
  }
  GridShape shape{spec.nx, spec.ny, spec.periodic_x, spec.periodic_y,
                  spec.twist_x};
  return QuadMesh::build(static_cast<std::size_t>(cols) * rows,
                         std::move(cells), shape);
}

QuadMesh gen_cubed_sphere(std::uint32_t n) {
  if (n < 1) throw Error(Errc::invalid_spec, "cubed sphere needs n >= 1");

  const std::size_t side = n + 1;
  // Lattice points on the cube surface, numbered in (x, y, z) lexicographic
  // order.
  std::vector<VertexId> id(side * side * side, ~VertexId{0});
  auto at = [&](std::uint32_t x, std::uint32_t y, std::uint32_t z) {
    return (static_cast<std::size_t>(x) * side + y) * side + z;
  };
  VertexId next = 0;
  for (std::uint32_t x = 0; x <= n; ++x) {
    for (std::uint32_t y = 0; y <= n; ++y) {
      for (std::uint32_t z = 0; z <= n; ++z) {
        const bool surface =
            x == 0 || x == n || y == 0 || y == n || z == 0 || z == n;
        if (surface) id[at(x, y, z)] = next++;
      }
    }
  }

  std::vector<QuadCell> cells;
  cells.reserve(6 * static_cast<std::size_t>(n) * n);
  for (int axis = 0; axis < 3; ++axis) {
    const int b = (axis + 1) % 3;
    const int c = (axis + 2) % 3;
    for (std::uint32_t level : {0u, n}) {
      auto point = [&](std::uint32_t s, std::uint32_t t) {
        std::uint32_t p[3];
        p[axis] = level;
        p[b] = s;
        p[c] = t;
        return id[at(p[0], p[1], p[2])];
      };
      for (std::uint32_t t = 0; t < n; ++t) {
        for (std::uint32_t s = 0; s < n; ++s) {
          QuadCell q{point(s, t), point(s + 1, t), point(s + 1, t + 1),
                     point(s, t + 1)};
          // Outward winding on both faces of the axis.
          if (level == 0) std::swap(q[1], q[3]);
          cells.push_back(q);
        }
      }
    }
  }
  return QuadMesh::build(next, std::move(cells));
}

ShuffledMesh shuffle_mesh_mapped(const QuadMesh& mesh, std::uint64_t seed) {
  SplitMix64 rng(seed);

  std::vector<VertexId> vertex_map(mesh.num_vertices());
  std::iota(vertex_map.begin(), vertex_map.end(), VertexId{0});
  shuffle_in_place(vertex_map, rng);

  std::vector<QuadCell> relabeled;
  relabeled.reserve(mesh.num_cells());
  for (const QuadCell& q : mesh.cells()) {
    const auto rotation = static_cast<int>(rng.below(4));
    const bool reflect = rng.below(2) == 1;
    QuadCell out;
    for (int k = 0; k < 4; ++k) {
      const int src = reflect ? (rotation - k + 4) % 4 : (rotation + k) % 4;
      out[k] = vertex_map[q[src]];
    }
    relabeled.push_back(out);
  }

  std::vector<CellId> order(mesh.num_cells());
  std::iota(order.begin(), order.end(), CellId{0});
  shuffle_in_place(order, rng);

  std::vector<QuadCell> cells;
  cells.reserve(order.size());
  for (CellId old : order) cells.push_back(relabeled[old]);

  return {QuadMesh::build(mesh.num_vertices(), std::move(cells)),
          std::move(vertex_map), std::move(order)};
}

QuadMesh shuffle_mesh(const QuadMesh& mesh, std::uint64_t seed) {
  return shuffle_mesh_mapped(mesh, seed).mesh;
}

MeshKind parse_mesh_kind(const std::string& name) {
  if (name == "square") return MeshKind::square;
  if (name == "torus") return MeshKind::torus;
  if (name == "moebius") return MeshKind::moebius;
  if (name == "cubed-sphere") return MeshKind::cubed_sphere;
  throw Error(Errc::invalid_spec, "unknown mesh kind '" + name + "'");
}

std::string to_string(MeshKind kind) {
  switch (kind) {
    case MeshKind::square: return "square";
    case MeshKind::torus: return "torus";
    case MeshKind::moebius: return "moebius";
    case MeshKind::cubed_sphere: return "cubed-sphere";
  }
  return "unknown";
}

QuadMesh generate(const MeshSpec& spec) {
  QuadMesh mesh;
  switch (spec.kind) {
    case MeshKind::square:
      mesh = gen_structured({spec.nx, spec.ny, false, false, false});
      break;
    case MeshKind::torus:
      mesh = gen_structured({spec.nx, spec.ny, true, true, false});
      break;
    case MeshKind::moebius:
      mesh = gen_structured({spec.nx, spec.ny, true, false, true});
      break;
    case MeshKind::cubed_sphere:
      mesh = gen_cubed_sphere(spec.n);
      break;
  }
  if (spec.shuffle) mesh = shuffle_mesh(mesh, spec.seed);
  return mesh;
}

std::optional<GridSpec> recognize_grid(const QuadMesh& mesh) {
  const std::size_t cells = mesh.num_cells();
  static constexpr GridSpec kFlags[] = {{1, 1, false, false, false},
                                        {1, 1, true, false, false},
                                        {1, 1, false, true, false},
                                        {1, 1, true, true, false},
                                        {1, 1, true, false, true},
                                        {1, 1, true, true, true}};
  for (std::size_t nx = 1; nx <= cells; ++nx) {
    if (cells % nx != 0) continue;
    const std::size_t ny = cells / nx;
    for (GridSpec spec : kFlags) {
      if ((spec.periodic_x && nx < 3) || (spec.periodic_y && ny < 3)) continue;
      const std::size_t nv = (nx + (spec.periodic_x ? 0 : 1)) *
                             (ny + (spec.periodic_y ? 0 : 1));
      if (nv != mesh.num_vertices()) continue;
      spec.nx = static_cast<std::uint32_t>(nx);
      spec.ny = static_cast<std::uint32_t>(ny);
      if (gen_structured(spec) == mesh) return spec;
    }
  }
  return std::nullopt;
}

}  // namespace quadorient
