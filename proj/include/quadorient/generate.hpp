#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "quadorient/mesh.hpp"

namespace quadorient {

/// Structured grid of nx * ny cells. Periodic directions need at least 3
/// cells; twist_x glues the x-ends with a vertical flip and needs periodic_x.
struct GridSpec {
  std::uint32_t nx = 1;
  std::uint32_t ny = 1;
  bool periodic_x = false;
  bool periodic_y = false;
  bool twist_x = false;
};

/// Vertices are numbered row-major. Cell (i, j) has the cyclic vertices
/// (v(i,j), v(i+1,j), v(i+1,j+1), v(i,j+1)), wrapped per periodicity; when
/// the x-wrap is twisted, row j on the far end becomes row ny - j.
/// Throws Error(invalid_spec).
QuadMesh gen_structured(const GridSpec& spec);

/// Surface of the [0,n]^3 lattice cube: 6 faces of n * n cells, glued along
/// cube edges and corners. Every edge has two cells. Throws for n == 0.
QuadMesh gen_cubed_sphere(std::uint32_t n);

/// SplitMix64 (Steele, Lea, Flood 2014). Shuffles use only this generator
/// and `below(n) = next() % n`, so results are reproducible anywhere:
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t below(std::uint64_t n) { return next() % n; }

 private:
  std::uint64_t state_;
};

/// Fisher-Yates from the back: for i = n-1 down to 1 swap p[i], p[below(i+1)].
template <typename T>
void shuffle_in_place(std::vector<T>& items, SplitMix64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(items[i - 1], items[j]);
  }
}

struct ShuffledMesh {
  QuadMesh mesh;
  /// New id of every old vertex.
  std::vector<VertexId> vertex_map;
  /// Old index of every new cell.
  std::vector<CellId> cell_origin;
};

/// Relabels a mesh isomorphically, drawing from one SplitMix64(seed) in this
/// order: vertex permutation (new id of old vertex v is p[v], p shuffled from
/// the identity), then per old cell a rotation below(4) and a reflection
/// below(2), then the cell order permutation. The grid provenance is dropped.
ShuffledMesh shuffle_mesh_mapped(const QuadMesh& mesh, std::uint64_t seed);

QuadMesh shuffle_mesh(const QuadMesh& mesh, std::uint64_t seed);

/// Named mesh families used by the CLI and the experiment drivers.
enum class MeshKind { square, torus, moebius, cubed_sphere };

struct MeshSpec {
  MeshKind kind = MeshKind::square;
  std::uint32_t nx = 1;
  std::uint32_t ny = 1;
  std::uint32_t n = 1;
  bool shuffle = false;
  std::uint64_t seed = 0;
};

MeshKind parse_mesh_kind(const std::string& name);
std::string to_string(MeshKind kind);

QuadMesh generate(const MeshSpec& spec);

/// The grid spec whose gen_structured output equals `mesh` cell for cell, if
/// any. Lets meshes read back from files regain their grid shape.
std::optional<GridSpec> recognize_grid(const QuadMesh& mesh);

}  // namespace quadorient
