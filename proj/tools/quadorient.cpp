// quadorient: generate quad meshes, orient their edges, check the result.
//
// Exit codes: 0 success, 1 usage or other error, 2 Moebius strip detected,
// 3 verify found violations.

#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "quadorient/error.hpp"
#include "quadorient/generate.hpp"
#include "quadorient/io.hpp"
#include "quadorient/negotiation.hpp"
#include "quadorient/orient_serial.hpp"
#include "quadorient/partition.hpp"
#include "quadorient/union_find.hpp"
#include "quadorient/verify.hpp"

namespace fs = std::filesystem;
using namespace quadorient;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitMoebius = 2;
constexpr int kExitInconsistent = 3;

struct MeshInput {
  std::string path;
  std::string format;

  void add_to(CLI::App* cmd) {
    cmd->add_option("mesh", path, "Mesh file (.mesh native, .msh Gmsh 2.x)")
        ->required();
    cmd->add_option("--format", format, "Override format detection")
        ->check(CLI::IsMember({"native", "msh"}));
  }

  QuadMesh load() const {
    MeshFormat f = format_for_path(path);
    if (format == "native") f = MeshFormat::native;
    if (format == "msh") f = MeshFormat::msh;
    QuadMesh mesh = load_mesh(path, f);
    // A plain generated grid gets its shape back so block partitioning works.
    if (const auto grid = recognize_grid(mesh)) return gen_structured(*grid);
    return mesh;
  }
};

struct GenArgs {
  std::string kind = "square";
  std::uint32_t nx = 1;
  std::uint32_t ny = 1;
  std::uint32_t n = 1;
  std::optional<std::uint64_t> shuffle;

  void add_to(CLI::App* cmd, bool positional_kind) {
    const auto kinds = CLI::IsMember({"square", "torus", "moebius", "cubed-sphere"});
    if (positional_kind) {
      cmd->add_option("kind", kind, "square | torus | moebius | cubed-sphere")
          ->required()
          ->check(kinds);
    } else {
      cmd->add_option("--kind", kind, "square | torus | moebius | cubed-sphere")
          ->check(kinds)
          ->capture_default_str();
    }
    cmd->add_option("--nx", nx, "Cells along x")->capture_default_str();
    cmd->add_option("--ny", ny, "Cells along y")->capture_default_str();
    cmd->add_option("--n", n, "Cube-sphere subdivisions per face edge")
        ->capture_default_str();
    cmd->add_option("--shuffle", shuffle,
                    "Relabel vertices and cells with this seed");
  }

  MeshSpec spec() const {
    MeshSpec s;
    s.kind = parse_mesh_kind(kind);
    s.nx = nx;
    s.ny = ny;
    s.n = n;
    s.shuffle = shuffle.has_value();
    s.seed = shuffle.value_or(0);
    return s;
  }
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_file(path, text);
  }
}

void require_processes(std::uint32_t np) {
  if (np < 1) throw Error(Errc::invalid_p, "--np must be at least 1");
}

Schedule parse_schedule(const std::string& name) {
  if (name == "sequential") return Schedule::sequential;
  if (name == "reversed") return Schedule::reversed;
  if (name == "shuffled") return Schedule::shuffled;
  return Schedule::threaded;
}

std::string describe(const MoebiusError& err) {
  std::ostringstream os;
  os << "moebius strip: edge (" << err.edge().lo << ", " << err.edge().hi
     << ") holds " << err.held() << " but propagation demands "
     << err.demanded();
  if (err.rank()) os << " (rank " << *err.rank() << ")";
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Consistent edge orientation for quadrilateral meshes"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a mesh in native format");
  GenArgs gen_args;
  std::string gen_out;
  gen_args.add_to(gen, true);
  gen->add_option("-o,--out", gen_out, "Output file (stdout when omitted)");

  // orient
  auto* orient = app.add_subcommand("orient", "Orient the edges of a mesh");
  MeshInput orient_in;
  std::string algo = "serial";
  std::uint32_t orient_np = 1;
  std::string orient_partitioner = "bfs";
  std::string orient_out;
  orient_in.add_to(orient);
  orient->add_option("--algo", algo, "serial | unionfind | parallel")
      ->check(CLI::IsMember({"serial", "unionfind", "parallel"}))
      ->capture_default_str();
  orient->add_option("--np", orient_np, "Simulated processes for --algo parallel")
      ->capture_default_str();
  orient->add_option("--partitioner", orient_partitioner, "block | bfs")
      ->check(CLI::IsMember({"block", "bfs"}))
      ->capture_default_str();
  orient->add_option("-o,--out", orient_out,
                     "Orientation file (stdout when omitted)");

  // verify
  auto* verify = app.add_subcommand(
      "verify", "Check an orientation file against a mesh; exit 3 if not consistent");
  MeshInput verify_in;
  std::string verify_orientation;
  verify_in.add_to(verify);
  verify->add_option("orientation", verify_orientation, "Orientation file")
      ->required();

  // ribbons
  auto* ribbon_cmd = app.add_subcommand("ribbons", "List the ribbons of a mesh");
  MeshInput ribbons_in;
  ribbons_in.add_to(ribbon_cmd);

  // scale
  auto* scale = app.add_subcommand(
      "scale", "Negotiation rounds against process count, as P,rounds CSV");
  GenArgs scale_args;
  std::vector<std::uint32_t> scale_np;
  std::string scale_partitioner = "block";
  std::string scale_out;
  scale_args.add_to(scale, false);
  scale->add_option("--np", scale_np, "Comma-separated process counts, ascending")
      ->required()
      ->delimiter(',');
  scale->add_option("--partitioner", scale_partitioner, "block | bfs")
      ->check(CLI::IsMember({"block", "bfs"}))
      ->capture_default_str();
  scale->add_option("--out", scale_out, "CSV file (stdout when omitted)");
  bool print_slope = false;
  scale->add_flag("--slope", print_slope,
                  "Print the log-log slope of rounds against P to stderr");

  // simulate
  auto* simulate = app.add_subcommand(
      "simulate", "Run the negotiation protocol and report its trace");
  MeshInput sim_in;
  std::uint32_t sim_np = 4;
  std::string sim_partitioner = "bfs";
  std::uint64_t sim_seed = 0;
  std::string sim_schedule = "sequential";
  unsigned sim_threads = 0;
  std::string sim_rounds_out;
  std::string sim_orientation_out;
  sim_in.add_to(simulate);
  simulate->add_option("--np", sim_np, "Simulated processes")->capture_default_str();
  simulate->add_option("--partitioner", sim_partitioner, "block | bfs")
      ->check(CLI::IsMember({"block", "bfs"}))
      ->capture_default_str();
  simulate->add_option("--seed", sim_seed, "Rank order seed for --schedule shuffled")
      ->capture_default_str();
  simulate->add_option("--schedule", sim_schedule,
                       "sequential | reversed | shuffled | threaded")
      ->check(CLI::IsMember({"sequential", "reversed", "shuffled", "threaded"}))
      ->capture_default_str();
  simulate->add_option("--threads", sim_threads,
                       "Workers for --schedule threaded (0: hardware)")
      ->capture_default_str();
  simulate->add_option("--emit-rounds", sim_rounds_out,
                       "Write the single P,rounds row as CSV");
  simulate->add_option("--emit-orientation", sim_orientation_out,
                       "Write the merged orientation");

  // partition
  auto* part = app.add_subcommand("partition", "Dump the cell partition as '<cell> <rank>' lines");
  MeshInput part_in;
  std::uint32_t part_np = 2;
  std::string part_partitioner = "bfs";
  std::string part_out;
  part_in.add_to(part);
  part->add_option("--np", part_np, "Number of parts")->capture_default_str();
  part->add_option("--partitioner", part_partitioner, "block | bfs")
      ->check(CLI::IsMember({"block", "bfs"}))
      ->capture_default_str();
  part->add_option("-o,--out", part_out, "Output file (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*gen) {
      emit(gen_out, write_native(generate(gen_args.spec())));
    } else if (*orient) {
      const QuadMesh mesh = orient_in.load();
      OrientationMap result;
      if (algo == "serial") {
        result = orient_serial(mesh);
      } else if (algo == "unionfind") {
        result = orient_unionfind(mesh);
      } else {
        require_processes(orient_np);
        RunOptions options;
        options.method = parse_partition_method(orient_partitioner);
        result = run_parallel(mesh, orient_np, options).orientation;
      }
      emit(orient_out, write_orientation(mesh, result));
    } else if (*verify) {
      const QuadMesh mesh = verify_in.load();
      const OrientationMap o = read_orientation(mesh, read_file(verify_orientation));
      const auto violations = check_consistent(mesh, o);
      if (!violations.empty()) {
        for (const Violation& v : violations) {
          std::cerr << "cell " << v.cell << ": edges (" << v.edge.lo << ", "
                    << v.edge.hi << ") and (" << v.opposite.lo << ", "
                    << v.opposite.hi << ") should be " << v.required << "\n";
        }
        std::cerr << violations.size() << " violation(s)\n";
        return kExitInconsistent;
      }
      std::cout << "consistent\n";
    } else if (*ribbon_cmd) {
      const QuadMesh mesh = ribbons_in.load();
      const RibbonPartition rp = ribbons(mesh);
      std::cout << rp.size() << " ribbons\n";
      for (std::size_t r = 0; r < rp.size(); ++r) {
        std::cout << r << ":";
        for (EdgeId e : rp.ribbons[r]) {
          std::cout << ' ' << mesh.edge(e).lo << '-' << mesh.edge(e).hi;
        }
        std::cout << '\n';
      }
    } else if (*scale) {
      for (std::uint32_t p : scale_np) require_processes(p);
      const QuadMesh mesh = generate(scale_args.spec());
      RunOptions options;
      options.method = parse_partition_method(scale_partitioner);
      const auto rows = scaling_sweep(mesh, scale_np, options);
      emit(scale_out, write_rounds_csv(rows));
      if (print_slope) {
        std::cerr << "slope " << std::fixed << std::setprecision(4)
                  << log_log_slope(rows) << "\n";
      }
    } else if (*simulate) {
      require_processes(sim_np);
      const QuadMesh mesh = sim_in.load();
      RunOptions options;
      options.method = parse_partition_method(sim_partitioner);
      options.schedule = parse_schedule(sim_schedule);
      options.seed = sim_seed;
      options.threads = sim_threads;
      const ParallelResult res = run_parallel(mesh, sim_np, options);
      std::cout << "rounds " << res.trace.rounds << "\nk_observed "
                << res.trace.k_observed << "\n";
      if (!sim_rounds_out.empty()) {
        emit(sim_rounds_out, write_rounds_csv({{sim_np, res.trace.rounds}}));
      }
      if (!sim_orientation_out.empty()) {
        emit(sim_orientation_out, write_orientation(mesh, res.orientation));
      }
    } else if (*part) {
      const QuadMesh mesh = part_in.load();
      emit(part_out, write_partition(partition_cells(
                         mesh, part_np, parse_partition_method(part_partitioner))));
    }
  } catch (const MoebiusError& err) {
    std::cerr << describe(err) << "\n";
    return kExitMoebius;
  } catch (const Error& err) {
    std::cerr << to_string(err.code()) << ": " << err.what() << "\n";
    return kExitError;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitError;
  }
  return kExitOk;
}
