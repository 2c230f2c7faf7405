#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "quadorient/generate.hpp"
#include "quadorient/io.hpp"

namespace fs = std::filesystem;
using namespace quadorient;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("quadorient-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  /// Runs the tool with stdout and stderr captured to files; returns the
  /// exit status.
  int run(const std::string& args) {
    const std::string cmd = std::string(QUADORIENT_CLI) + " " + args + " >" + path("stdout") +
                            " 2>" + path("stderr");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string out() const { return read_file(path("stdout")); }
  std::string err() const { return read_file(path("stderr")); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, GenSquare) {
  ASSERT_EQ(run("gen square --nx 3 --ny 3 -o " + path("sq.mesh")), 0);
  const QuadMesh m = read_native(read_file(path("sq.mesh")));
  EXPECT_EQ(m.num_vertices(), 16u);
  EXPECT_EQ(m.num_cells(), 9u);
}

TEST_F(Cli, GenVariants) {
  ASSERT_EQ(run("gen moebius --nx 5 -o " + path("m.mesh")), 0);
  EXPECT_EQ(read_native(read_file(path("m.mesh"))), gen_structured({5, 1, true, false, true}));
  ASSERT_EQ(run("gen cubed-sphere --n 2 --shuffle 7 -o " + path("c.mesh")), 0);
  EXPECT_EQ(read_native(read_file(path("c.mesh"))), shuffle_mesh(gen_cubed_sphere(2), 7));
  EXPECT_EQ(run("gen torus --nx 2 --ny 3"), 1);
  EXPECT_NE(err().find("InvalidSpec"), std::string::npos);
  EXPECT_EQ(run("gen hexagon"), 1);
}

TEST_F(Cli, OrientAndVerify) {
  ASSERT_EQ(run("gen square --nx 4 --ny 4 -o " + path("sq.mesh")), 0);
  for (const std::string algo : {"serial", "unionfind", "parallel --np 4",
                                 "parallel --np 4 --partitioner block"}) {
    ASSERT_EQ(run("orient " + path("sq.mesh") + " --algo " + algo + " -o " + path("o.txt")), 0)
        << algo;
    EXPECT_EQ(run("verify " + path("sq.mesh") + " " + path("o.txt")), 0) << algo;
  }
}

TEST_F(Cli, VerifyReportsViolations) {
  ASSERT_EQ(run("gen square --nx 2 --ny 1 -o " + path("s.mesh")), 0);
  ASSERT_EQ(run("orient " + path("s.mesh") + " -o " + path("o.txt")), 0);
  std::string text = read_file(path("o.txt"));
  const auto at = text.find("2 5 +");
  ASSERT_NE(at, std::string::npos);
  text[at + 4] = '-';
  write_file(path("bad.txt"), text);
  EXPECT_EQ(run("verify " + path("s.mesh") + " " + path("bad.txt")), 3);
  EXPECT_NE(err().find("cell 1"), std::string::npos);
  EXPECT_EQ(run("verify " + path("s.mesh") + " " + path("missing.txt")), 1);
}

TEST_F(Cli, MoebiusExitCode) {
  ASSERT_EQ(run("gen moebius --nx 5 -o " + path("m.mesh")), 0);
  for (const std::string algo : {"serial", "unionfind", "parallel --np 4"}) {
    EXPECT_EQ(run("orient " + path("m.mesh") + " --algo " + algo), 2) << algo;
    EXPECT_NE(err().find("moebius"), std::string::npos);
  }
  EXPECT_EQ(run("simulate " + path("m.mesh") + " --np 2"), 2);
}

TEST_F(Cli, UsageErrors) {
  ASSERT_EQ(run("gen square --nx 3 --ny 3 -o " + path("sq.mesh")), 0);
  EXPECT_EQ(run("orient " + path("sq.mesh") + " --algo parallel --np 0"), 1);
  EXPECT_EQ(run("orient " + path("sq.mesh") + " --algo magic"), 1);
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("--help"), 0);
}

TEST_F(Cli, HelpListsFlags) {
  ASSERT_EQ(run("simulate --help"), 0);
  for (const char* flag : {"--np", "--partitioner", "--seed", "--emit-rounds", "--emit-orientation"}) {
    EXPECT_NE(out().find(flag), std::string::npos) << flag;
  }
}

TEST_F(Cli, MshInput) {
  EXPECT_EQ(run("ribbons " + std::string(QUADORIENT_FIXTURES) + "/quad.msh"), 0);
  EXPECT_EQ(out(), "2 ribbons\n0: 0-1 2-3\n1: 0-2 1-3\n");
  // Extension says native, flag overrides.
  fs::copy_file(std::string(QUADORIENT_FIXTURES) + "/quad.msh", path("quad.mesh"));
  EXPECT_EQ(run("ribbons " + path("quad.mesh")), 1);
  EXPECT_EQ(run("ribbons --format msh " + path("quad.mesh")), 0);
}

TEST_F(Cli, Ribbons) {
  ASSERT_EQ(run("gen square --nx 3 --ny 3 -o " + path("sq.mesh")), 0);
  ASSERT_EQ(run("ribbons " + path("sq.mesh")), 0);
  EXPECT_EQ(out().substr(0, out().find('\n')), "6 ribbons");
  ASSERT_EQ(run("gen cubed-sphere --n 1 -o " + path("c.mesh")), 0);
  ASSERT_EQ(run("ribbons " + path("c.mesh")), 0);
  EXPECT_EQ(out().substr(0, out().find('\n')), "3 ribbons");
}

TEST_F(Cli, Scale) {
  ASSERT_EQ(run("scale --kind square --nx 128 --ny 128 --np 4,16,64 --out " + path("r.csv") +
                " --slope"),
            0);
  const auto rows = read_rounds_csv(read_file(path("r.csv")));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[2].processes, 64u);
  EXPECT_NE(err().find("slope "), std::string::npos);
  EXPECT_EQ(run("scale --kind square --nx 8 --ny 8 --np 7"), 1);
  EXPECT_NE(err().find("InvalidP"), std::string::npos);
}

TEST_F(Cli, SimulateOutputs) {
  ASSERT_EQ(run("gen torus --nx 7 --ny 7 -o " + path("t.mesh")), 0);
  ASSERT_EQ(run("simulate " + path("t.mesh") + " --np 4 --emit-rounds " + path("r.csv") +
                " --emit-orientation " + path("o.txt")),
            0);
  EXPECT_EQ(run("verify " + path("t.mesh") + " " + path("o.txt")), 0);
  EXPECT_EQ(read_rounds_csv(read_file(path("r.csv"))).size(), 1u);
  ASSERT_EQ(run("simulate " + path("t.mesh") + " --np 4 --schedule threaded --emit-orientation " +
                path("o2.txt")),
            0);
  EXPECT_EQ(read_file(path("o.txt")), read_file(path("o2.txt")));
  EXPECT_EQ(run("simulate " + path("t.mesh") + " --np 4 --emit-rounds /nonexistent/dir/r.csv"), 1);
}

TEST_F(Cli, PartitionDump) {
  ASSERT_EQ(run("gen square --nx 4 --ny 4 -o " + path("sq.mesh")), 0);
  ASSERT_EQ(run("partition " + path("sq.mesh") + " --np 4 --partitioner bfs"), 0);
  std::istringstream in(out());
  int lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  EXPECT_EQ(lines, 16);
}

TEST_F(Cli, Deterministic) {
  ASSERT_EQ(run("gen cubed-sphere --n 3 --shuffle 4 -o " + path("a.mesh")), 0);
  ASSERT_EQ(run("gen cubed-sphere --n 3 --shuffle 4 -o " + path("b.mesh")), 0);
  EXPECT_EQ(read_file(path("a.mesh")), read_file(path("b.mesh")));
  ASSERT_EQ(run("orient " + path("a.mesh") + " --algo parallel --np 5 -o " + path("a.txt")), 0);
  ASSERT_EQ(run("orient " + path("a.mesh") + " --algo parallel --np 5 -o " + path("b.txt")), 0);
  EXPECT_EQ(read_file(path("a.txt")), read_file(path("b.txt")));
}
