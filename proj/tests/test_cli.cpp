#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>

#include "nilgraph/io.hpp"

using nilgraph::Json;

namespace {

struct CliRun {
  int exit_code = -1;
  std::string out;
};

std::string fixture(const std::string& name) { return nilgraph::fixture_dir() + "/" + name + ".toml"; }

// Runs the CLI with the given arguments, capturing stdout; stderr is
// redirected to `err_path` when given.
CliRun run(const std::string& args, const std::string& err_path = "/dev/null") {
  const std::string cmd = std::string(NILGRAPH_CLI) + " " + args + " 2>" + err_path;
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string temp_path(const std::string& leaf) {
  return (std::filesystem::temp_directory_path() / ("nilgraph_cli_" + leaf)).string();
}

}  // namespace

TEST(Cli, ClassifyFirstSl32Graph) {
  const CliRun r = run("classify --spec " + fixture("sl32"));
  ASSERT_EQ(r.exit_code, 0);
  const Json j = Json::parse(r.out);
  const std::string dump = j.dump();
  EXPECT_NE(dump.find("\"v2\",\"v5\",\"v4\",\"v6\""), std::string::npos) << dump;
  EXPECT_NE(dump.find("MultipleLongCycles"), std::string::npos) << dump;
}

TEST(Cli, ClassifySecondSl32Graph) {
  const CliRun r = run("classify --subgroup 1 --spec " + fixture("sl32"));
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_NE(Json::parse(r.out).dump().find("\"v3\",\"v7\",\"v6\",\"v5\""), std::string::npos);
}

TEST(Cli, ThreeStepOnC5IsValidationError) {
  const std::string err = temp_path("c5.err");
  const CliRun r = run("algebra --step 3 --spec " + fixture("c5"), err);
  EXPECT_EQ(r.exit_code, 2);
  const Json j = Json::parse(nilgraph::read_file(err));
  EXPECT_EQ(j["error"], "NoAdmissibleLabel");
  std::filesystem::remove(err);
}

TEST(Cli, MissingSpecFileIsValidationError) {
  EXPECT_EQ(run("graph --spec /nonexistent/spec.toml").exit_code, 2);
  EXPECT_EQ(run("graph").exit_code, 2);
}

TEST(Cli, GassmannOnSl32) {
  const CliRun r = run("gassmann --spec " + fixture("sl32"));
  ASSERT_EQ(r.exit_code, 0);
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["almost_conjugate"], true);
  EXPECT_FALSE(j["classes"].empty());
  EXPECT_EQ(j["intertwiner_dim"], 2);
  EXPECT_EQ(j["isometry_residual"], "0");
  EXPECT_EQ(j["transplant"]["ok"], true);
}

TEST(Cli, AlgebraJsonRoundTripsToLibraryValue) {
  const CliRun r = run("algebra --step 3 --t-assignment paper --spec " + fixture("sl32"));
  ASSERT_EQ(r.exit_code, 0);
  const auto spec = nilgraph::load_fixture("sl32");
  const auto g = nilgraph::spec_graph(spec, nilgraph::spec_group(spec), 0);
  EXPECT_EQ(nilgraph::algebra_from_json(Json::parse(r.out)),
            nilgraph::three_step(g, *spec.subgroups[0].t_assignment));
}

TEST(Cli, VerifyReportsStepThree) {
  const CliRun r = run("verify --step 3 --t-assignment paper --spec " + fixture("sl32"));
  ASSERT_EQ(r.exit_code, 0);
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["jacobi"]["ok"], true);
  EXPECT_EQ(j["series"]["step"], 3);
}

TEST(Cli, DotOutputToFile) {
  const std::string out = temp_path("s4.dot");
  const CliRun r = run("graph --format dot --out " + out + " --spec " + fixture("s4_s3"));
  ASSERT_EQ(r.exit_code, 0);
  const std::string dot = nilgraph::read_file(out);
  EXPECT_EQ(dot.rfind("digraph", 0), 0u);
  EXPECT_NE(dot.find("z1"), std::string::npos);
  EXPECT_NE(dot.find("He"), std::string::npos);
  std::filesystem::remove(out);
}

TEST(Cli, ByteDeterministicIsometrySearch) {
  const std::string args =
      "isometry --step 3 --t-assignment paper --restarts 3 --seed 7 --spec " + fixture("sl32");
  const CliRun a = run(args);
  const CliRun b = run("isometry --step 3 --t-assignment paper --restarts 3 --seed 7 --spec " +
                    fixture("sl32"));
  ASSERT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.out, b.out);
  const CliRun c = run("isometry --step 3 --t-assignment paper --restarts 3 --seed 8 --spec " +
                    fixture("sl32"));
  EXPECT_NE(a.out, c.out);
}
