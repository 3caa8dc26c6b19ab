#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <string>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(POLYGAL_CLI) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe)) r.out += buf;
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("polygal_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const json& j) const {
    std::ofstream(path(name)) << j.dump();
    return path(name);
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, NormalsGen) {
  const CliRun r = run("normals gen --d 2 --level 2");
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_EQ(j["rows"].size(), 8u);
  EXPECT_EQ(j["d"], 2);
  EXPECT_EQ(json::parse(run("normals gen --d 2 --level 1").out)["rows"].size(), 4u);
}

TEST_F(Cli, InvalidDimensionExitsOne) {
  EXPECT_EQ(run("normals gen --d 1 --level 2").code, 1);
  EXPECT_EQ(run("normals gen").code, 106);  // CLI11 required-option error
}

TEST_F(Cli, CompileReportsCounts) {
  const CliRun g = run("normals gen --d 2 --level 2 --out " + path("n8.json"));
  ASSERT_EQ(g.code, 0);
  const CliRun c = run("--json compile --normals " + path("n8.json") + " --prune --out " + path("cone.json"));
  ASSERT_EQ(c.code, 0);
  const json report = json::parse(c.out);
  EXPECT_EQ(report["diamond"], 12);
  EXPECT_EQ(report["touching"], 24);
  EXPECT_EQ(report["pruned"], 16);
  const json cone = json::parse(slurp(path("cone.json")));
  EXPECT_EQ(cone["columns"].size(), 36u);
  EXPECT_EQ(cone["config"]["prune"], true);
}

TEST_F(Cli, UnboundedNormalsExitTwo) {
  const std::string n = write("unb.json", {{"schema_version", 1}, {"d", 2}, {"rows", {{1, 0}, {0, 1}, {-1, 0.2}}}});
  EXPECT_EQ(run("compile --normals " + n).code, 2);
}

TEST_F(Cli, CheckAndRealizeSquare) {
  const std::string n = write("sq.json", {{"schema_version", 1}, {"d", 2}, {"rows", {{1, 0}, {0, 1}, {-1, 0}, {0, -1}}}});
  ASSERT_EQ(run("compile --normals " + n + " --out " + path("cone.json")).code, 0);
  const json flat = json::parse(run("--json check --cone " + path("cone.json") + " --values 1,1,-1,1").out);
  EXPECT_EQ(flat["classification"], "boundary");
  const json ext = json::parse(run("--json check --cone " + path("cone.json") + " --values 1,1,-2,1").out);
  EXPECT_EQ(ext["classification"], "exterior");
  const CliRun real = run("realize --cone " + path("cone.json") + " --values 1,1,1,1");
  ASSERT_EQ(real.code, 0);
  EXPECT_EQ(json::parse(real.out)["vertices"].size(), 4u);
  EXPECT_NE(run("realize --cone " + path("cone.json") + " --values 1,1,-2,1").code, 0);
}

TEST_F(Cli, OptimizeIsDeterministicUpToWallTime) {
  const json problem = {
      {"schema_version", 1},
      {"sequence", {{"d", 2}, {"levels", {2, 3}}}},
      {"objective", {{"kind", "neg_volume"}}},
      {"constraints", json::array({{{"kind", "perimeter_le"}, {"limit", 6.283185307179586}}})},
      {"inner_body", {{"type", "point_hull"}, {"points", {{0, 0}}}}},
      {"outer_body", {{"type", "ball"}, {"center", {0, 0}}, {"radius", 2}}},
      {"lambda", 0.1}};
  const std::string p = write("problem.json", problem);
  ASSERT_EQ(run("optimize --problem " + p + " --out " + path("r1.json")).code, 0);
  ASSERT_EQ(run("--threads 3 optimize --problem " + p + " --out " + path("r2.json")).code, 0);
  const std::regex wall("\"wall_ms\": [^,\\n]*");
  const std::regex threads("\"threads\": [^,\\n]*");
  auto strip = [&](const std::string& s) { return std::regex_replace(std::regex_replace(s, wall, ""), threads, ""); };
  const std::string a = slurp(path("r1.json"));
  const std::string b = slurp(path("r2.json"));
  ASSERT_FALSE(a.empty());
  EXPECT_EQ(strip(a), strip(b));
  const json r = json::parse(a);
  EXPECT_EQ(r["levels"].size(), 2u);
  EXPECT_EQ(r["cross_level"][0]["k"], 2);
}

TEST_F(Cli, ConstantsOfHexagon) {
  const std::string n = write("hex.json", {{"schema_version", 1},
                                          {"d", 2},
                                          {"rows", {{1, 0}, {0.5, 0.8660254037844386}, {-0.5, 0.8660254037844386},
                                                    {-1, 0}, {-0.5, -0.8660254037844386}, {0.5, -0.8660254037844386}}}});
  const CliRun r = run("--json constants --normals " + n);
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["kappa_hat"].get<double>(), 1 / std::sqrt(3.0), 1e-9);
  EXPECT_NEAR(j["rho"].get<double>(), 0.5, 1e-12);
}
