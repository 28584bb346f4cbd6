// Integration tests: drive the installed binary end to end through demo
// project files and check exit codes, witnesses, and report determinism.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const std::string& args, const std::string& out_path = "/tmp/strataforms_cli_out.txt") {
  std::string cmd = std::string(CLI_BINARY) + " " + args + " > " + out_path + " 2>&1";
  int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

const char* kDemoDir = "/tmp/strataforms_cli_demo";

}  // namespace

TEST_CASE("demo projects are written") {
  REQUIRE(run(std::string("demo --out ") + kDemoDir) == 0);
  CHECK(!slurp(std::string(kDemoDir) + "/split_square.json").empty());
}

TEST_CASE("validate: well-formed project passes, missing edge fails with witness") {
  std::string demo = kDemoDir;
  CHECK(run("validate --project " + demo + "/split_square.json") == 0);

  int code = run("validate --project " + demo + "/missing_edge.json",
                 "/tmp/strataforms_fail_out.txt");
  CHECK(code == 1);
  std::string out = slurp("/tmp/strataforms_fail_out.txt");
  CHECK(out.find("FAIL frontier:box") != std::string::npos);
}

TEST_CASE("stokes, betti, derham, poincare, smooth exit codes") {
  std::string demo = kDemoDir;
  CHECK(run("stokes --project " + demo + "/split_square.json --form w --chain square") == 0);
  CHECK(run("betti --project " + demo + "/octahedron.json --complex oct") == 0);
  CHECK(run("derham --project " + demo + "/octahedron.json --complex oct") == 0);
  CHECK(run("poincare --project " + demo + "/cone_square.json --form w --retraction r") == 0);
  CHECK(run("smooth --project " + demo + "/grid_smooth.json --grid g --eps 0.2 0.1 0.05") == 0);
  // unknown ids surface as errors, not crashes
  CHECK(run("betti --project " + demo + "/octahedron.json --complex nope") == 2);
}

TEST_CASE("reports are byte-identical across reruns") {
  std::string demo = kDemoDir;
  REQUIRE(run("validate --project " + demo + "/split_square.json --report /tmp/sf_rep_a.json") ==
          0);
  REQUIRE(run("validate --project " + demo + "/split_square.json --report /tmp/sf_rep_b.json") ==
          0);
  CHECK(slurp("/tmp/sf_rep_a.json") == slurp("/tmp/sf_rep_b.json"));
  CHECK(!slurp("/tmp/sf_rep_a.json").empty());

  REQUIRE(run("stokes --project " + demo +
              "/split_square.json --form w --chain square --report /tmp/sf_rep_c.json") == 0);
  REQUIRE(run("stokes --project " + demo +
              "/split_square.json --form w --chain square --report /tmp/sf_rep_d.json") == 0);
  CHECK(slurp("/tmp/sf_rep_c.json") == slurp("/tmp/sf_rep_d.json"));
}

TEST_CASE("jobs flag keeps results identical") {
  std::string demo = kDemoDir;
  REQUIRE(run("stokes --project " + demo +
              "/split_square.json --form w --chain square --jobs 4 --report /tmp/sf_rep_j.json") ==
          0);
  CHECK(slurp("/tmp/sf_rep_j.json") == slurp("/tmp/sf_rep_c.json"));
}

TEST_CASE("schema text is printed") {
  REQUIRE(run("schema", "/tmp/sf_schema.txt") == 0);
  std::string s = slurp("/tmp/sf_schema.txt");
  CHECK(s.find("stratified_forms") != std::string::npos);
}
