// End-to-end tests of the ccp binary via std::system. The binary path is
// injected by the build (CCP_CLI_PATH).

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

struct RunResult {
  int exit_code = -1;
  std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
  const std::string out_path = "/tmp/ccp_cli_out.txt";
  const std::string cmd =
      std::string(CCP_CLI_PATH) + " " + args + " > " + out_path + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(status);
  std::ifstream in(out_path);
  std::ostringstream ss;
  ss << in.rdbuf();
  r.stdout_text = ss.str();
  return r;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("validate: catalog wave spec passes, degenerate specs fail", "[cli]") {
  CHECK(run_cli("validate --example wave").exit_code == 0);
  CHECK(run_cli("validate --example varspeed").exit_code == 0);

  const auto parabolic = run_cli("validate --example parabolic-bad --json-report /tmp/ccp_p.json");
  CHECK(parabolic.exit_code == 1);
  const auto rep = nlohmann::json::parse(read_file("/tmp/ccp_p.json"));
  CHECK_FALSE(rep["pass"].get<bool>());
  bool hyperbolicity_failed = false;
  for (const auto& c : rep["checks"])
    if (c["name"] == "hyperbolicity" && !c["pass"].get<bool>()) hyperbolicity_failed = true;
  CHECK(hyperbolicity_failed);

  const auto wrong = run_cli("validate --example wrong-pair --json-report /tmp/ccp_w.json");
  CHECK(wrong.exit_code == 1);
  const auto wrep = nlohmann::json::parse(read_file("/tmp/ccp_w.json"));
  bool char_failed = false;
  for (const auto& c : wrep["checks"])
    if (c["name"] == "characteristic-equation" && !c["pass"].get<bool>()) {
      char_failed = true;
      CHECK(c["max_residual"].get<double>() == Catch::Approx(1.0));
    }
  CHECK(char_failed);
}

TEST_CASE("validate: unreadable spec and bad expressions exit 2", "[cli]") {
  CHECK(run_cli("validate /nonexistent/path.spec").exit_code == 2);
  {
    std::ofstream bad("/tmp/ccp_bad.spec");
    bad << "[equation]\na = x1 +\nb = 0\nc = -1\nf = 0\n";
  }
  CHECK(run_cli("validate /tmp/ccp_bad.spec").exit_code == 2);
}

TEST_CASE("check-identity: catalog triples end to end", "[cli]") {
  const auto wave = run_cli(
      "check-identity --example wave --rect -1 1 -1 1 --json-report /tmp/ccp_i1.json");
  CHECK(wave.exit_code == 0);

  const auto expc = run_cli(
      "check-identity --example dxdy-exp --rect 0 1 0 1 --json-report /tmp/ccp_i2.json");
  CHECK(expc.exit_code == 0);
  const auto rep = nlohmann::json::parse(read_file("/tmp/ccp_i2.json"));
  const double closed = (std::exp(1.0) - 1.0) * (std::exp(1.0) - 1.0);
  CHECK(rep["lhs"].get<double>() == Catch::Approx(closed).margin(1e-12));
  CHECK(rep["rhs"].get<double>() == Catch::Approx(closed).margin(1e-12));

  const auto vs = run_cli("check-identity --example varspeed --rect 0 0.75 1.25 2");
  CHECK(vs.exit_code == 0);

  // a non-solution must fail the threshold
  const auto bad = run_cli(
      "check-identity --example wave --rect -1 1 -1 1 --solution x1^2");
  CHECK(bad.exit_code == 1);
}

TEST_CASE("solve: mixed-wave manufactured grid run with error report", "[cli]") {
  const auto r = run_cli(
      "solve --example mixed-manufactured --grid 51x51 --out /tmp/ccp_m.csv "
      "--json-report /tmp/ccp_m.json");
  CHECK(r.exit_code == 0);
  const auto rep = nlohmann::json::parse(read_file("/tmp/ccp_m.json"));
  CHECK(rep["max_error_vs_reference"].get<double>() <= 1e-9);
  CHECK(rep["points"].get<int>() == 2601);
  // header + 2601 rows
  const std::string csv = read_file("/tmp/ccp_m.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2602);
  CHECK(csv.rfind("x1,x2,u\n", 0) == 0);
}

TEST_CASE("solve: darboux point value against the grid oracle value", "[cli]") {
  const auto r = run_cli(
      "solve --example darboux-const --at 1 1 --json-report /tmp/ccp_d.json");
  CHECK(r.exit_code == 0);
  const auto rep = nlohmann::json::parse(read_file("/tmp/ccp_d.json"));
  CHECK(rep["max_error_vs_reference"].get<double>() <= 1e-8);
}

TEST_CASE("solve: zero-lower-order Picard reports one iteration", "[cli]") {
  const auto r = run_cli(
      "solve --example goursat-linear-pure --json-report /tmp/ccp_g.json");
  CHECK(r.exit_code == 0);
  const auto rep = nlohmann::json::parse(read_file("/tmp/ccp_g.json"));
  CHECK(rep["iterations"].get<int>() == 1);
  CHECK(rep["converged"].get<bool>());
}

TEST_CASE("solve: CSV output is byte-identical across runs", "[cli]") {
  const std::string args =
      "solve --example goursat-bilinear --grid 21x21 --out /tmp/ccp_det";
  CHECK(run_cli(args + "1.csv").exit_code == 0);
  CHECK(run_cli(args + "2.csv").exit_code == 0);
  const std::string a = read_file("/tmp/ccp_det1.csv");
  const std::string b = read_file("/tmp/ccp_det2.csv");
  REQUIRE(!a.empty());
  CHECK(a == b);
  CHECK(a.find('\r') == std::string::npos);  // LF endings only
}

TEST_CASE("trace: exports the traced lattice as CSV", "[cli]") {
  const auto r = run_cli("trace --example varspeed-traced --out /tmp/ccp_t.csv");
  CHECK(r.exit_code == 0);
  const std::string csv = read_file("/tmp/ccp_t.csv");
  CHECK(csv.rfind("x1,x2,gamma1,gamma2\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 33 * 33);
}

TEST_CASE("list-examples names every shipped spec", "[cli]") {
  const auto r = run_cli("list-examples");
  CHECK(r.exit_code == 0);
  for (const char* name : {"wave", "dxdy-exp", "varspeed", "goursat-bilinear",
                           "mixed-manufactured", "darboux-const", "goursat-linear-exp"})
    CHECK(r.stdout_text.find(name) != std::string::npos);
}
