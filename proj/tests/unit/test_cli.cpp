#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "groupoidal/cli.hpp"

using namespace groupoidal;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out, err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "groupoidal_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

// Structure file of the dimension-13 example, built once.
const fs::path& d13_file() {
  static const fs::path p = [] {
    const fs::path q = scratch("d13.json");
    REQUIRE(run({"build", "tl", "--l", "4", "--m", "2", "--out", q.string()}).code == 0);
    return q;
  }();
  return p;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("build exit codes") {
    const Run bad = run({"build", "tl", "--l", "4", "--m", "1"});
    CHECK(bad.code == kExitConstruction);
    CHECK(bad.err.find("depth 2") != std::string::npos);

    const fs::path p = scratch("l3m1.json");
    const Run ok = run({"build", "tl", "--l", "3", "--m", "1", "--out", p.string()});
    CHECK(ok.code == kExitPass);
    const StructureFile s = structure_file_from_json(Json::parse(slurp(p)));
    CHECK(s.A.dim() == 2);
    CHECK(s.B.dim() == 2);
    CHECK(s.l == 3);

    const Json j = Json::parse(slurp(d13_file()));
    CHECK(structure_file_from_json(j).A.dim() == 13);
  }

  TEST_CASE("reports are reproducible and self-describing") {
    const std::vector<std::string> args{"build", "tl", "--l", "4", "--m", "2", "--format", "json",
                                        "--seed", "7"};
    const Run a = run(args), b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    const Json j = Json::parse(a.out);
    CHECK(j["version"] == kLibraryVersion);
    CHECK(j["seed"] == 7);
    CHECK(j["tolerance"] == 1e-9);
    CHECK(j["passed"] == true);

    const fs::path r1 = scratch("r1.json"), r2 = scratch("r2.json");
    CHECK(run({"d13", "--report", r1.string()}).code == 0);
    CHECK(run({"check", "d13", "--report", r2.string()}).code == 0);
    Json j1 = Json::parse(slurp(r1)), j2 = Json::parse(slurp(r2));
    CHECK(j1 == j2);
    REQUIRE_FALSE(j1["tables"].empty());
    for (const auto& t : j1["tables"]) CHECK(t["passed"] == true);
  }

  TEST_CASE("tolerance from the environment and the flag") {
    ::setenv("GROUPOIDAL_TOL", "1e-7", 1);
    const Run env = run({"d13", "--format", "json"});
    ::unsetenv("GROUPOIDAL_TOL");
    CHECK(Json::parse(env.out)["tolerance"] == 1e-7);
    const Run flag = run({"d13", "--format", "json", "--tol", "1e-6"});
    CHECK(Json::parse(flag.out)["tolerance"] == 1e-6);
    CHECK(run({"d13", "--tol", "-1"}).code == kExitIo);
  }

  TEST_CASE("verify names the failing axiom") {
    Json j = Json::parse(slurp(d13_file()));
    CHECK(run({"verify", "--in", d13_file().string()}).code == kExitPass);
    Json a = j["A"];
    a["counit"][0][0] = a["counit"][0][0].get<double>() + 0.5;
    const fs::path p = scratch("broken.json");
    std::ofstream(p) << a.dump();
    const Run r = run({"verify", "--in", p.string()});
    CHECK(r.code == kExitCheckFailure);
    CHECK(r.out.find("FAIL counit_left") != std::string::npos);
  }

  TEST_CASE("input errors") {
    CHECK(run({"verify", "--in", scratch("missing.json").string()}).code == kExitIo);
    const fs::path p = scratch("bad.json");
    std::ofstream(p) << R"({"schema": "whd-v1", "algebra": {}})";
    const Run r = run({"verify", "--in", p.string()});
    CHECK(r.code == kExitIo);
    CHECK(r.err.find("$") != std::string::npos);
    std::ofstream(scratch("garbage.json")) << "{not json";
    CHECK(run({"verify", "--in", scratch("garbage.json").string()}).code == kExitIo);
    CHECK(run({"frobnicate"}).code == kExitIo);
    CHECK(run({"build", "tl", "--l", "4"}).code == kExitIo);
    CHECK(run({"--help"}).code == kExitPass);
  }

  TEST_CASE("dual and deform") {
    const fs::path dual_out = scratch("dual.json");
    CHECK(run({"dual", "--in", d13_file().string(), "--out", dual_out.string()}).code == 0);
    CHECK(run({"verify", "--in", dual_out.string()}).code == 0);
    // A single structure is paired with its canonical dual.
    const fs::path def_out = scratch("deformed.json");
    const Run d = run({"deform", "--in", dual_out.string(), "--out", def_out.string(), "--format",
                       "json"});
    CHECK(d.code == 0);
    CHECK(Json::parse(d.out)["diff"]["algebra"]["changed"] == false);
    CHECK(run({"verify", "--in", def_out.string()}).code == 0);
  }

  TEST_CASE("cross prints the Markov factor") {
    const fs::path rep = scratch("grid.json");
    const Run r = run({"cross", "--in", d13_file().string(), "--depth", "1", "--report",
                       rep.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("markov factor") != std::string::npos);
    const Json j = Json::parse(slurp(rep));
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    CHECK(std::abs(j["ladder"]["markov_factor"].get<double>() - std::pow(phi, -4)) < 1e-10);
    CHECK(j["ladder"]["squares"].size() == 1);
    CHECK(j["depth"] == 1);
    CHECK(run({"cross", "--in", d13_file().string(), "--depth", "0"}).code == kExitIo);
  }
}
