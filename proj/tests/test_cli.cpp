#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "singtrace/cli.hpp"
#include "singtrace/error.hpp"

using namespace singtrace;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args, const std::string& stdin_text = "",
        std::optional<double> env_tol = std::nullopt) {
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  const int code = run_cli(args, in, out, err, env_tol);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("analyze harmonic zeta and dixmier") {
    const Run r = run({"analyze", "gen:harmonic", "--p", "1", "--quantities", "zeta-limit,dixmier"});
    REQUIRE(r.code == kExitOk);
    const json j = json::parse(r.out);
    CHECK(j["schema"] == "1");
    CHECK(j["command"] == "analyze");
    CHECK(j["input"]["name"] == "harmonic");
    CHECK(j["quantities"]["zeta-limit"]["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(j["quantities"]["dixmier"]["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(j["verdicts"]["thm47"]["pass"] == true);
  }

  TEST_CASE("analyze separates Z_2 from weak L^2") {
    const Run r = run({"analyze", "gen:counterexample_x:2:30", "--quantities", "zp,quasinorm", "--p", "2"});
    REQUIRE(r.code == kExitOk);
    const json j = json::parse(r.out);
    CHECK(j["verdicts"]["separation"]["pass"] == true);
    CHECK(j["quantities"]["quasinorm"]["divergent"] == true);
  }

  TEST_CASE("input errors exit 2") {
    const Run missing = run({"analyze", "missing.json"});
    CHECK(missing.code == kExitInput);
    CHECK(missing.err.find("io") != std::string::npos);
    CHECK(run({"analyze", "gen:harmonic", "--quantities", "bogus"}).code == kExitInput);
    CHECK(run({"analyze", "gen:harmonic", "--quantities", "triple", "--psi", "psi_p:2"}).code == kExitInput);
    CHECK(run({"analyze", "gen:harmonic", "--p", "-1"}).code == kExitInput);
    CHECK(run({"analyze", "-"}, "{\"mu\":[1,2]}").code == kExitInput);
    CHECK(run({"frobnicate"}).code == kExitInput);
  }

  TEST_CASE("stdin and csv output") {
    const Run r = run({"analyze", "-", "--quantities", "norm,small-ideal", "--format", "csv"}, "mu\n1\n0.5\n");
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.rfind("quantity,value,lo,hi,converged,divergent\n", 0) == 0);
    CHECK(r.out.find("\nnorm,") != std::string::npos);
    CHECK(r.out.find("\nsmall-ideal,") != std::string::npos);
  }

  TEST_CASE("non-converged limits exit 3 on request") {
    const Run plain = run({"analyze", "gen:oscillating", "--quantities", "dixmier"});
    CHECK(plain.code == kExitOk);
    const json j = json::parse(plain.out);
    CHECK(j["quantities"]["dixmier"]["converged"] == false);
    CHECK(j["quantities"]["dixmier"]["value"].is_null());
    CHECK(run({"analyze", "gen:oscillating", "--quantities", "dixmier", "--require-converged"}).code == kExitNotConverged);
  }

  TEST_CASE("divergent quantities are recorded, not fatal") {
    const Run r = run({"analyze", "gen:power:2", "--quantities", "z1,norm"});
    REQUIRE(r.code == kExitOk);
    const json j = json::parse(r.out);
    CHECK(j["quantities"]["z1"]["value"].is_null());
    CHECK(j["quantities"]["z1"]["error"]["code"] == "divergent");
    CHECK(j["quantities"]["norm"]["divergent"] == true);
  }

  TEST_CASE("reports are deterministic") {
    const std::vector<std::string> args{"analyze", "gen:harmonic", "--quantities", "z1,norm,dixmier,heat-limit"};
    const Run a = run(args);
    const Run b = run(args);
    REQUIRE(a.code == kExitOk);
    CHECK(a.out == b.out);
  }

  TEST_CASE("gen writes members") {
    const Run z = run({"gen", "counterexample_z", "30"});
    REQUIRE(z.code == kExitOk);
    const json j = json::parse(z.out);
    CHECK(j["log_breakpoints"].size() == 31);

    const std::string path = "cli_gen_power.json";
    REQUIRE(run({"gen", "power", "2", "--head", "1000", path}).code == kExitOk);
    std::ifstream file(path);
    const json p = json::parse(file);
    CHECK(p["mu"].size() == 1000);
    CHECK(p["tail"]["start_index"] == 1001);
    CHECK(p["tail"]["exponent"] == 0.5);
    std::remove(path.c_str());

    CHECK(run({"gen", "finite", "3,1,2"}).code == kExitInput);
    const Run sorted = run({"gen", "finite", "3,1,2", "--sort"});
    REQUIRE(sorted.code == kExitOk);
    CHECK(json::parse(sorted.out)["mu"] == json::array({3, 2, 1}));
  }

  TEST_CASE("check suites") {
    const Run h = run({"check", "holder", "--strict"});
    CHECK(h.code == kExitOk);
    const json j = json::parse(h.out);
    CHECK(j["pass"] == true);
    CHECK(j["suites"][0]["name"] == "holder");
    CHECK(j["suites"][0]["cases"][0]["name"] == "200 random pairs");
    CHECK(run({"check", "nope"}).code == kExitInput);
  }

  TEST_CASE("tolerance from the environment") {
    const Run r = run({"analyze", "gen:harmonic", "--quantities", "dixmier"}, "", 5e-3);
    REQUIRE(r.code == kExitOk);
    CHECK(json::parse(r.out)["settings"]["tolerance"] == 5e-3);
    const Run flag = run({"analyze", "gen:harmonic", "--quantities", "dixmier", "--tol", "1e-2"}, "", 5e-3);
    CHECK(json::parse(flag.out)["settings"]["tolerance"] == 1e-2);

    setenv("SINGTRACE_TOL", "abc", 1);
    CHECK_THROWS_AS(tolerance_from_env(), Error);
    setenv("SINGTRACE_TOL", "0.01", 1);
    CHECK(tolerance_from_env() == std::optional<double>(0.01));
    unsetenv("SINGTRACE_TOL");
    CHECK_FALSE(tolerance_from_env().has_value());
  }
}
