#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "chainwave/run_config.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace chainwave;
namespace fs = std::filesystem;

namespace {

bool mentions(const std::vector<std::string>& diag, const std::string& needle) {
  return std::any_of(diag.begin(), diag.end(),
                     [&](const std::string& d) { return d.find(needle) != std::string::npos; });
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "chainwave_run_config_test";
  fs::create_directories(dir);
  return dir / name;
}

const char* kSpikeSimulate = R"({
  "command": "simulate",
  "params": {"omega0": 0.0, "omega1": 1.0},
  "initial_data": {"lattice": {"support_min": 0, "q": [1.0]}},
  "t_grid": [0, 1, 5],
  "k_grid": {"start": -10, "stop": 10, "count": 21}
})";

}  // namespace

TEST_CASE("command names round-trip") {
  for (auto c : {Command::simulate, Command::oracle_compare, Command::bounds_check,
                 Command::asymptotics, Command::growth, Command::specfun_selftest})
    CHECK(parse_command(to_string(c)) == c);
  CHECK(!parse_command("nonsense").has_value());
}

TEST_CASE("parse a lattice configuration") {
  const auto r = parse_config(kSpikeSimulate);
  REQUIRE(r.diagnostics.empty());
  CHECK(r.config.command == Command::simulate);
  CHECK(r.config.k_grid.size() == 21);
  CHECK(r.config.k_grid.front() == -10);
  CHECK(r.config.t_grid == std::vector<double>{0, 1, 5});
  CHECK(r.config.initial.p == std::vector<double>{0.0});
  CHECK(validate(r.config).empty());
}

TEST_CASE("geometric grids") {
  const auto r = parse_config(R"({"params": {"omega0": 0, "omega1": 1},
    "initial_data": {"support_min": 0, "p": [1]},
    "t_grid": {"start": 1, "stop": 1000, "count": 4, "scale": "geometric"}, "k_grid": [0]})",
                              "bounds-check");
  REQUIRE(r.diagnostics.empty());
  REQUIRE(r.config.t_grid.size() == 4);
  CHECK(r.config.t_grid[1] == doctest::Approx(10.0));
  CHECK(r.config.t_grid[3] == doctest::Approx(1000.0));
  CHECK(r.config.command == Command::bounds_check);
}

TEST_CASE("structural diagnostics") {
  CHECK(!parse_config("{not json").diagnostics.empty());
  const auto both = parse_config(R"({"command": "simulate", "params": {"omega0": 0, "omega1": 1},
    "initial_data": {"lattice": {"support_min": 0, "q": [1]}, "alpha_family": {"alpha": 0.3}},
    "t_grid": [1], "k_grid": [0]})");
  CHECK(!both.diagnostics.empty());
  const auto fractional = parse_config(R"({"command": "simulate", "params": {"omega0": 0, "omega1": 1},
    "initial_data": {"lattice": {"support_min": 0, "q": [1]}}, "t_grid": [1], "k_grid": [0.5]})");
  CHECK(!fractional.diagnostics.empty());
}

TEST_CASE("semantic diagnostics") {
  auto cfg = parse_config(kSpikeSimulate).config;
  cfg.omega1 = 0.0;
  CHECK(mentions(validate(cfg), "omega1 must be positive"));

  auto fam = parse_config(R"({"command": "growth", "params": {"omega0": 1.0, "omega1": 0.5},
    "initial_data": {"alpha_family": {"alpha": 0.3}}, "t_grid": [10], "k_grid": [0]})").config;
  CHECK(mentions(validate(fam), "omega0 = 0"));

  auto oracle = parse_config(R"({"command": "oracle-compare", "params": {"omega0": 0, "omega1": 1},
    "initial_data": {"lattice": {"support_min": 0, "q": [1]}}, "t_grid": [10], "k_grid": [0, 2],
    "oracle": {"radius": 30, "dt": 0.001}})").config;
  const auto diag = validate(oracle);
  CHECK(mentions(diag, "minimal admissible radius is 62"));

  auto unstable = oracle;
  unstable.oracle->radius = 100;
  unstable.oracle->dt = 0.3;
  CHECK(mentions(validate(unstable), "dt"));

  auto growth_lattice = parse_config(kSpikeSimulate, "growth").config;
  CHECK(mentions(validate(growth_lattice), "alpha_family or epsilon_family"));
}

TEST_CASE("simulate zero data writes zeros and a summary") {
  const auto r = parse_config(R"({"command": "simulate", "params": {"omega0": 1, "omega1": 1},
    "initial_data": {"lattice": {"support_min": 0, "q": [0], "p": [0]}},
    "t_grid": [0, 1, 10], "k_grid": {"start": -5, "stop": 5, "count": 11}})");
  auto cfg = r.config;
  cfg.output_path = scratch("zero.csv").string();
  const auto out = run(cfg);
  CHECK(out.exit_code == 0);
  const std::string csv = slurp(cfg.output_path);
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  CHECK(line == "t,k,q");
  int rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    CHECK(line.substr(line.rfind(',') + 1) == "0");
  }
  CHECK(rows == 33);
  const auto summary = nlohmann::json::parse(slurp(scratch("zero.summary.json")));
  CHECK(summary["pass"] == true);
  CHECK(summary["command"] == "simulate");
  CHECK(summary.contains("max_residual"));
  CHECK(summary.contains("fitted_exponents"));
  CHECK(nlohmann::json::parse(out.summary_json) == summary);
}

TEST_CASE("reruns are byte-identical") {
  auto cfg = parse_config(kSpikeSimulate).config;
  cfg.output_path = scratch("a.csv").string();
  run(cfg);
  cfg.output_path = scratch("b.csv").string();
  run(cfg);
  CHECK(slurp(scratch("a.csv")) == slurp(scratch("b.csv")));
}

TEST_CASE("oracle-compare on a spike passes") {
  auto cfg = parse_config(kSpikeSimulate, "oracle-compare").config;
  cfg.output_path = scratch("oracle.csv").string();
  const auto out = run(cfg);
  CHECK(out.exit_code == 0);
  CHECK(fs::exists(scratch("oracle.spectral.csv")));
  const auto summary = nlohmann::json::parse(out.summary_json);
  CHECK(summary["max_residual"].get<double>() <= 1e-6);
}

TEST_CASE("oracle-compare with an unreachable tolerance is an assertion failure") {
  auto cfg = parse_config(kSpikeSimulate, "oracle-compare").config;
  cfg.oracle = OracleConfig{};
  cfg.oracle->radius = 100;
  cfg.oracle->dt = 0.01;
  cfg.tolerance = 1e-14;
  cfg.output_path = scratch("strict.csv").string();
  const auto out = run(cfg);
  CHECK(out.exit_code == 1);
  CHECK(nlohmann::json::parse(out.summary_json).contains("failing_metric"));
}

TEST_CASE("mesh cap maps to the no-convergence exit code") {
  auto cfg = parse_config(kSpikeSimulate).config;
  cfg.t_grid = {1000.0};
  cfg.solver.mesh_points = 16;
  cfg.solver.max_mesh = 64;
  cfg.output_path = scratch("capped.csv").string();
  CHECK(validate(cfg).empty());
  CHECK(run(cfg).exit_code == 3);
}

TEST_CASE("bounds-check with pinning passes") {
  auto cfg = parse_config(R"({"command": "bounds-check", "params": {"omega0": 2, "omega1": 1},
    "initial_data": {"lattice": {"support_min": -1, "q": [0.2, 1.0, -0.3], "p": [0.5, 0.0, 0.1]}},
    "t_grid": {"start": 0, "stop": 30, "count": 16}, "k_grid": {"start": -60, "stop": 60, "count": 121}})").config;
  cfg.output_path = scratch("bounds.csv").string();
  const auto out = run(cfg);
  CHECK(out.exit_code == 0);
  CHECK(slurp(cfg.output_path).rfind("t,M_windowed,bound_name,bound_value,residual\n", 0) == 0);
}

TEST_CASE("specfun self-test passes") {
  RunConfig cfg;
  cfg.command = Command::specfun_selftest;
  cfg.output_path = scratch("specfun.csv").string();
  CHECK(validate(cfg).empty());
  const auto out = run(cfg);
  CHECK(out.exit_code == 0);
  CHECK(slurp(cfg.output_path).rfind("check,value,expected,abs_error,tolerance,pass\n", 0) == 0);
}
