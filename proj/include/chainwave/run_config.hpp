#pragma once

// JSON run configurations for the command-line driver.

#include <optional>
#include <string>
#include <vector>

#include "chainwave/chain_model.hpp"
#include "chainwave/lattice_oracle.hpp"
#include "chainwave/spectral_solver.hpp"

namespace chainwave {

enum class Command { simulate, oracle_compare, bounds_check, asymptotics, growth, specfun_selftest };

const char* to_string(Command command);
std::optional<Command> parse_command(const std::string& name);

struct InitialData {
  enum class Kind { lattice, alpha_family, epsilon_family };
  Kind kind = Kind::lattice;
  long support_min = 0;
  std::vector<double> q, p;
  double alpha = 0.0;
  double epsilon = 0.0;
};

struct RunConfig {
  Command command = Command::simulate;
  double omega0 = 0.0;
  double omega1 = 1.0;
  double spacing = 1.0;
  InitialData initial;
  std::vector<double> t_grid;
  std::vector<long> k_grid;
  SolverConfig solver;
  std::optional<OracleConfig> oracle;
  std::string output_path;

  // command options
  double tolerance = -1.0;          // < 0: per-command default
  std::optional<double> beta;       // asymptotics along t = beta |k|
  std::optional<double> min_exponent;

  ChainParams params() const { return {omega0, omega1, spacing}; }
  LatticeState lattice_state() const { return {initial.support_min, initial.q, initial.p}; }
  SpectralPair spectrum() const;
};

struct ParseResult {
  RunConfig config;
  std::vector<std::string> diagnostics;  // structural problems found while reading
};

/// Reads a JSON document. `command_override`, when non-empty, replaces the
/// "command" field.
ParseResult parse_config(const std::string& json_text, const std::string& command_override = "");

/// All semantic violations; empty means the configuration can run.
std::vector<std::string> validate(const RunConfig& config);

struct RunOutcome {
  int exit_code;              // 0 pass, 1 assertion failure, 2 invalid config, 3 no convergence
  std::string summary_json;   // {command, params, max_residual, fitted_exponents, pass, ...}
};

/// Runs a validated configuration, writing the command's CSV to
/// config.output_path and the summary next to it as <stem>.summary.json.
RunOutcome run(const RunConfig& config);

}  // namespace chainwave
