// chainwave <command> --config <path> [--out <path>]

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "chainwave/run_config.hpp"
#include "json.hpp"

namespace {

int report_invalid(const std::string& command, const std::vector<std::string>& diagnostics) {
  nlohmann::ordered_json summary;
  summary["command"] = command;
  summary["pass"] = false;
  summary["error"] = {{"kind", "config-invalid"}, {"diagnostics", diagnostics}};
  std::cout << summary.dump(2) << "\n";
  for (const auto& d : diagnostics) std::cerr << "config: " << d << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact solutions, oracle checks, bounds and asymptotics for the harmonic chain"};
  app.require_subcommand(1);
  std::string config_path, out_path;
  for (const char* name : {"simulate", "oracle-compare", "bounds-check", "asymptotics", "growth",
                           "specfun-selftest"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_path, "CSV output path (overrides the config)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  std::ifstream in(config_path);
  if (!in) return report_invalid(command, {"cannot read config file " + config_path});
  std::stringstream text;
  text << in.rdbuf();

  auto parsed = chainwave::parse_config(text.str(), command);
  if (!parsed.diagnostics.empty()) return report_invalid(command, parsed.diagnostics);
  if (!out_path.empty()) parsed.config.output_path = out_path;
  if (auto diag = chainwave::validate(parsed.config); !diag.empty())
    return report_invalid(command, diag);

  const auto outcome = chainwave::run(parsed.config);
  std::cout << outcome.summary_json;
  return outcome.exit_code;
}
