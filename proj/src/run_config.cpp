#include "chainwave/run_config.hpp"

#include <cmath>
#include <memory>
#include <sstream>

#include "chainwave/bounds.hpp"
#include "json.hpp"

namespace chainwave {

using nlohmann::json;

namespace {

struct Reader {
  std::vector<std::string>& diag;

  bool number(const json& obj, const char* key, double& out, bool required) {
    if (!obj.contains(key)) {
      if (required) diag.push_back(std::string("missing field '") + key + "'");
      return false;
    }
    if (!obj[key].is_number()) {
      diag.push_back(std::string("field '") + key + "' must be a number");
      return false;
    }
    out = obj[key].get<double>();
    return true;
  }

  bool integer(const json& obj, const char* key, long& out, bool required) {
    if (!obj.contains(key)) {
      if (required) diag.push_back(std::string("missing field '") + key + "'");
      return false;
    }
    if (!obj[key].is_number_integer()) {
      diag.push_back(std::string("field '") + key + "' must be an integer");
      return false;
    }
    out = obj[key].get<long>();
    return true;
  }

  std::vector<double> numbers(const json& arr, const std::string& what) {
    std::vector<double> out;
    if (!arr.is_array()) {
      diag.push_back(what + " must be an array of numbers");
      return out;
    }
    for (const auto& v : arr) {
      if (!v.is_number()) {
        diag.push_back(what + " must contain only numbers");
        return {};
      }
      out.push_back(v.get<double>());
    }
    return out;
  }

  // Explicit list or {start, stop, count, scale: linear|geometric}.
  std::vector<double> grid(const json& obj, const char* key) {
    if (!obj.contains(key)) {
      diag.push_back(std::string("missing field '") + key + "'");
      return {};
    }
    const json& g = obj[key];
    if (g.is_array()) return numbers(g, key);
    if (!g.is_object()) {
      diag.push_back(std::string(key) + " must be a list or {start, stop, count, scale}");
      return {};
    }
    double start = 0, stop = 0;
    long count = 0;
    const bool ok = number(g, "start", start, true) & number(g, "stop", stop, true) &
                    integer(g, "count", count, true);
    const std::string scale = g.value("scale", std::string("linear"));
    if (!ok) return {};
    if (count < 1) {
      diag.push_back(std::string(key) + ".count must be at least 1");
      return {};
    }
    if (scale != "linear" && scale != "geometric") {
      diag.push_back(std::string(key) + ".scale must be 'linear' or 'geometric'");
      return {};
    }
    if (scale == "geometric" && !(start > 0.0 && stop > 0.0)) {
      diag.push_back(std::string(key) + ": geometric grids need positive start and stop");
      return {};
    }
    std::vector<double> out;
    for (long i = 0; i < count; ++i) {
      const double f = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
      out.push_back(scale == "linear" ? start + f * (stop - start)
                                      : start * std::pow(stop / start, f));
    }
    return out;
  }
};

}  // namespace

const char* to_string(Command command) {
  switch (command) {
    case Command::simulate: return "simulate";
    case Command::oracle_compare: return "oracle-compare";
    case Command::bounds_check: return "bounds-check";
    case Command::asymptotics: return "asymptotics";
    case Command::growth: return "growth";
    case Command::specfun_selftest: return "specfun-selftest";
  }
  return "unknown";
}

std::optional<Command> parse_command(const std::string& name) {
  for (Command c : {Command::simulate, Command::oracle_compare, Command::bounds_check,
                    Command::asymptotics, Command::growth, Command::specfun_selftest})
    if (name == to_string(c)) return c;
  return std::nullopt;
}

SpectralPair RunConfig::spectrum() const {
  switch (initial.kind) {
    case InitialData::Kind::lattice: return forward_transform(lattice_state());
    case InitialData::Kind::alpha_family: return alpha_spectrum(initial.alpha);
    case InitialData::Kind::epsilon_family: return epsilon_spectrum(initial.epsilon);
  }
  return forward_transform(LatticeState::zero());
}

ParseResult parse_config(const std::string& json_text, const std::string& command_override) {
  ParseResult result;
  auto& diag = result.diagnostics;
  auto& cfg = result.config;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    diag.push_back(std::string("config is not valid JSON: ") + e.what());
    return result;
  }
  if (!doc.is_object()) {
    diag.push_back("config must be a JSON object");
    return result;
  }
  Reader rd{diag};

  std::string command = command_override;
  if (command.empty()) {
    if (doc.contains("command") && doc["command"].is_string())
      command = doc["command"].get<std::string>();
    else
      diag.push_back("missing field 'command'");
  }
  if (!command.empty()) {
    if (auto c = parse_command(command))
      cfg.command = *c;
    else
      diag.push_back("unknown command '" + command + "'");
  }
  const bool needs_physics = cfg.command != Command::specfun_selftest;

  if (doc.contains("params") && doc["params"].is_object()) {
    const json& p = doc["params"];
    rd.number(p, "omega0", cfg.omega0, true);
    rd.number(p, "omega1", cfg.omega1, true);
    rd.number(p, "spacing", cfg.spacing, false);
  } else if (needs_physics) {
    diag.push_back("missing object 'params'");
  }

  if (doc.contains("initial_data")) {
    const json& d = doc["initial_data"];
    int sources = 0;
    if (!d.is_object()) {
      diag.push_back("initial_data must be an object");
    } else {
      auto read_lattice = [&](const json& s) {
        ++sources;
        cfg.initial.kind = InitialData::Kind::lattice;
        rd.integer(s, "support_min", cfg.initial.support_min, true);
        cfg.initial.q = s.contains("q") ? rd.numbers(s["q"], "q") : std::vector<double>{};
        cfg.initial.p = s.contains("p") ? rd.numbers(s["p"], "p") : std::vector<double>{};
        if (!s.contains("q") && !s.contains("p")) diag.push_back("lattice data needs 'q' or 'p'");
        if (!s.contains("q")) cfg.initial.q.assign(cfg.initial.p.size(), 0.0);
        if (!s.contains("p")) cfg.initial.p.assign(cfg.initial.q.size(), 0.0);
      };
      if (d.contains("lattice")) read_lattice(d["lattice"]);
      if (d.contains("support_min")) read_lattice(d);
      if (d.contains("alpha_family")) {
        ++sources;
        cfg.initial.kind = InitialData::Kind::alpha_family;
        rd.number(d["alpha_family"], "alpha", cfg.initial.alpha, true);
      }
      if (d.contains("epsilon_family")) {
        ++sources;
        cfg.initial.kind = InitialData::Kind::epsilon_family;
        rd.number(d["epsilon_family"], "epsilon", cfg.initial.epsilon, true);
      }
      if (sources != 1)
        diag.push_back("initial_data must name exactly one source (lattice, alpha_family or "
                       "epsilon_family), found " + std::to_string(sources));
    }
  } else if (needs_physics) {
    diag.push_back("missing object 'initial_data'");
  }

  if (needs_physics) {
    cfg.t_grid = rd.grid(doc, "t_grid");
    for (double k : rd.grid(doc, "k_grid")) {
      const double r = std::round(k);
      if (doc["k_grid"].is_array() && r != k) {
        diag.push_back("k_grid entries must be integers");
        break;
      }
      const long kk = static_cast<long>(r);
      if (cfg.k_grid.empty() || cfg.k_grid.back() != kk) cfg.k_grid.push_back(kk);
    }
  }

  if (doc.contains("solver")) {
    const json& s = doc["solver"];
    long mesh = static_cast<long>(cfg.solver.mesh_points);
    long max_mesh = static_cast<long>(cfg.solver.max_mesh);
    if (rd.integer(s, "mesh_points", mesh, false)) cfg.solver.mesh_points = static_cast<std::size_t>(std::max(mesh, 0L));
    if (rd.integer(s, "max_mesh", max_mesh, false)) cfg.solver.max_mesh = static_cast<std::size_t>(std::max(max_mesh, 0L));
    rd.number(s, "tolerance", cfg.solver.tolerance, false);
  }
  if (doc.contains("oracle")) {
    const json& o = doc["oracle"];
    OracleConfig oc;
    rd.integer(o, "radius", oc.radius, true);
    rd.number(o, "dt", oc.dt, true);
    if (o.contains("boundary") && o["boundary"] != "fixed-zero")
      diag.push_back("oracle.boundary must be 'fixed-zero'");
    if (o.contains("richardson")) {
      if (o["richardson"].is_boolean())
        oc.richardson = o["richardson"].get<bool>();
      else
        diag.push_back("oracle.richardson must be a boolean");
    }
    cfg.oracle = oc;
  }
  if (doc.contains("output")) {
    if (doc["output"].is_string())
      cfg.output_path = doc["output"].get<std::string>();
    else
      diag.push_back("output must be a string path");
  }
  rd.number(doc, "tolerance", cfg.tolerance, false);
  double v = 0.0;
  if (rd.number(doc, "beta", v, false)) cfg.beta = v;
  if (rd.number(doc, "min_exponent", v, false)) cfg.min_exponent = v;
  return result;
}

std::vector<std::string> validate(const RunConfig& cfg) {
  std::vector<std::string> diag;
  if (cfg.command == Command::specfun_selftest) return diag;

  if (!(cfg.omega1 > 0.0)) diag.push_back("omega1 must be positive");
  if (!(cfg.omega0 >= 0.0)) diag.push_back("omega0 must be non-negative");
  if (!(cfg.spacing > 0.0)) diag.push_back("spacing must be positive");
  if (cfg.t_grid.empty()) diag.push_back("t_grid must be non-empty");
  if (cfg.k_grid.empty()) diag.push_back("k_grid must be non-empty");
  for (double t : cfg.t_grid)
    if (!(t >= 0.0) || !std::isfinite(t)) {
      diag.push_back("t_grid values must be finite and non-negative");
      break;
    }
  try {
    cfg.solver.validate();
  } catch (const std::exception& e) {
    diag.push_back(std::string("solver: ") + e.what());
  }

  const auto kind = cfg.initial.kind;
  if (kind == InitialData::Kind::lattice) {
    if (cfg.initial.q.size() != cfg.initial.p.size())
      diag.push_back("lattice q and p must have the same length");
    for (double x : cfg.initial.q)
      if (!std::isfinite(x)) diag.push_back("lattice q values must be finite");
    for (double x : cfg.initial.p)
      if (!std::isfinite(x)) diag.push_back("lattice p values must be finite");
  } else {
    if (cfg.omega0 != 0.0)
      diag.push_back("the alpha and epsilon families are defined for omega0 = 0");
    if (kind == InitialData::Kind::alpha_family &&
        !(cfg.initial.alpha > 0.0 && cfg.initial.alpha < 0.5))
      diag.push_back("alpha must lie in (0, 1/2)");
    if (kind == InitialData::Kind::epsilon_family &&
        !(cfg.initial.epsilon > 0.0 && cfg.initial.epsilon < 0.5))
      diag.push_back("epsilon must lie in (0, 1/2)");
  }

  const bool have_params = cfg.omega1 > 0.0 && cfg.omega0 >= 0.0 && cfg.spacing > 0.0;
  switch (cfg.command) {
    case Command::oracle_compare: {
      if (kind != InitialData::Kind::lattice) {
        diag.push_back("oracle-compare needs lattice initial data");
        break;
      }
      if (!have_params || cfg.t_grid.empty() || cfg.k_grid.empty() ||
          cfg.initial.q.size() != cfg.initial.p.size())
        break;
      const ChainParams params = cfg.params();
      const LatticeState state = cfg.lattice_state();
      long k_max = 0;
      for (long k : cfg.k_grid) k_max = std::max(k_max, std::labs(k));
      double t_max = 0.0;
      for (double t : cfg.t_grid) t_max = std::max(t_max, t);
      const long needed = min_radius(state, params, k_max, t_max);
      const OracleConfig oc =
          cfg.oracle ? *cfg.oracle : default_oracle_config(state, params, k_max, t_max);
      if (oc.radius < needed)
        diag.push_back("oracle radius " + std::to_string(oc.radius) +
                       " is below the horizon rule; minimal admissible radius is " +
                       std::to_string(needed));
      if (!(oc.dt > 0.0) || oc.dt * params.omega0_prime() > 0.5)
        diag.push_back("oracle dt must satisfy 0 < dt * omega0' <= 0.5");
      break;
    }
    case Command::bounds_check:
      if (kind != InitialData::Kind::lattice) diag.push_back("bounds-check needs lattice initial data");
      break;
    case Command::asymptotics:
      if (cfg.beta) {
        if (!(*cfg.beta > 0.0)) diag.push_back("beta must be positive");
        for (long k : cfg.k_grid)
          if (k <= 0) {
            diag.push_back("ray asymptotics need positive k_grid entries");
            break;
          }
      } else {
        for (double t : cfg.t_grid)
          if (!(t > 0.0)) {
            diag.push_back("fixed-k asymptotics need t_grid entries > 0");
            break;
          }
      }
      break;
    case Command::growth:
      if (kind == InitialData::Kind::lattice)
        diag.push_back("growth needs alpha_family or epsilon_family initial data");
      for (double t : cfg.t_grid)
        if (!(2.0 * cfg.omega1 * t > 1.0)) {
          diag.push_back("growth needs 2 omega1 t > 1 for every t");
          break;
        }
      break;
    default:
      break;
  }
  return diag;
}

}  // namespace chainwave
