#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "chainwave/asymptotics.hpp"
#include "chainwave/bounds.hpp"
#include "chainwave/error.hpp"
#include "chainwave/lattice_oracle.hpp"
#include "chainwave/run_config.hpp"
#include "chainwave/specfun.hpp"
#include "chainwave/spectral_solver.hpp"

namespace py = pybind11;
using namespace chainwave;

namespace {

// Initial data from Python: a LatticeState, or ("alpha", a) / ("epsilon", e).
SpectralPair to_spectrum(const py::object& data) {
  if (py::isinstance<LatticeState>(data)) return forward_transform(data.cast<LatticeState>());
  if (py::isinstance<py::tuple>(data)) {
    auto t = data.cast<py::tuple>();
    if (t.size() == 2) {
      const auto kind = t[0].cast<std::string>();
      const double v = t[1].cast<double>();
      if (kind == "alpha") return alpha_spectrum(v);
      if (kind == "epsilon") return epsilon_spectrum(v);
    }
  }
  throw py::type_error("initial data must be a LatticeState, ('alpha', a) or ('epsilon', e)");
}

}  // namespace

PYBIND11_MODULE(_chainwave, m) {
  m.doc() = "Infinite harmonic chain: exact solver, Verlet oracle, bounds and asymptotics";

  static py::exception<Error> error_type(m, "ChainwaveError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error_type, (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  py::class_<ChainParams>(m, "ChainParams")
      .def(py::init<double, double, double>(), py::arg("omega0"), py::arg("omega1"),
           py::arg("spacing") = 1.0)
      .def_property_readonly("omega0", &ChainParams::omega0)
      .def_property_readonly("omega1", &ChainParams::omega1)
      .def_property_readonly("spacing", &ChainParams::spacing)
      .def_property_readonly("omega0_prime", &ChainParams::omega0_prime)
      .def("__repr__", [](const ChainParams& p) {
        return "ChainParams(omega0=" + std::to_string(p.omega0()) +
               ", omega1=" + std::to_string(p.omega1()) + ")";
      });

  py::class_<LatticeState>(m, "LatticeState")
      .def(py::init<long, std::vector<double>, std::vector<double>>(), py::arg("support_min"),
           py::arg("q"), py::arg("p"))
      .def_static("spike", &LatticeState::spike, py::arg("site"), py::arg("amplitude") = 1.0,
                  py::arg("velocity") = false)
      .def_property_readonly("support_min", &LatticeState::support_min)
      .def_property_readonly("support_max", &LatticeState::support_max)
      .def("q", &LatticeState::q)
      .def("p", &LatticeState::p)
      .def_property_readonly("q_norm", &LatticeState::q_norm)
      .def_property_readonly("p_norm", &LatticeState::p_norm);

  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("mesh_points", &SolverConfig::mesh_points)
      .def_readwrite("tolerance", &SolverConfig::tolerance)
      .def_readwrite("max_mesh", &SolverConfig::max_mesh);

  py::class_<OracleConfig>(m, "OracleConfig")
      .def(py::init<>())
      .def_readwrite("radius", &OracleConfig::radius)
      .def_readwrite("dt", &OracleConfig::dt)
      .def_readwrite("richardson", &OracleConfig::richardson);

  m.def("dispersion", &dispersion, py::arg("params"), py::arg("lam"));
  m.def("energy", &energy, py::arg("state"), py::arg("params"));
  m.def("sinc_kernel", &sinc_kernel, py::arg("t"), py::arg("omega"));

  m.def(
      "solve_at",
      [](const py::object& data, const ChainParams& params, double t, long k,
         const SolverConfig& cfg) { return solve_at(to_spectrum(data), params, t, k, cfg); },
      py::arg("data"), py::arg("params"), py::arg("t"), py::arg("k"),
      py::arg("cfg") = SolverConfig{});

  m.def(
      "solve_grid",
      [](const py::object& data, const ChainParams& params, const std::vector<double>& times,
         const std::vector<long>& sites, const SolverConfig& cfg) {
        const auto spec = to_spectrum(data);
        SolutionGrid grid = [&] {
          py::gil_scoped_release release;
          return solve_grid(spec, params, times, sites, cfg);
        }();
        py::array_t<double> out({grid.times.size(), grid.sites.size()});
        std::copy(grid.values.begin(), grid.values.end(), out.mutable_data());
        return out;
      },
      py::arg("data"), py::arg("params"), py::arg("times"), py::arg("sites"),
      py::arg("cfg") = SolverConfig{});

  m.def(
      "oracle_integrate",
      [](const LatticeState& state, const ChainParams& params, double t_final,
         const OracleConfig& cfg) {
        py::gil_scoped_release release;
        return integrate(state, params, t_final, cfg);
      },
      py::arg("state"), py::arg("params"), py::arg("t_final"), py::arg("cfg"));
  m.def("default_oracle_config", &default_oracle_config, py::arg("state"), py::arg("params"),
        py::arg("k_max"), py::arg("t_final"));
  m.def("energy_drift", &energy_drift, py::arg("state"), py::arg("params"), py::arg("t_final"),
        py::arg("cfg"));
  m.def("validity_horizon", &validity_horizon, py::arg("cfg"), py::arg("params"),
        py::arg("k_max"));

  m.def("energy_sup_bound", &energy_sup_bound, py::arg("params"), py::arg("energy"));
  m.def("sqrt_growth_bound", &sqrt_growth_bound, py::arg("t"), py::arg("q_norm"),
        py::arg("p_norm"), py::arg("params"));
  m.def("log_growth_bound", &log_growth_bound, py::arg("t"), py::arg("state"), py::arg("params"));
  m.def("alpha_normalization", &alpha_normalization, py::arg("alpha"));
  m.def("alpha_leading_amplitude", &alpha_leading_amplitude, py::arg("alpha"));
  m.def("growth_prediction", &growth_prediction, py::arg("t"), py::arg("epsilon"),
        py::arg("params"));
  m.def("growth_identity_lhs", &growth_identity_lhs, py::arg("t"), py::arg("delta"),
        py::arg("refinement") = 0);
  m.def("growth_identity_rhs", &growth_identity_rhs, py::arg("t"), py::arg("delta"));

  m.def(
      "classify_ray",
      [](double beta, const ChainParams& p) { return std::string(to_string(classify_ray(beta, p))); },
      py::arg("beta"), py::arg("params"));
  m.def(
      "ray_asymptote",
      [](const py::object& data, double beta, long k, const ChainParams& p) {
        return ray_asymptote(to_spectrum(data), ray_geometry(beta, p), k, p);
      },
      py::arg("data"), py::arg("beta"), py::arg("k"), py::arg("params"));
  m.def(
      "fixed_k_asymptote",
      [](const py::object& data, const ChainParams& p, long k, double t) {
        const auto spec = to_spectrum(data);
        return p.pinned() ? fixed_k_asymptote_pinned(spec, p, k, t)
                          : fixed_k_asymptote_unpinned(spec, p, k, t);
      },
      py::arg("data"), py::arg("params"), py::arg("k"), py::arg("t"));
  m.def("bessel_time_integral", &bessel_time_integral, py::arg("k"), py::arg("t"),
        py::arg("params"));

  m.def("bessel_j", &specfun::bessel_j, py::arg("n"), py::arg("x"));
  m.def("gamma", &specfun::gamma_fn, py::arg("x"));
  m.def("lower_incomplete_gamma", &specfun::lower_incomplete_gamma, py::arg("s"), py::arg("x"));
  m.def("bohmer_sine_integral", &specfun::bohmer_sine_integral, py::arg("alpha"));

  m.def(
      "run_config",
      [](const std::string& json_text, const std::string& out_path) -> py::tuple {
        auto parsed = parse_config(json_text);
        if (!parsed.diagnostics.empty()) return py::make_tuple(2, parsed.diagnostics);
        if (!out_path.empty()) parsed.config.output_path = out_path;
        if (auto diag = validate(parsed.config); !diag.empty()) return py::make_tuple(2, diag);
        RunOutcome outcome = [&] {
          py::gil_scoped_release release;
          return run(parsed.config);
        }();
        return py::make_tuple(outcome.exit_code, outcome.summary_json);
      },
      py::arg("config_json"), py::arg("out_path") = "");
}
