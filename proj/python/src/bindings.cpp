#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "amhd/config.hpp"
#include "amhd/diagnostics.hpp"
#include "amhd/errors.hpp"
#include "amhd/experiments.hpp"
#include "amhd/inequality_lab.hpp"
#include "amhd/parallel.hpp"
#include "amhd/spectral_ops.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

// Documents cross the boundary as JSON text; the python side decodes them.
json from_py(const py::object& obj) {
  const auto dumps = py::module_::import("json").attr("dumps");
  return json::parse(py::cast<std::string>(dumps(obj)));
}

py::object to_py(const json& doc) {
  return py::module_::import("json").attr("loads")(doc.dump());
}

amhd::RunConfig config_arg(const py::object& cfg) {
  if (py::isinstance<py::str>(cfg)) return amhd::load_config(py::cast<std::string>(cfg));
  return amhd::config_from_json(from_py(cfg));
}

py::dict run_summary(const amhd::RunResult& r) {
  py::dict out;
  out["steps"] = r.steps;
  out["l2_dissipated"] = r.l2_dissipated;
  out["e0"] = r.ledger.e0();
  out["final"] = to_py(amhd::to_json(r.ledger.back()));
  out["last_checkpoint"] = r.last_checkpoint.string();
  if (r.blow_up) {
    py::dict b;
    b["time"] = r.blow_up->time;
    b["step"] = r.blow_up->step;
    b["max_amplitude"] = r.blow_up->max_amplitude;
    out["blow_up"] = b;
  } else {
    out["blow_up"] = py::none();
  }
  return out;
}

amhd::SpectralScalar scalar_from_array(py::array_t<double, py::array::c_style | py::array::forcecast> a) {
  if (a.ndim() != 3) throw amhd::InvalidParameter("expected a 3-d array");
  const amhd::Grid g{int(a.shape(0)), int(a.shape(1)), int(a.shape(2))};
  g.validate();
  amhd::RealField f(g);
  const double* src = a.data();
  std::copy(src, src + a.size(), f.data());
  return amhd::SpectralScalar::from_physical(f);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Anisotropic MHD solver core";

  py::register_exception<amhd::InvalidParameter>(m, "InvalidParameter", PyExc_ValueError);
  py::register_exception<amhd::GridMismatch>(m, "GridMismatch", PyExc_ValueError);
  py::register_exception<amhd::IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<amhd::BlowUpError>(m, "BlowUpError", PyExc_RuntimeError);

  m.def("thread_count", &amhd::thread_count);
  m.def("set_thread_count", &amhd::set_thread_count, py::arg("n"));

  m.def("normalize_config", [](const py::object& cfg) { return to_py(amhd::to_json(config_arg(cfg))); },
        py::arg("config"), "Validate a config (dict or path) and return it with defaults filled in.");

  m.def(
      "run",
      [](const py::object& cfg) {
        const amhd::RunConfig c = config_arg(cfg);
        py::gil_scoped_release release;
        amhd::RunResult r = amhd::run(c);
        py::gil_scoped_acquire acquire;
        return run_summary(r);
      },
      py::arg("config"));

  m.def(
      "resume",
      [](const std::string& checkpoint, std::optional<double> t_end) {
        py::gil_scoped_release release;
        amhd::RunResult r = amhd::resume(checkpoint, t_end);
        py::gil_scoped_acquire acquire;
        return run_summary(r);
      },
      py::arg("checkpoint"), py::arg("t_end") = py::none());

  m.def(
      "stability_sweep",
      [](const py::object& cfg, const std::vector<double>& eps, double bound_factor) {
        const amhd::RunConfig c = config_arg(cfg);
        py::gil_scoped_release release;
        const json doc = amhd::to_json(amhd::stability_sweep(c, eps, bound_factor));
        py::gil_scoped_acquire acquire;
        return to_py(doc);
      },
      py::arg("config"), py::arg("epsilons"), py::arg("bound_factor") = 4.0);

  m.def(
      "inviscid_sweep",
      [](const py::object& cfg, const std::vector<double>& nus) {
        const amhd::RunConfig c = config_arg(cfg);
        py::gil_scoped_release release;
        const amhd::InviscidResult r = amhd::inviscid_sweep(c, nus);
        const json summary = amhd::sweep_summary_json(r);
        const json report = amhd::to_json(r);
        py::gil_scoped_acquire acquire;
        return py::make_tuple(to_py(summary), to_py(report));
      },
      py::arg("config"), py::arg("nus"), "Returns (summary, report).");

  m.def(
      "continuous_dependence",
      [](const py::object& cfg, double delta, double factor) {
        const amhd::RunConfig c = config_arg(cfg);
        py::gil_scoped_release release;
        const json doc = amhd::to_json(amhd::continuous_dependence(c, delta, factor));
        py::gil_scoped_acquire acquire;
        return to_py(doc);
      },
      py::arg("config"), py::arg("delta"), py::arg("factor") = 10.0);

  m.def(
      "linear_validate",
      [](int n, double alpha, double beta, int modes, int band, std::uint64_t seed, double dt, double t_end) {
        amhd::DissipationSpec spec;
        spec.alpha = alpha;
        spec.beta = beta;
        py::gil_scoped_release release;
        const json doc = amhd::to_json(amhd::linear_validate(amhd::Grid::cube(n), spec, modes, band, seed, dt, t_end));
        py::gil_scoped_acquire acquire;
        return to_py(doc);
      },
      py::arg("n") = 16, py::arg("alpha") = 1.0, py::arg("beta") = 1.0, py::arg("modes") = 50, py::arg("band") = 5,
      py::arg("seed") = 1, py::arg("dt") = 1e-3, py::arg("t_end") = 1.0);

  m.def(
      "verify_inequalities",
      [](int trials, std::uint64_t seed, int n) {
        amhd::TrialConfig tc;
        tc.grid = amhd::Grid::cube(n);
        tc.trials = trials;
        tc.seed = seed;
        std::vector<amhd::InequalityReport> reports;
        {
          py::gil_scoped_release release;
          for (const auto& r : amhd::lemma_2_4_trials(tc)) reports.push_back(r);
          reports.push_back(amhd::interpolation_trials(tc));
          reports.push_back(amhd::triple_product_trials(tc, amhd::TripleProductForm::kFractional));
          reports.push_back(amhd::triple_product_trials(tc, amhd::TripleProductForm::kMixed));
        }
        return to_py(amhd::to_json(reports));
      },
      py::arg("trials") = 1000, py::arg("seed") = 1, py::arg("n") = 16);

  m.def(
      "read_diagnostics",
      [](const std::string& path) {
        json rows = json::array();
        for (const auto& r : amhd::read_diagnostics_csv(path)) rows.push_back(amhd::to_json(r));
        return to_py(rows);
      },
      py::arg("path"));

  m.def(
      "sobolev_norm",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> a, int order) {
        return amhd::h_s_norm(scalar_from_array(a), order);
      },
      py::arg("field"), py::arg("order"), "H^order norm of a periodic sample on [0, 2pi)^3.");
}
