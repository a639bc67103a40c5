#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "conelift/catalog.hpp"
#include "conelift/errors.hpp"
#include "conelift/variational.hpp"
#include "conelift/verifier.hpp"

namespace py = pybind11;
using namespace conelift;

namespace {

VerifierConfig make_config(const std::string& backend, const std::vector<double>& radii, int samples,
                           std::uint64_t seed) {
  VerifierConfig cfg;
  if (backend == "central") cfg = VerifierConfig::central();
  else if (backend != "jet") throw ConfigError("unknown backend '" + backend + "'");
  cfg.radii = radii;
  cfg.samples = samples;
  cfg.seed = seed;
  cfg.validate();
  return cfg;
}

py::list rows(const VerificationReport& rep) {
  py::list out;
  for (const auto& r : rep.rows) {
    py::dict d;
    d["entry"] = r.entry;
    d["identity"] = r.identity;
    d["grid"] = r.grid;
    d["residual_max"] = r.residual_max;
    d["residual_mean"] = r.residual_mean;
    d["tolerance"] = r.tolerance;
    d["verdict"] = r.verdict;
    d["backend"] = r.backend;
    d["seed"] = r.seed;
    d["notes"] = r.notes;
    out.append(d);
  }
  return out;
}

DiscreteCurve curve_from(const Eigen::MatrixXd& points, double period) {
  DiscreteCurve c;
  c.points = points;
  c.period = period;
  c.validate();
  return c;
}

}  // namespace

PYBIND11_MODULE(_conelift, m) {
  m.doc() = "Cone lifts of immersions into Sasaki spheres: verifier and curve flow";

  py::register_exception<GeometryError>(m, "GeometryError");
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("catalog_names", &catalog_names);
  m.def(
      "catalog",
      []() {
        py::list out;
        for (const auto& e : catalog()) {
          py::dict d;
          d["entry"] = e.name;
          d["dim"] = e.immersion.m();
          d["sasaki_m"] = e.sasaki_m;
          d["legendrian"] = e.expected.legendrian;
          d["harmonic"] = e.expected.harmonic;
          d["proper_biharmonic"] = e.expected.proper_biharmonic;
          d["provenance"] = e.provenance;
          out.append(d);
        }
        return out;
      },
      "Catalog entries with their expected flags.");

  const std::vector<double> radii{0.5, 1.0, 2.0, 5.0};
  m.def(
      "verify",
      [](const std::string& entry, const std::string& backend, const std::vector<double>& radii, int samples,
         std::uint64_t seed) { return rows(verify_entry(catalog_entry(entry), make_config(backend, radii, samples, seed))); },
      py::arg("entry"), py::arg("backend") = "jet", py::arg("radii") = radii, py::arg("samples") = 10,
      py::arg("seed") = 1, "Every applicable check for one entry, as a list of report rows.");
  m.def(
      "report_json",
      [](const std::string& entry, const std::string& backend, std::uint64_t seed) {
        return verify_entry(catalog_entry(entry), make_config(backend, {0.5, 1.0, 2.0, 5.0}, 10, seed)).to_json();
      },
      py::arg("entry"), py::arg("backend") = "jet", py::arg("seed") = 1);
  m.def(
      "classify",
      [](const std::string& entry, const std::string& backend) {
        const auto c = classify(catalog_entry(entry), make_config(backend, {0.5, 1.0, 2.0, 5.0}, 10, 1));
        return py::make_tuple(to_string(c.verdict), c.max_tau, c.max_tau2);
      },
      py::arg("entry"), py::arg("backend") = "jet", "(verdict, max |tau|, max |tau2|)");

  m.def(
      "discrete_functionals",
      [](const Eigen::MatrixXd& points, double period) {
        const auto f = discrete_functionals(curve_from(points, period));
        py::dict d;
        d["energy"] = f.energy;
        d["bienergy"] = f.bienergy;
        d["penalty"] = f.penalty;
        d["spacing"] = f.spacing;
        d["length"] = f.length;
        d["min_segment"] = f.min_segment;
        return d;
      },
      py::arg("points"), py::arg("period") = 2.0 * 3.14159265358979323846);
  m.def(
      "discrete_tension",
      [](const Eigen::MatrixXd& points, double period) { return discrete_tension(curve_from(points, period)); },
      py::arg("points"), py::arg("period") = 2.0 * 3.14159265358979323846);
  m.def(
      "perturbed_legendrian_circle",
      [](int mm, int K, double radius, double amplitude, std::uint64_t seed) {
        return perturbed_legendrian_circle(mm, K, radius, amplitude, seed).points;
      },
      py::arg("m"), py::arg("K"), py::arg("radius"), py::arg("amplitude"), py::arg("seed"));
  m.def(
      "run_flow",
      [](const std::string& config_json) {
        const FlowJob job = FlowJob::from_json(config_json);
        FlowResult res;
        {
          py::gil_scoped_release release;
          res = flow(job.initial(), job.effective_config());
        }
        py::list objective;
        for (const auto& l : res.log) objective.append(l.objective);
        py::dict d;
        d["points"] = res.curve.points;
        d["period"] = res.curve.period;
        d["objective"] = objective;
        d["converged"] = res.converged;
        d["accepted_steps"] = res.accepted;
        d["newton_residuals"] = res.newton.residuals;
        d["config_hash"] = job.hash_hex();
        return d;
      },
      py::arg("config_json"), "Flow from a JSON config (same keys as the flow config file).");
  m.def("fixture_path", &fixture_path);
}
