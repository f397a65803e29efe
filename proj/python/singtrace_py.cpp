#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "singtrace/cli.hpp"
#include "singtrace/corpus.hpp"
#include "singtrace/error.hpp"
#include "singtrace/heat.hpp"
#include "singtrace/means.hpp"
#include "singtrace/spaces.hpp"
#include "singtrace/zeta.hpp"

namespace py = pybind11;
using namespace singtrace;

namespace {

py::dict limit_dict(const LimitEstimate& e) {
  py::dict d;
  d["value"] = e.value ? py::cast(*e.value) : py::none();
  d["liminf"] = e.liminf;
  d["limsup"] = e.limsup;
  d["converged"] = e.converged;
  d["model"] = e.model;
  return d;
}

py::dict sup_dict(const SupResult& r) {
  py::dict d;
  d["value"] = r.value;
  d["witness_log_t"] = r.witness_log_t;
  d["divergent"] = r.divergent;
  d["exact"] = r.exact;
  return d;
}

Profile from_values(std::vector<double> head, std::optional<double> coefficient, std::optional<double> exponent,
                    const std::string& name) {
  SpectrumTail tail;
  if (coefficient || exponent) tail = PowerTail{coefficient.value_or(1.0), exponent.value_or(1.0)};
  return Profile(Spectrum(std::move(head), tail, name));
}

}  // namespace

PYBIND11_MODULE(_singtrace, m) {
  m.doc() = "Singular traces, Marcinkiewicz norms and spectral zeta limits";

  static py::exception<Error> error(m, "SingtraceError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = error;
      py::object inst = exc(e.what());
      inst.attr("code") = to_string(e.code());
      inst.attr("index") = e.index() ? py::cast(*e.index()) : py::none();
      PyErr_SetObject(error.ptr(), inst.ptr());
    }
  });

  py::class_<Profile>(m, "Profile")
      .def_static("from_values", &from_values, py::arg("head"), py::arg("tail_coefficient") = py::none(),
                  py::arg("tail_exponent") = py::none(), py::arg("name") = "",
                  "Spectrum from a non-increasing head and an optional power tail c·n^(-alpha).")
      .def_static(
          "generate",
          [](const std::string& descriptor) {
            const std::string d = descriptor.rfind("gen:", 0) == 0 ? descriptor : "gen:" + descriptor;
            return gen_from_descriptor(d).profile;
          },
          py::arg("descriptor"), "Corpus member such as 'harmonic' or 'counterexample_z:30'.")
      .def_static(
          "load",
          [](const std::string& path) {
            std::istringstream none;
            return load_input(path, none).profile;
          },
          py::arg("path"))
      .def_property_readonly("name", &Profile::name)
      .def_property_readonly("kind", &Profile::kind)
      .def("value_at", &Profile::value_at, py::arg("t"))
      .def("scaled", &Profile::scaled, py::arg("factor"))
      .def("power", &Profile::power, py::arg("exponent"))
      .def("power_abscissa", &Profile::power_abscissa)
      .def("__repr__", [](const Profile& p) { return "<Profile " + p.name() + " (" + p.kind() + ")>"; });

  m.def(
      "zeta_value",
      [](const Profile& x, double s) {
        const Bounded b = zeta_value(x, s);
        return py::make_tuple(b.value, b.error);
      },
      py::arg("x"), py::arg("s"), "(value, error bound) of the sum of mu^s.");
  m.def(
      "zeta_limit", [](const Profile& x, double p) { return limit_dict(zeta_limit(x, p).estimate); }, py::arg("x"),
      py::arg("p") = 1.0);
  m.def(
      "dixmier",
      [](const Profile& x, const std::string& psi) { return limit_dict(dixmier_estimate(x, make_psi(psi))); },
      py::arg("x"), py::arg("psi") = "psi1");
  m.def(
      "marcinkiewicz_norm",
      [](const Profile& x, const std::string& psi) { return sup_dict(marcinkiewicz_norm(x, make_psi(psi))); },
      py::arg("x"), py::arg("psi") = "psi1");
  m.def(
      "quasinorm",
      [](const Profile& x, const std::string& psi) { return sup_dict(quasinorm_F(x, make_psi(psi))); },
      py::arg("x"), py::arg("psi") = "psi1");
  m.def(
      "small_ideal_constant", [](const Profile& x) { return sup_dict(small_ideal_constant(x)); }, py::arg("x"));
  m.def(
      "z1_seminorm", [](const Profile& x) { return z1_seminorm(x).value; }, py::arg("x"));
  m.def(
      "zp_seminorm",
      [](const Profile& x, double q) {
        const ZpReport r = zp_seminorm(x, q);
        return py::make_tuple(r.norm.value, r.plus.value);
      },
      py::arg("x"), py::arg("q"), "(norm, plus) variants.");
  m.def(
      "heat_trace",
      [](const Profile& x, double q, double t) {
        const Bounded b = heat_trace(x, q, t);
        return py::make_tuple(b.value, b.error);
      },
      py::arg("x"), py::arg("q"), py::arg("t"));
  m.def(
      "heat_limit",
      [](const Profile& x, double p, double q) {
        const Theorem51Report r = heat_profile_limit(x, p, q);
        py::dict d = limit_dict(r.heat);
        d["pass"] = r.pass;
        return d;
      },
      py::arg("x"), py::arg("p") = 1.0, py::arg("q") = 2.0);
  m.def("gamma", &singtrace::gamma, py::arg("z"));

  m.def(
      "run",
      [](const std::vector<std::string>& args, const std::string& stdin_text) {
        std::istringstream in(stdin_text);
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = run_cli(args, in, out, err, tolerance_from_env());
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), py::arg("stdin") = "", "Runs the command-line front end: (exit code, stdout, stderr).");
}
