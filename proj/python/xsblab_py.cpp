#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "xsblab/bilinear.hpp"
#include "xsblab/config.hpp"
#include "xsblab/counterexamples.hpp"
#include "xsblab/errors.hpp"
#include "xsblab/estimates.hpp"
#include "xsblab/norms.hpp"
#include "xsblab/runner.hpp"
#include "xsblab/solver.hpp"

namespace py = pybind11;
using namespace xsb;

namespace {

using CArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;

std::vector<py::ssize_t> field_shape(const LatticeGeometry& g) {
  std::vector<py::ssize_t> shape(g.dim(), g.modes());
  shape.push_back(g.tau_count());
  return shape;
}

std::vector<cplx> flat(const CArray& a, std::size_t expected, const char* what) {
  if (static_cast<std::size_t>(a.size()) != expected)
    throw GeometryError(std::string(what) + ": expected " + std::to_string(expected) + " values, got " +
                        std::to_string(a.size()));
  return std::vector<cplx>(a.data(), a.data() + a.size());
}

CArray to_array(std::span<const cplx> v, std::vector<py::ssize_t> shape) {
  CArray out(shape);
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

FrequencyField field(const LatticeGeometry& g, const CArray& a) { return FrequencyField(g, flat(a, g.size(), "field")); }

Sign sign_of(const std::string& s) { return parse_sign(s); }

BilinearSymbol symbol_of(const std::string& name, double s) {
  if (name == "I_minus") return I_minus(s);
  if (name == "J_minus") return J_minus(s);
  if (name == "I_plus") return I_plus(s);
  if (name == "J_plus") return J_plus(s);
  throw ConfigError("unknown symbol '" + name + "'");
}

const char* status_name(CaseStatus s) {
  switch (s) {
    case CaseStatus::proven: return "proven";
    case CaseStatus::failing: return "failing";
    case CaseStatus::open: return "open";
  }
  return "?";
}

}  // namespace

PYBIND11_MODULE(_xsblab, m) {
  m.doc() = "X^{s,b} norms, multilinear estimate quotients, counterexample families and an NLS Picard solver";

  py::register_exception<GeometryError>(m, "GeometryError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<SingularSymbolError>(m, "SingularSymbolError", PyExc_ArithmeticError);
  py::register_exception<UndefinedQuotientError>(m, "UndefinedQuotientError", PyExc_ArithmeticError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

  py::class_<LatticeGeometry>(m, "Lattice")
      .def(py::init([](const std::string& kind, int modes, double dxi, int tau_count, double dtau) {
             return LatticeGeometry::create(parse_domain_kind(kind), modes, dxi, tau_count, dtau);
           }),
           py::arg("domain_kind"), py::arg("modes_per_axis"), py::arg("xi_spacing"), py::arg("tau_count"),
           py::arg("tau_spacing"))
      .def_property_readonly("domain_kind", [](const LatticeGeometry& g) { return std::string(to_string(g.kind())); })
      .def_property_readonly("dim", &LatticeGeometry::dim)
      .def_property_readonly("modes_per_axis", &LatticeGeometry::modes)
      .def_property_readonly("xi_spacing", &LatticeGeometry::xi_spacing)
      .def_property_readonly("tau_count", &LatticeGeometry::tau_count)
      .def_property_readonly("tau_spacing", &LatticeGeometry::tau_spacing)
      .def_property_readonly("shape", [](const LatticeGeometry& g) { return py::tuple(py::cast(field_shape(g))); })
      .def_property_readonly("fingerprint", &LatticeGeometry::fingerprint)
      .def("__repr__", [](const LatticeGeometry& g) { return "Lattice(" + g.fingerprint() + ")"; });

  m.def(
      "forward_transform",
      [](const LatticeGeometry& g, const CArray& u) {
        return to_array(forward_transform(SpatialField(g, flat(u, g.size(), "samples"))).coeffs(), field_shape(g));
      },
      py::arg("lattice"), py::arg("samples"), "Physical samples u(x, t) to space-time Fourier coefficients.");
  m.def(
      "inverse_transform",
      [](const LatticeGeometry& g, const CArray& f) {
        return to_array(inverse_transform(field(g, f)).values(), field_shape(g));
      },
      py::arg("lattice"), py::arg("coeffs"));
  m.def(
      "conjugate_field", [](const LatticeGeometry& g, const CArray& f) {
        return to_array(conjugate_field(field(g, f)).coeffs(), field_shape(g));
      },
      py::arg("lattice"), py::arg("coeffs"), "Coefficients of the complex conjugate function.");
  m.def(
      "xsb_norm",
      [](const LatticeGeometry& g, const CArray& f, double s, double b, const std::string& sign) {
        return xsb_norm(field(g, f), {s, b, sign_of(sign)});
      },
      py::arg("lattice"), py::arg("coeffs"), py::arg("s"), py::arg("b"), py::arg("sign") = "+");
  m.def(
      "mixed_norm",
      [](const LatticeGeometry& g, const CArray& u, double p, double q, double sigma) {
        return mixed_norm(SpatialField(g, flat(u, g.size(), "samples")), {p, q, sigma});
      },
      py::arg("lattice"), py::arg("samples"), py::arg("p"), py::arg("q"), py::arg("sigma") = 0.0,
      "|J^sigma u|_{L^p_t L^q_x} on the sampled window.");
  m.def(
      "apply_bilinear",
      [](const std::string& symbol, double s, const LatticeGeometry& g, const CArray& f, const CArray& h,
         bool oracle) {
        const BilinearSymbol sym = symbol_of(symbol, s);
        const FrequencyField a = field(g, f), b = field(g, h);
        return to_array((oracle ? apply_bilinear_oracle(sym, a, b) : apply_bilinear(sym, a, b)).coeffs(),
                        field_shape(g));
      },
      py::arg("symbol"), py::arg("s"), py::arg("lattice"), py::arg("f"), py::arg("g"), py::arg("oracle") = false,
      "symbol is one of I_minus, J_minus, I_plus, J_plus.");

  m.def("list_cases", [] {
    py::list out;
    for (const auto& c : registry()) {
      py::dict d;
      d["id"] = c.id;
      d["arity"] = c.arity;
      d["status"] = status_name(c.status);
      d["anchor"] = c.anchor;
      d["parameter_map"] = c.parameter_map;
      out.append(d);
    }
    return out;
  });
  m.def(
      "maximize_quotient",
      [](const std::string& case_id, double s, double b, double bprime, double sigma, double eps, std::uint64_t seed,
         int budget, int hill_steps, double alpha, bool refine) {
        const EstimateCase& c = find_case(case_id);
        MaximizeOptions opt;
        opt.budget = budget;
        opt.hill_steps = hill_steps;
        opt.alpha = alpha;
        opt.refine = refine;
        const QuotientReport r = maximize_quotient(c, {s, b, bprime, sigma, eps}, seed, opt);
        py::dict d;
        d["case_id"] = r.case_id;
        d["fingerprint"] = r.fingerprint;
        d["samples"] = r.samples;
        d["max_quotient"] = r.max_quotient;
        d["argmax_seed"] = r.argmax_seed;
        d["refinement_ratio"] = r.refinement_ratio ? py::cast(*r.refinement_ratio) : py::none();
        d["admissible"] = r.admissible;
        d["history"] = r.history;
        return d;
      },
      py::arg("case_id"), py::arg("s"), py::arg("b") = 0.55, py::arg("bprime") = 0.0, py::arg("sigma") = 0.0,
      py::arg("eps") = 0.05, py::arg("seed") = 1, py::arg("budget") = 200, py::arg("hill_steps") = 40,
      py::arg("alpha") = 1.0, py::arg("refine") = true);

  m.def("list_families", [] {
    py::list out;
    for (const auto& f : families()) {
      py::dict d;
      d["id"] = f.id;
      d["target_case"] = f.target_case;
      d["slope_formula"] = f.slope_formula;
      d["anchor"] = f.anchor;
      out.append(d);
    }
    return out;
  });
  m.def(
      "fit_growth",
      [](const std::string& family, double s, double b, std::optional<double> bprime, const std::vector<int>& n) {
        const CounterexampleFamily& f = find_family(family);
        const GrowthReport r = fit_growth(f, {s, b, bprime.value_or(f.default_bprime), 0.0, 0.05}, n);
        py::dict d;
        d["n"] = r.n;
        d["quotient"] = r.quotient;
        d["fitted_slope"] = r.fitted_slope;
        d["predicted_slope"] = r.predicted_slope;
        d["fingerprint"] = r.fingerprint;
        d["admissible"] = r.admissible;
        return d;
      },
      py::arg("family"), py::arg("s"), py::arg("b") = 0.55, py::arg("bprime") = py::none(),
      py::arg("n") = std::vector<int>{4, 8, 16, 32});
  m.def(
      "verify_lower_bound",
      [](const std::string& family, int n) {
        const LowerBoundReport r = verify_lower_bound(find_family(family), n);
        return py::make_tuple(r.pass, r.margin);
      },
      py::arg("family"), py::arg("n"));

  m.def(
      "solve",
      [](const std::string& nonlinearity, const std::string& kind, int modes, double dxi, double s, double amplitude,
         double excess, double T, int steps, std::uint64_t seed, int max_iters, double tol) {
        SolveConfig cfg;
        cfg.T = T;
        cfg.time_steps = steps;
        cfg.max_iters = max_iters;
        cfg.residual_tol = tol;
        cfg.sobolev_index = s;
        cfg.geometry = LatticeGeometry::unchecked(parse_domain_kind(kind), modes, dxi, 2, 1.0);
        const NonlinearitySpec n = NonlinearitySpec::parse(nonlinearity);
        const SpatialSpectrum u0 = rough_data(cfg.geometry, {s, excess, seed, amplitude});
        const SolveResult r = solve_local(u0, n, cfg);
        std::vector<py::ssize_t> shape{static_cast<py::ssize_t>(r.trajectory.slices.size())};
        for (int d = 0; d < cfg.geometry.dim(); ++d) shape.push_back(modes);
        CArray slices(shape);
        cplx* out = slices.mutable_data();
        for (const auto& sl : r.trajectory.slices) out = std::copy(sl.begin(), sl.end(), out);
        py::dict d;
        d["times"] = r.trajectory.times;
        d["slices"] = slices;
        d["residuals"] = r.residuals;
        d["hs_trace"] = r.hs_trace;
        d["converged"] = r.converged;
        d["diverged"] = r.diverged;
        d["iterations"] = r.iterations;
        d["contraction_ratio"] = contraction_ratio(r.residuals);
        d["max_jump"] = persistence_probe(r, cfg).max_jump;
        return d;
      },
      py::arg("nonlinearity"), py::arg("domain_kind") = "torus_1d", py::arg("modes") = 32, py::arg("xi_spacing") = 1.0,
      py::arg("s") = 0.0, py::arg("amplitude") = 0.5, py::arg("excess") = 0.05, py::arg("T") = 0.1,
      py::arg("steps") = 64, py::arg("seed") = 1, py::arg("max_iters") = 50, py::arg("tol") = 1e-10,
      "Picard iteration on rough random data amplitude * g_xi <xi>^{-(s + n/2 + excess)}.");

  m.def(
      "run_config",
      [](const std::string& text) {
        const Report r = execute(parse_config(text));
        return py::make_tuple(r.csv, r.json);
      },
      py::arg("text"), "Run a config given as text; returns (csv, json) without writing files.");
  m.def("list_presets", &list_presets);
  m.attr("__version__") = tool_version();
}
