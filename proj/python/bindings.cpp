#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hilldro/cases.hpp"
#include "hilldro/corrections.hpp"
#include "hilldro/errors.hpp"
#include "hilldro/models.hpp"
#include "hilldro/periodic.hpp"
#include "hilldro/secular.hpp"
#include "hilldro/specfun.hpp"

namespace py = pybind11;
using namespace hilldro;

namespace {

// rows of (t, x, y, X, Y)
py::array_t<double> to_array(const std::vector<CartesianState>& v) {
  py::array_t<double> a({static_cast<py::ssize_t>(v.size()), py::ssize_t{5}});
  auto m = a.mutable_unchecked<2>();
  for (std::size_t i = 0; i < v.size(); ++i) {
    m(i, 0) = v[i].t;
    m(i, 1) = v[i].x;
    m(i, 2) = v[i].y;
    m(i, 3) = v[i].X;
    m(i, 4) = v[i].Y;
  }
  return a;
}

CartesianState state_from(py::handle h) {
  if (py::isinstance<CartesianState>(h)) return h.cast<CartesianState>();
  const auto v = h.cast<std::vector<double>>();
  if (v.size() != 4) throw py::value_error("state must be (x, y, X, Y)");
  return {0.0, v[0], v[1], v[2], v[3]};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Planar Hill problem: reduction, averaged theories, periodic orbits";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<SingularityError>(m, "SingularityError", PyExc_RuntimeError);
  py::register_exception<IntegrationError>(m, "IntegrationError", PyExc_RuntimeError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init([](double mu, double omega) {
             ModelParams p{mu, omega};
             p.validate();
             return p;
           }),
           py::arg("mu") = 1.0, py::arg("omega") = 1.0)
      .def_readwrite("mu", &ModelParams::mu)
      .def_readwrite("omega", &ModelParams::omega)
      .def("hill_radius", &ModelParams::hill_radius);

  py::class_<IntegratorConfig>(m, "IntegratorConfig")
      .def(py::init([](double rtol, double atol) { return IntegratorConfig{rtol, atol}; }),
           py::arg("rtol") = 1e-12, py::arg("atol") = 1e-12)
      .def_readwrite("rtol", &IntegratorConfig::rtol)
      .def_readwrite("atol", &IntegratorConfig::atol)
      .def_readwrite("max_step", &IntegratorConfig::max_step);

  py::class_<CartesianState>(m, "CartesianState")
      .def(py::init([](double x, double y, double X, double Y, double t) {
             return CartesianState{t, x, y, X, Y};
           }),
           py::arg("x"), py::arg("y"), py::arg("X"), py::arg("Y"), py::arg("t") = 0.0)
      .def_readwrite("t", &CartesianState::t)
      .def_readwrite("x", &CartesianState::x)
      .def_readwrite("y", &CartesianState::y)
      .def_readwrite("X", &CartesianState::X)
      .def_readwrite("Y", &CartesianState::Y)
      .def("vec", &CartesianState::vec)
      .def("__repr__", [](const CartesianState& s) {
        return "CartesianState(x=" + std::to_string(s.x) + ", y=" + std::to_string(s.y) +
               ", X=" + std::to_string(s.X) + ", Y=" + std::to_string(s.Y) + ")";
      });

  py::class_<ReducedState>(m, "ReducedState")
      .def(py::init([](double phi, double q, double Phi, double Q) {
             return ReducedState{phi, q, Phi, Q, true};
           }),
           py::arg("phi"), py::arg("q"), py::arg("Phi"), py::arg("Q"))
      .def_readwrite("phi", &ReducedState::phi)
      .def_readwrite("q", &ReducedState::q)
      .def_readwrite("Phi", &ReducedState::Phi)
      .def_readwrite("Q", &ReducedState::Q)
      .def_readonly("phase_defined", &ReducedState::phase_defined);

  py::class_<SecularState>(m, "SecularState")
      .def(py::init([](double phi, double q, double Phi, double Q) {
             return SecularState{phi, q, Phi, Q};
           }),
           py::arg("phi"), py::arg("q"), py::arg("Phi"), py::arg("Q"))
      .def_readwrite("phi", &SecularState::phi)
      .def_readwrite("q", &SecularState::q)
      .def_readwrite("Phi", &SecularState::Phi)
      .def_readwrite("Q", &SecularState::Q);

  py::class_<EllipseFrame>(m, "EllipseFrame")
      .def_readonly("A", &EllipseFrame::A)
      .def_readonly("B", &EllipseFrame::B)
      .def_readonly("xC", &EllipseFrame::xC)
      .def_readonly("yC", &EllipseFrame::yC);

  py::class_<Periods>(m, "Periods")
      .def_readonly("T", &Periods::T)
      .def_readonly("T_star", &Periods::T_star);

  py::class_<PeriodicOrbit>(m, "PeriodicOrbit")
      .def_readonly("initial", &PeriodicOrbit::initial)
      .def_readonly("period", &PeriodicOrbit::period)
      .def_readonly("epsilon", &PeriodicOrbit::epsilon)
      .def_readonly("trace", &PeriodicOrbit::trace)
      .def_readonly("iterations", &PeriodicOrbit::iterations)
      .def_readonly("epsilons", &PeriodicOrbit::epsilons)
      .def("unstable", &PeriodicOrbit::unstable);

  py::class_<Monodromy>(m, "Monodromy")
      .def_readonly("matrix", &Monodromy::matrix)
      .def_readonly("trace", &Monodromy::trace)
      .def_readonly("determinant", &Monodromy::determinant)
      .def_readonly("eigenvalues", &Monodromy::eigenvalues);

  m.def("elliptic_constants", [] {
    const auto& k = specfun::elliptic_constants();
    py::dict d;
    d["K"] = k.K;
    d["E"] = k.E;
    d["Ktilde"] = k.Ktilde;
    d["Etilde"] = k.Etilde;
    return d;
  });

  m.def("hamiltonian", [](py::handle s, const ModelParams& p) { return hamiltonian(state_from(s), p); },
        py::arg("state"), py::arg("params") = ModelParams{});
  m.def("to_reduced", [](py::handle s, const ModelParams& p) { return to_reduced(state_from(s), p); },
        py::arg("state"), py::arg("params") = ModelParams{});
  m.def("from_reduced", &from_reduced, py::arg("reduced"), py::arg("params") = ModelParams{},
        py::arg("t") = 0.0);
  m.def("ellipse_frame", &ellipse_frame, py::arg("reduced"), py::arg("params") = ModelParams{});

  m.def(
      "propagate",
      [](py::handle s, const std::vector<double>& times, const IntegratorConfig& cfg,
         const ModelParams& p) {
        CartesianState s0 = state_from(s);
        s0.t = 0.0;
        std::vector<CartesianState> out;
        for (const auto& smp : propagate_to(s0, times, cfg, p).samples) out.push_back(smp.state);
        return to_array(out);
      },
      py::arg("state"), py::arg("times"), py::arg("config") = IntegratorConfig{},
      py::arg("params") = ModelParams{}, "Samples (t, x, y, X, Y) at the requested epochs.");

  m.def(
      "evaluate_model",
      [](const std::string& model, py::handle s, const std::vector<double>& times, int corrections,
         const ModelParams& p) {
        ModelSpec spec = parse_model(model);
        spec.corrections = corrections;
        return to_array(evaluate_model(spec, state_from(s), times, p));
      },
      py::arg("model"), py::arg("state"), py::arg("times"), py::arg("corrections") = 0,
      py::arg("params") = ModelParams{},
      "model: truth, linear, low6, lindstedt9 or secular:<closed6|series8|quadrature>");

  m.def("periods6", [](py::handle s, const ModelParams& p) {
        return periods6(as_mean(to_reduced(state_from(s), p)), p);
      },
        py::arg("state"), py::arg("params") = ModelParams{});
  m.def("libration_frequency", &libration_frequency, py::arg("Phi"), py::arg("params") = ModelParams{});
  m.def("hamiltonian6", &hamiltonian6, py::arg("q"), py::arg("Q"), py::arg("Phi"),
        py::arg("params") = ModelParams{});
  m.def("hamiltonian8", &hamiltonian8, py::arg("q"), py::arg("Q"), py::arg("Phi"),
        py::arg("params") = ModelParams{});
  m.def(
      "lindstedt_period",
      [](py::handle s, int corrections, const ModelParams& p) {
        return LindstedtSolution(initial_mean_elements(state_from(s), corrections, p), p)
            .libration_period();
      },
      py::arg("state"), py::arg("corrections") = 0, py::arg("params") = ModelParams{});
  m.def(
      "libration_period",
      [](py::handle s, const std::string& mode, int corrections, const ModelParams& p) {
        SecularSolutionConfig cfg;
        cfg.mode = parse_mode(mode);
        return secular_libration_period(initial_mean_elements(state_from(s), corrections, p), cfg,
                                        p, {1e-13, 1e-13});
      },
      py::arg("state"), py::arg("mode") = "quadrature", py::arg("corrections") = 0,
      py::arg("params") = ModelParams{});

  m.def("direct_correct", &direct_correct, py::arg("mean"), py::arg("order"),
        py::arg("params") = ModelParams{});
  m.def("inverse_correct", &inverse_correct, py::arg("osculating"), py::arg("order"),
        py::arg("params") = ModelParams{});

  m.def(
      "periodicity_error",
      [](py::handle s, double T, const IntegratorConfig& cfg, const ModelParams& p) {
        return periodicity_error(state_from(s), T, cfg, p);
      },
      py::arg("state"), py::arg("T"), py::arg("config") = IntegratorConfig{},
      py::arg("params") = ModelParams{});
  m.def(
      "differential_correct",
      [](py::handle s, double T, double target, int max_iterations, const ModelParams& p) {
        CorrectorConfig cfg;
        cfg.target_epsilon = target;
        cfg.max_iterations = max_iterations;
        return differential_correct(state_from(s), T, cfg, p);
      },
      py::arg("state"), py::arg("T"), py::arg("target") = 1e-12, py::arg("max_iterations") = 20,
      py::arg("params") = ModelParams{});
  m.def(
      "monodromy",
      [](py::handle s, double T, const IntegratorConfig& cfg, const ModelParams& p) {
        return monodromy(state_from(s), T, cfg, p);
      },
      py::arg("state"), py::arg("T"), py::arg("config") = IntegratorConfig{1e-13, 1e-13},
      py::arg("params") = ModelParams{});

  py::list cases;
  for (const auto& tc : kTestCases) {
    py::dict d;
    d["id"] = tc.id;
    d["label"] = std::string(tc.label);
    d["state"] = tc.ic;
    d["T"] = tc.T;
    d["T_star"] = tc.T_star;
    d["Phi"] = tc.Phi;
    cases.append(d);
  }
  m.attr("TEST_CASES") = cases;
  m.attr("CASE3_PERIODIC") = kCase3Periodic;
  m.attr("CASE3_PERIODIC_T") = kCase3PeriodicT;
}
