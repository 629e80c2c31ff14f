#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "slowfast/asymptotics.hpp"
#include "slowfast/blowup.hpp"
#include "slowfast/entryexit.hpp"
#include "slowfast/errors.hpp"
#include "slowfast/example5.hpp"
#include "slowfast/system.hpp"

namespace py = pybind11;
using namespace slowfast;

PYBIND11_MODULE(slowfast, m) {
  m.doc() = "Entry-exit maps of slow-fast planar systems: simulation, blow-up "
            "transition maps, and asymptotic-scale fits";

  py::register_exception<Error>(m, "SlowfastError");

  py::class_<DomainBox>(m, "DomainBox")
      .def(py::init<double, double, double>(), py::arg("x_min"), py::arg("x_max"),
           py::arg("z_max"))
      .def_readonly("x_min", &DomainBox::x_min)
      .def_readonly("x_max", &DomainBox::x_max)
      .def_readonly("z_max", &DomainBox::z_max)
      .def("contains", &DomainBox::contains);

  py::class_<SlowFastSystem>(m, "SlowFastSystem")
      .def("f", &SlowFastSystem::f)
      .def("g", &SlowFastSystem::g)
      .def("h", &SlowFastSystem::h)
      .def_property_readonly("name", &SlowFastSystem::name)
      .def_property_readonly("fast_exponent", &SlowFastSystem::fast_exponent)
      .def_property_readonly("params", &SlowFastSystem::params)
      .def_property_readonly("domain", &SlowFastSystem::domain)
      .def("__repr__", [](const SlowFastSystem& sys) {
        return "<SlowFastSystem '" + sys.name() + "' m=" +
               std::to_string(sys.fast_exponent()) + ">";
      });

  m.def("builtin", &builtin, py::arg("name"),
        py::arg("params") = std::map<std::string, double>{},
        "Catalog system by name: example5, symmetric_quadratic, linear_case, "
        "flat_perturbed, multi_turning");
  m.def("builtin_names", &builtin_names);
  m.def(
      "rhs",
      [](const SlowFastSystem& sys, double x, double z, double eps) {
        const Deriv2 d = rhs(sys, x, z, eps);
        return py::make_tuple(d.dx, d.dz);
      },
      py::arg("system"), py::arg("x"), py::arg("z"), py::arg("eps"));
  m.def("flat_exp", &flat_exp);

  py::class_<DelayConditionReport>(m, "DelayConditionReport")
      .def_readonly("entry_ok", &DelayConditionReport::entry_ok)
      .def_readonly("exit_ok", &DelayConditionReport::exit_ok)
      .def_readonly("sign_changes", &DelayConditionReport::sign_changes)
      .def_readonly("classical", &DelayConditionReport::classical);
  m.def("check_conditions", &check_conditions, py::arg("system"), py::arg("x_entry"),
        py::arg("x_exit"), py::arg("grid_n") = 1024);

  py::class_<Tolerances>(m, "Tolerances")
      .def(py::init<>())
      .def_readwrite("rel", &Tolerances::rel)
      .def_readwrite("abs", &Tolerances::abs)
      .def_readwrite("h_min", &Tolerances::h_min)
      .def_readwrite("h_max", &Tolerances::h_max)
      .def_readwrite("max_steps", &Tolerances::max_steps);

  py::class_<ExitSolve>(m, "ExitSolve")
      .def_readonly("x0", &ExitSolve::x0)
      .def_readonly("p0", &ExitSolve::p0)
      .def_readonly("integral_residual", &ExitSolve::integral_residual)
      .def_readonly("bracket_lo", &ExitSolve::bracket_lo)
      .def_readonly("bracket_hi", &ExitSolve::bracket_hi)
      .def_readonly("leftmost", &ExitSolve::leftmost);
  m.def("theoretical_exit", &theoretical_exit, py::arg("system"), py::arg("x0"));
  m.def("exit_derivative", &exit_derivative, py::arg("system"), py::arg("x0"));

  py::class_<ReturnSample>(m, "ReturnSample")
      .def_readonly("x0", &ReturnSample::x0)
      .def_readonly("z0", &ReturnSample::z0)
      .def_readonly("eps", &ReturnSample::eps)
      .def_readonly("p_eps", &ReturnSample::p_eps)
      .def_readonly("steps", &ReturnSample::steps)
      .def_readonly("wall_time", &ReturnSample::wall_time);
  m.def(
      "numerical_return",
      [](const SlowFastSystem& sys, double x0, double z0, double eps, const Tolerances& tol) {
        return numerical_return(sys, x0, z0, eps, tol);
      },
      py::arg("system"), py::arg("x0"), py::arg("z0"), py::arg("eps"),
      py::arg("tol") = Tolerances{});

  py::class_<ConvergenceRow>(m, "ConvergenceRow")
      .def_readonly("eps", &ConvergenceRow::eps)
      .def_readonly("p_eps", &ConvergenceRow::p_eps)
      .def_readonly("p0", &ConvergenceRow::p0)
      .def_readonly("err", &ConvergenceRow::err);
  py::class_<ConvergenceStudy>(m, "ConvergenceStudy")
      .def_readonly("p0", &ConvergenceStudy::p0)
      .def_readonly("rows", &ConvergenceStudy::rows)
      .def_readonly("escaped", &ConvergenceStudy::escaped);
  m.def(
      "convergence_study",
      [](const SlowFastSystem& sys, double x0, double z0, const std::vector<double>& ladder,
         const Tolerances& tol) { return convergence_study(sys, x0, z0, ladder, tol); },
      py::arg("system"), py::arg("x0"), py::arg("z0"), py::arg("eps_ladder"),
      py::arg("tol") = Tolerances{});

  py::class_<AffineState>(m, "AffineState")
      .def(py::init<double, double, double>(), py::arg("x"), py::arg("z"), py::arg("E"))
      .def_readwrite("x", &AffineState::x)
      .def_readwrite("z", &AffineState::z)
      .def_readwrite("E", &AffineState::E);
  py::class_<PolarState>(m, "PolarState")
      .def(py::init<double, double, double>(), py::arg("x"), py::arg("theta"), py::arg("r"))
      .def_readwrite("x", &PolarState::x)
      .def_readwrite("theta", &PolarState::theta)
      .def_readwrite("r", &PolarState::r);
  m.def("affine_to_original", [](const AffineState& s) {
    const Original3 o = affine_to_original(s);
    return py::make_tuple(o.x, o.z, o.eps);
  });
  m.def("polar_to_original", [](const PolarState& s) {
    const Original3 o = polar_to_original(s);
    return py::make_tuple(o.x, o.z, o.eps);
  });
  m.def("polar_to_affine", &polar_to_affine);
  m.def("affine_to_polar", &affine_to_polar);
  m.def("affine_rhs", [](const SlowFastSystem& sys, const AffineState& s) {
    const AffineDeriv d = affine_rhs(sys, s);
    return py::make_tuple(d.dx, d.dz, d.dE);
  });
  m.def("polar_rhs", [](const SlowFastSystem& sys, const PolarState& s) {
    const PolarDeriv d = polar_rhs(sys, s);
    return py::make_tuple(d.dx, d.dr, d.dtheta);
  });

  m.def("transition_x1",
        [](const SlowFastSystem& sys, double x0, double E1) {
          return transition_x1(sys, x0, E1).x;
        },
        py::arg("system"), py::arg("x0"), py::arg("E1"));
  m.def("transition_x2",
        [](const SlowFastSystem& sys, double x1) { return transition_x2(sys, x1).x; },
        py::arg("system"), py::arg("x1"));
  m.def("transition_x3",
        [](const SlowFastSystem& sys, double x2, double E1) {
          return transition_x3(sys, x2, E1).x;
        },
        py::arg("system"), py::arg("x2"), py::arg("E1"));

  py::class_<SingularOrbit>(m, "SingularOrbit")
      .def_readonly("x0", &SingularOrbit::x0)
      .def_readonly("x1", &SingularOrbit::x1)
      .def_readonly("x2", &SingularOrbit::x2)
      .def_readonly("x3", &SingularOrbit::x3)
      .def_readonly("E1", &SingularOrbit::E1);
  m.def("singular_composition", &singular_composition, py::arg("system"), py::arg("x0"),
        py::arg("E1"));

  py::class_<PipelineResult>(m, "PipelineResult")
      .def_readonly("x_exit", &PipelineResult::x_exit)
      .def_readonly("z1", &PipelineResult::z1)
      .def_readonly("e3", &PipelineResult::e3)
      .def_readonly("z1_expected", &PipelineResult::z1_expected)
      .def_readonly("e3_expected", &PipelineResult::e3_expected)
      .def_readonly("max_conservation_err", &PipelineResult::max_conservation_err);
  m.def(
      "affine_pipeline",
      [](const SlowFastSystem& sys, double x0, double z0, double eps, double E1,
         const Tolerances& tol) { return affine_pipeline(sys, x0, z0, eps, E1, tol); },
      py::arg("system"), py::arg("x0"), py::arg("z0"), py::arg("eps"), py::arg("E1") = 0.2,
      py::arg("tol") = Tolerances{});

  py::class_<AsymptoticFit>(m, "AsymptoticFit")
      .def_readonly("basis", &AsymptoticFit::basis)
      .def_readonly("coeffs", &AsymptoticFit::coeffs)
      .def_readonly("residual_norm", &AsymptoticFit::residual_norm)
      .def_readonly("condition_estimate", &AsymptoticFit::condition_estimate)
      .def_readonly("ill_conditioned", &AsymptoticFit::ill_conditioned);
  m.def(
      "fit_scale",
      [](const std::vector<double>& eps, const std::vector<double>& y, int degree) {
        return fit_scale(eps, y, degree);
      },
      py::arg("eps"), py::arg("y"), py::arg("basis_degree") = 2);

  py::class_<LogTermReport>(m, "LogTermReport")
      .def_readonly("has_log", &LogTermReport::has_log)
      .def_readonly("a01", &LogTermReport::a01)
      .def_readonly("threshold", &LogTermReport::threshold)
      .def_readonly("log_free_residual", &LogTermReport::log_free_residual)
      .def_readonly("fit", &LogTermReport::fit)
      .def_readonly("eps", &LogTermReport::eps)
      .def_readonly("y", &LogTermReport::y);
  m.def(
      "detect_log_term",
      [](const SlowFastSystem& sys, double x0, double z0, const std::vector<double>& ladder,
         const Tolerances& tol) { return detect_log_term(sys, x0, z0, ladder, tol); },
      py::arg("system"), py::arg("x0"), py::arg("z0"), py::arg("eps_ladder"),
      py::arg("tol") = Tolerances{});
  m.def("default_eps_ladder", &default_eps_ladder);

  m.def("kappa", &kappa);
  m.def("kappa_inverse", &kappa_inverse);
  py::class_<KappaSystem>(m, "KappaSystem")
      .def_readonly("base", &KappaSystem::base)
      .def_readonly("transformed", &KappaSystem::transformed);
  m.def("kappa_transform", &kappa_transform, py::arg("base"));

  m.def("z0_exact", &z0_exact, py::arg("x"), py::arg("x0"), py::arg("eps"));
  m.def("z0_exact_derivative", &z0_exact_derivative, py::arg("x"), py::arg("x0"),
        py::arg("eps"));
  m.def("z1_exact", &z1_exact, py::arg("x"), py::arg("x0"), py::arg("eps"));
  m.def("c_closed", &c_closed, py::arg("x0"), py::arg("eps"));
  m.def("q_prefactor", &q_prefactor, py::arg("x0"), py::arg("eps"));
  py::class_<PerturbationResult>(m, "PerturbationResult")
      .def_readonly("x0", &PerturbationResult::x0)
      .def_readonly("eps", &PerturbationResult::eps)
      .def_readonly("c_closed", &PerturbationResult::c_closed)
      .def_readonly("c_fd", &PerturbationResult::c_fd)
      .def_readonly("alpha_used", &PerturbationResult::alpha_used)
      .def_readonly("agreement", &PerturbationResult::agreement);
  m.def(
      "c_via_finite_difference",
      [](double x0, double eps, double alpha, const Tolerances& tol) {
        return c_via_finite_difference(x0, eps, alpha, tol);
      },
      py::arg("x0"), py::arg("eps"), py::arg("alpha") = 1e-3,
      py::arg("tol") = Tolerances{});
}
