#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "slowfast/entryexit.hpp"
#include "slowfast/errors.hpp"
#include "slowfast/numerics.hpp"

using namespace slowfast;

TEST_CASE("theoretical_exit: antisymmetric profile balances at the mirror point") {
  const SlowFastSystem sys = builtin("symmetric_quadratic");
  const ExitSolve a = theoretical_exit(sys, -1.0);
  CHECK(a.p0 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(a.integral_residual) <= 1e-12);
  CHECK(a.leftmost);
  const ExitSolve b = theoretical_exit(sys, -0.5);
  CHECK(b.p0 == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("theoretical_exit: multi-turning exit is the leftmost balance") {
  const SlowFastSystem sys = builtin("multi_turning");
  const ExitSolve exit = theoretical_exit(sys, -1.0);
  // frozen from the dense-scan oracle over the cubic's antiderivative
  CHECK(exit.p0 == doctest::Approx(-0.5442904014743228).epsilon(1e-10));
  CHECK(sys.g(exit.p0, 0.0) > 0.0);
  const double scanned = oracles::dense_scan_balance(
      [&sys](double x) { return sys.h(x, 0.0); }, -1.0, sys.domain().x_max, 200'000);
  CHECK(std::abs(exit.p0 - scanned) < 1e-8);
}

TEST_CASE("theoretical_exit: balance residual survives an independent quadrature") {
  struct Case { const char* name; double x0; };
  for (const Case& c : {Case{"symmetric_quadratic", -1.0}, Case{"multi_turning", -0.9},
                        Case{"example5", -0.7}}) {
    const SlowFastSystem sys = builtin(c.name);
    const ExitSolve exit = theoretical_exit(sys, c.x0);
    const double residual = num::simpson(
        [&sys](double x) { return sys.h(x, 0.0); }, c.x0, exit.p0, 100'000);
    CHECK(std::abs(residual) <= 1e-8);
  }
}

TEST_CASE("theoretical_exit: entry condition and missing balance raise") {
  const SlowFastSystem sys = builtin("symmetric_quadratic");
  CHECK_THROWS_AS(theoretical_exit(sys, 0.5), PreconditionError);

  const SlowFastSystem cubic = builtin("multi_turning");
  try {
    theoretical_exit(cubic, -1.45);
    FAIL("expected ExitNotFound");
  } catch (const ExitNotFound& e) {
    CHECK(e.integral_min < 0.0);  // carries the cumulative-integral minimum
  }
}

TEST_CASE("numerical_return: exact family comes back at -x0") {
  const SlowFastSystem sys = builtin("example5");
  const ReturnSample a = numerical_return(sys, -1.0, 1.0, 1e-3);
  CHECK(std::abs(a.p_eps - 1.0) < 1e-6);
  const ReturnSample b = numerical_return(sys, -0.7, 1.0, 1e-2);
  CHECK(std::abs(b.p_eps - 0.7) < 1e-6);
  CHECK(b.steps > 0);
}

TEST_CASE("numerical_return: escape through the fast face carries the face name") {
  // strong positive perturbation pushes z up immediately
  const SlowFastSystem sys = builtin("example5", {{"alpha", 5.0}});
  try {
    numerical_return(sys, -1.0, 1.0, 1e-2);
    FAIL("expected EscapeError");
  } catch (const EscapeError& e) {
    CHECK(e.face == "z_max");
  }
}

TEST_CASE("numerical_return: rejects nonpositive eps and out-of-domain starts") {
  const SlowFastSystem sys = builtin("symmetric_quadratic");
  CHECK_THROWS_AS(numerical_return(sys, -1.0, 0.1, 0.0), PreconditionError);
  CHECK_THROWS_AS(numerical_return(sys, -1.0, 3.0, 1e-3), DomainError);
}

TEST_CASE("convergence_study: empty ladder gives an empty table") {
  const SlowFastSystem sys = builtin("symmetric_quadratic");
  const ConvergenceStudy study = convergence_study(sys, -1.0, 0.1, {});
  CHECK(study.rows.empty());
  CHECK(study.escaped.empty());
}

TEST_CASE("convergence_study: exact family errors stay under 1e-6 along the ladder") {
  const SlowFastSystem sys = builtin("example5");
  const std::vector<double> ladder{1e-2, 1e-3, 1e-4};
  const ConvergenceStudy study = convergence_study(sys, -1.0, 1.0, ladder);
  REQUIRE(study.rows.size() == 3);
  CHECK(study.p0 == doctest::Approx(1.0).epsilon(1e-12));
  for (const ConvergenceRow& row : study.rows) CHECK(std::abs(row.err) <= 1e-6);
}

TEST_CASE("convergence_study: ladder must be strictly decreasing and positive") {
  const SlowFastSystem sys = builtin("symmetric_quadratic");
  const std::vector<double> bad{1e-3, 1e-2};
  CHECK_THROWS_AS(convergence_study(sys, -1.0, 0.1, bad), PreconditionError);
  const std::vector<double> nonpos{1e-3, 0.0};
  CHECK_THROWS_AS(convergence_study(sys, -1.0, 0.1, nonpos), PreconditionError);
}

TEST_CASE("convergence_study: escapes are recorded as data, not failures") {
  const SlowFastSystem sys = builtin("example5", {{"alpha", 5.0}});
  const std::vector<double> ladder{1e-2, 1e-3};
  const ConvergenceStudy study = convergence_study(sys, -1.0, 1.0, ladder);
  CHECK(study.rows.empty());
  CHECK(study.escaped == ladder);
}

TEST_CASE("exit_derivative: symmetry gives slope -1") {
  const SlowFastSystem sys = builtin("symmetric_quadratic");
  CHECK(exit_derivative(sys, -1.0) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(exit_derivative(sys, -0.5) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("exit_derivative: matches a centered difference of the exit map") {
  const SlowFastSystem sys = builtin("multi_turning");
  const double derivative = exit_derivative(sys, -1.0);
  CHECK(derivative == doctest::Approx(-1.6589025281872454).epsilon(1e-9));
  const double fd = oracles::central_difference(
      [&sys](double x0) { return theoretical_exit(sys, x0).p0; }, -1.0, 1e-6);
  CHECK(std::abs(derivative - fd) / std::abs(fd) < 1e-6);
}

TEST_CASE("exit map is strictly decreasing near a classical entry") {
  const SlowFastSystem sys = builtin("symmetric_quadratic");
  double previous = theoretical_exit(sys, -1.2).p0;
  for (double x0 : {-1.1, -1.0, -0.9, -0.8}) {
    const double p0 = theoretical_exit(sys, x0).p0;
    CHECK(p0 < previous);
    CHECK(exit_derivative(sys, x0) < 0.0);
    previous = p0;
  }
}
