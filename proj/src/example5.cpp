#include "slowfast/example5.hpp"

#include <cmath>
#include <sstream>

#include "slowfast/entryexit.hpp"
#include "slowfast/errors.hpp"
#include "slowfast/numerics.hpp"
#include "slowfast/system.hpp"

namespace slowfast {

namespace {

double existence_denominator(double x, double x0, double eps) {
  // factored difference of squares: exact at x = +-x0
  const double denom = 2.0 * eps + (x0 - x) * (x0 + x);
  if (!(denom > 0.0)) {
    std::ostringstream msg;
    msg << "x = " << x << " is outside the solution's existence window "
        << "(2 eps + x0^2 - x^2 = " << denom << ")";
    throw PreconditionError(msg.str());
  }
  return denom;
}

}  // namespace

double z0_exact(double x, double x0, double eps) {
  return 2.0 * eps / existence_denominator(x, x0, eps);
}

double z0_exact_derivative(double x, double x0, double eps) {
  const double denom = existence_denominator(x, x0, eps);
  return 4.0 * eps * x / (denom * denom);
}

double z1_exact(double x, double x0, double eps) {
  const double denom = existence_denominator(x, x0, eps);
  existence_denominator(x0, x0, eps);
  const double inner =
      num::integrate_adaptive(
          [x0, eps](double s) { return 1.0 / (2.0 * eps + (x0 - s) * (x0 + s)); }, x0, x,
          1e-14)
          .value;
  return 8.0 * eps * eps / (denom * denom) * inner;
}

double c_closed(double x0, double eps) {
  if (!(x0 < 0.0)) throw PreconditionError("c_closed: x0 must be negative");
  if (!(eps > 0.0)) throw PreconditionError("c_closed: eps must be positive");
  const double b = std::sqrt(2.0 * eps + x0 * x0);
  // (2 eps / x0) * (1/b) * log((b - x0)/(b + x0)); with x0 < 0 the small
  // denominator b + x0 = 2 eps / (b - x0) is eliminated algebraically.
  return 2.0 * eps / (x0 * b) * (2.0 * std::log(b - x0) - std::log(2.0 * eps));
}

double q_prefactor(double x0, double eps) {
  if (!(x0 < 0.0)) throw PreconditionError("q_prefactor: x0 must be negative");
  return 2.0 / (x0 * x0) / std::sqrt(1.0 + 2.0 * eps / (x0 * x0));
}

PerturbationResult c_via_finite_difference(double x0, double eps, double alpha,
                                           const Tolerances& tol) {
  if (!(alpha > 0.0))
    throw PreconditionError("c_via_finite_difference: alpha must be > 0");
  const double z0_section = 1.0;  // the exact family is normalized to z0 = 1
  const SlowFastSystem plus = builtin("example5", {{"alpha", alpha}});
  const SlowFastSystem minus = builtin("example5", {{"alpha", -alpha}});
  const double p_plus = numerical_return(plus, x0, z0_section, eps, tol).p_eps;
  const double p_minus = numerical_return(minus, x0, z0_section, eps, tol).p_eps;
  const double c_fd = (p_plus - p_minus) / (2.0 * alpha);
  const double c_ref = c_closed(x0, eps);
  return PerturbationResult{x0,   eps,  c_ref, c_fd, alpha,
                            std::abs(c_fd - c_ref) / std::abs(c_ref)};
}

}  // namespace slowfast
