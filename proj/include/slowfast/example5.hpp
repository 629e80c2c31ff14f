#pragma once

#include "slowfast/integrate.hpp"

namespace slowfast {

/// Closed-form solution family of the quadratic catalog example at alpha = 0:
/// z0_exact(x) = 2 eps / (2 eps + x0^2 - x^2), normalized to 1 at x = x0.
double z0_exact(double x, double x0, double eps);

/// d z0_exact / dx, analytic.
double z0_exact_derivative(double x, double x0, double eps);

/// First-order correction in alpha:
/// z1(x) = 8 eps^2 / (2 eps + x0^2 - x^2)^2 * integral_{x0}^{x} ds / (2 eps + x0^2 - s^2),
/// the inner integral evaluated by adaptive quadrature.
double z1_exact(double x, double x0, double eps);

/// First-order coefficient of the perturbed return map,
/// c(x0, eps) = (2 eps / x0) integral_{x0}^{-x0} ds / (2 eps + x0^2 - s^2),
/// evaluated through the partial-fraction antiderivative; the raw integrand
/// is near-singular at the endpoints for small eps.
double c_closed(double x0, double eps);

/// Explicit analytic prefactor q(x0, eps) = (2/x0^2)(1 + 2 eps/x0^2)^{-1/2}
/// such that c - q * eps log eps is analytic in eps at 0.  One valid
/// representative; only determined up to analytic-in-eps terms.
double q_prefactor(double x0, double eps);

struct PerturbationResult {
  double x0;
  double eps;
  double c_closed;
  double c_fd;
  double alpha_used;
  double agreement;  // |c_fd - c_closed| / |c_closed|
};

/// Centered finite difference of the simulated return map in alpha:
/// c_fd = (p_eps^{+alpha}(x0) - p_eps^{-alpha}(x0)) / (2 alpha), run on the
/// quadratic catalog example with the section at z0 = 1.
PerturbationResult c_via_finite_difference(double x0, double eps, double alpha,
                                           const Tolerances& tol = {});

}  // namespace slowfast
