#pragma once

#include <span>
#include <vector>

#include "slowfast/integrate.hpp"
#include "slowfast/system.hpp"

namespace slowfast {

/// Solution of the entry-exit balance: the leftmost p > x0 where the
/// cumulative integral of g/f along the critical segment returns to zero
/// with repulsion (g(p,0) > 0).
struct ExitSolve {
  double x0;
  double p0;
  double integral_residual;  // cumulative integral re-evaluated at p0
  double bracket_lo;
  double bracket_hi;
  bool leftmost;             // the scan always selects the leftmost balance
};

ExitSolve theoretical_exit(const SlowFastSystem& sys, double x0);

/// First return of the simulated flow to the section z = z0.
struct ReturnSample {
  double x0;
  double z0;
  double eps;
  double p_eps;
  std::int64_t steps;
  double wall_time;
};

ReturnSample numerical_return(const SlowFastSystem& sys, double x0, double z0, double eps,
                              const Tolerances& tol = {});

/// Same run as numerical_return, keeping the full trajectory (for CSV export
/// and dense inspection); the event state holds the return point.
Trajectory return_trajectory(const SlowFastSystem& sys, double x0, double z0, double eps,
                             const Tolerances& tol = {});

struct ConvergenceRow {
  double eps;
  double p_eps;
  double p0;
  double err;  // p_eps - p0
};

struct ConvergenceStudy {
  double p0;
  std::vector<ConvergenceRow> rows;      // in ladder order, escapes excluded
  std::vector<double> escaped;           // eps values whose trajectory left the domain
};

/// Runs numerical_return along a strictly decreasing eps ladder and compares
/// against the integral solver's exit point.  Escapes are recorded, not fatal.
ConvergenceStudy convergence_study(const SlowFastSystem& sys, double x0, double z0,
                                   std::span<const double> eps_ladder,
                                   const Tolerances& tol = {});

/// dp0/dx0 = h(x0,0)/h(p0,0) with h = g/f; negative under the entry/exit
/// sign conditions.
double exit_derivative(const SlowFastSystem& sys, double x0);

namespace detail {
/// Leftmost p > from_x where the cumulative integral of h(.,0) crosses zero
/// from below with h(p,0) > 0.  Shared by theoretical_exit and the middle
/// blow-up transition map.
ExitSolve leftmost_balance(const SlowFastSystem& sys, double from_x);
}  // namespace detail

}  // namespace slowfast
