#include "slowfast/entryexit.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "slowfast/errors.hpp"
#include "slowfast/numerics.hpp"

namespace slowfast {

namespace detail {

ExitSolve leftmost_balance(const SlowFastSystem& sys, double from_x) {
  const DomainBox& box = sys.domain();
  auto h0 = [&sys](double x) { return sys.h(x, 0.0); };

  constexpr int kPanels = 4096;
  constexpr double kQuadTol = 1e-12;
  const double width = (box.x_max - from_x) / kPanels;
  if (!(width > 0.0))
    throw PreconditionError("leftmost_balance: no room to the right of x = " +
                            std::to_string(from_x));

  // March the cumulative integral panel by panel, looking for the first
  // crossing from strictly negative back to zero.  Panels are narrow, so a
  // small refinement budget per panel suffices.
  num::Kahan phi;
  double phi_min = 0.0;
  double x_left = from_x;
  double phi_left = 0.0;
  for (int i = 0; i < kPanels; ++i) {
    const double x_right = from_x + (i + 1) * width;
    phi.add(num::integrate_adaptive(h0, x_left, x_right, kQuadTol / kPanels, 64).value);
    const double phi_right = phi.value();
    phi_min = std::min(phi_min, phi_right);
    if (phi_left < 0.0 && phi_right >= 0.0) {
      // Refine within this panel against the running cumulative value.
      const double base = phi_left;
      const double a = x_left;
      auto cumulative = [&](double p) {
        return base + num::integrate_adaptive(h0, a, p, kQuadTol).value;
      };
      num::RootResult root = num::find_root(cumulative, x_left, x_right, 1e-13);
      const double p0 = root.root;
      if (std::abs(h0(p0)) <= 1e-10)
        throw DegenerateSystemError(
            "balance point at x = " + std::to_string(p0) +
            " is tangential (g vanishes there); exit is not generic");
      const double residual =
          num::integrate_adaptive(h0, from_x, p0, kQuadTol).value;
      return ExitSolve{from_x, p0, residual, root.bracket_lo, root.bracket_hi, true};
    }
    x_left = x_right;
    phi_left = phi_right;
  }
  std::ostringstream msg;
  msg << "cumulative integral from x = " << from_x
      << " never balances inside the domain (minimum " << phi_min << ")";
  throw ExitNotFound(phi_min, msg.str());
}

}  // namespace detail

ExitSolve theoretical_exit(const SlowFastSystem& sys, double x0) {
  sys.require_inside(x0, 0.0);
  if (!(sys.g(x0, 0.0) < 0.0)) {
    std::ostringstream msg;
    msg << "entry condition violated: g(" << x0 << ", 0) = " << sys.g(x0, 0.0)
        << " is not negative";
    throw PreconditionError(msg.str());
  }
  return detail::leftmost_balance(sys, x0);
}

Trajectory return_trajectory(const SlowFastSystem& sys, double x0, double z0, double eps,
                             const Tolerances& tol) {
  sys.require_inside(x0, z0);
  if (!(eps > 0.0)) throw PreconditionError("numerical_return: eps must be > 0");
  if (!(z0 > 0.0)) throw PreconditionError("numerical_return: z0 must be > 0");

  const DomainBox& box = sys.domain();

  Field field = [&sys, eps](double, std::span<const double> y, std::span<double> dydt) {
    const double z = y[1];
    const double zm = sys.fast_exponent() == 1 ? z : z * z;
    dydt[0] = eps * sys.f(y[0], z);
    dydt[1] = sys.g(y[0], z) * zm;
  };

  EventSpec event;
  event.surface = [z0](std::span<const double> y) { return y[1] - z0; };
  event.direction = Direction::rising;
  event.skip_initial = true;
  event.count = 1;

  StepObserver guard = [&box](double t, std::span<const double> y) {
    if (y[0] > box.x_max)
      throw EscapeError("x_max", t, "trajectory left the domain through x = x_max");
    if (y[0] < box.x_min)
      throw EscapeError("x_min", t, "trajectory left the domain through x = x_min");
    if (y[1] > box.z_max)
      throw EscapeError("z_max", t, "trajectory left the domain through z = z_max");
  };

  // Slow drift covers the box in time ~ (x_max - x_min) / (eps f); budget
  // generously, escapes and the step cap terminate earlier.
  double f_floor = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 64; ++i)
    f_floor = std::min(f_floor, sys.f(box.x_min + (box.x_max - box.x_min) * i / 64.0, 0.0));
  const double t_max = 8.0 * (box.x_max - box.x_min) / (eps * f_floor);

  const std::array<double, 2> y0{x0, z0};
  return integrate(field, y0, 0.0, t_max, tol, event, guard);
}

ReturnSample numerical_return(const SlowFastSystem& sys, double x0, double z0, double eps,
                              const Tolerances& tol) {
  const auto started = std::chrono::steady_clock::now();
  const Trajectory traj = return_trajectory(sys, x0, z0, eps, tol);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
  return ReturnSample{x0,
                      z0,
                      eps,
                      traj.event->state[0],
                      traj.steps_accepted,
                      elapsed.count()};
}

ConvergenceStudy convergence_study(const SlowFastSystem& sys, double x0, double z0,
                                   std::span<const double> eps_ladder,
                                   const Tolerances& tol) {
  for (std::size_t i = 0; i < eps_ladder.size(); ++i) {
    if (!(eps_ladder[i] > 0.0))
      throw PreconditionError("convergence_study: ladder values must be positive");
    if (i > 0 && !(eps_ladder[i] < eps_ladder[i - 1]))
      throw PreconditionError("convergence_study: ladder must be strictly decreasing");
  }
  ConvergenceStudy study;
  if (eps_ladder.empty()) {
    study.p0 = std::numeric_limits<double>::quiet_NaN();
    return study;
  }
  study.p0 = theoretical_exit(sys, x0).p0;
  for (double eps : eps_ladder) {
    try {
      const ReturnSample sample = numerical_return(sys, x0, z0, eps, tol);
      study.rows.push_back({eps, sample.p_eps, study.p0, sample.p_eps - study.p0});
    } catch (const EscapeError&) {
      study.escaped.push_back(eps);  // escape is data, not failure
    }
  }
  return study;
}

double exit_derivative(const SlowFastSystem& sys, double x0) {
  const ExitSolve exit = theoretical_exit(sys, x0);
  return sys.h(x0, 0.0) / sys.h(exit.p0, 0.0);
}

}  // namespace slowfast
