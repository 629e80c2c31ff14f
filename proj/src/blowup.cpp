#include "slowfast/blowup.hpp"

#include <cmath>
#include <sstream>

#include "slowfast/entryexit.hpp"
#include "slowfast/errors.hpp"
#include "slowfast/numerics.hpp"

namespace slowfast {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_valid_affine(const AffineState& s) {
  if (s.z < 0.0 || s.E < 0.0)
    throw PreconditionError("affine state needs z >= 0 and E >= 0");
}

void require_valid_polar(const PolarState& s) {
  if (s.r < 0.0) throw PreconditionError("polar state needs r >= 0");
  if (s.theta < 0.0 || s.theta > kPi / 2.0)
    throw PreconditionError("polar state needs theta in [0, pi/2]");
}

void require_f_positive(const SlowFastSystem& sys, double x, double z) {
  const double f = sys.f(x, z);
  if (!(f > 0.0)) {
    std::ostringstream msg;
    msg << "f(" << x << ", " << z << ") = " << f << " must be positive";
    throw PreconditionError(msg.str());
  }
}

}  // namespace

Original3 affine_to_original(const AffineState& s) {
  require_valid_affine(s);
  return {s.x, s.z, s.z * s.E};
}

Original3 polar_to_original(const PolarState& s) {
  require_valid_polar(s);
  return {s.x, s.r * std::cos(s.theta), s.r * std::sin(s.theta)};
}

AffineState polar_to_affine(const PolarState& s) {
  require_valid_polar(s);
  if (s.theta >= kPi / 2.0)
    throw ChartBoundaryError("affine chart requires theta < pi/2");
  return {s.x, s.r * std::cos(s.theta), std::tan(s.theta)};
}

PolarState affine_to_polar(const AffineState& s) {
  require_valid_affine(s);
  const double theta = std::atan(s.E);
  return {s.x, theta, s.z * std::sqrt(1.0 + s.E * s.E)};
}

AffineDeriv affine_rhs(const SlowFastSystem& sys, const AffineState& s) {
  require_valid_affine(s);
  require_f_positive(sys, s.x, s.z);
  const double h = sys.h(s.x, s.z);
  return {s.E, h * s.z, -h * s.E};
}

PolarDeriv polar_rhs(const SlowFastSystem& sys, const PolarState& s) {
  require_valid_polar(s);
  const double ct = std::cos(s.theta);
  const double st = std::sin(s.theta);
  const double z = s.r * ct;
  require_f_positive(sys, s.x, z);
  const double h = sys.h(s.x, z);
  return {st, s.r * ct * ct * ct * h, -ct * ct * st * h};
}

namespace {

// First zero of h(.,0) strictly right of `from_x`, or x_max when none.
double next_turning_point(const SlowFastSystem& sys, double from_x) {
  const DomainBox& box = sys.domain();
  auto h0 = [&sys](double x) { return sys.h(x, 0.0); };
  constexpr int kGrid = 4096;
  const double width = (box.x_max - from_x) / kGrid;
  double a = from_x;
  double ha = h0(a);
  for (int i = 1; i <= kGrid; ++i) {
    const double b = from_x + i * width;
    const double hb = h0(b);
    if (ha != 0.0 && ((ha > 0.0) != (hb > 0.0) || hb == 0.0)) {
      double lo = a, hi = b;
      while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        const double hm = h0(mid);
        if (hm == 0.0) return mid;
        if ((hm > 0.0) == (ha > 0.0)) lo = mid; else hi = mid;
      }
      return 0.5 * (lo + hi);
    }
    a = b;
    ha = hb;
  }
  return box.x_max;
}

// Solves |integral_{start}^{x} h(.,0)| = target for x in (start, limit),
// where the integrand keeps the sign `sign` on the stretch.
Transition accumulate_to(const SlowFastSystem& sys, double start, double target,
                         double sign, const char* what) {
  auto h0 = [&sys](double x) { return sys.h(x, 0.0); };
  const double limit = next_turning_point(sys, start);
  auto accumulated = [&](double x) {
    return sign * num::integrate_adaptive(h0, start, x, 1e-13).value;
  };
  const double attainable = accumulated(limit);
  const double slack = 1e-9;
  if (target > attainable + slack) {
    std::ostringstream msg;
    msg << what << ": requested section value " << target
        << " exceeds the attainable " << attainable << " before x = " << limit;
    throw ChartOverflowError(attainable, msg.str());
  }
  if (target >= attainable - slack) {
    // Saturates exactly at the turning point; flag the chart-validity limit.
    return {limit, true};
  }
  num::RootResult root =
      num::find_root([&](double x) { return accumulated(x) - target; }, start, limit, 1e-13);
  return {root.root, std::abs(h0(root.root)) <= 1e-10};
}

}  // namespace

Transition transition_x1(const SlowFastSystem& sys, double x0, double E1) {
  sys.require_inside(x0, 0.0);
  if (!(E1 > 0.0)) throw PreconditionError("transition_x1: E1 must be > 0");
  if (!(sys.g(x0, 0.0) < 0.0))
    throw PreconditionError("transition_x1: needs attraction (g < 0) at x0");
  return accumulate_to(sys, x0, E1, -1.0, "transition_x1");
}

Transition transition_x2(const SlowFastSystem& sys, double x1) {
  sys.require_inside(x1, 0.0);
  const ExitSolve balance = detail::leftmost_balance(sys, x1);
  return {balance.p0, false};
}

Transition transition_x3(const SlowFastSystem& sys, double x2, double E1) {
  sys.require_inside(x2, 0.0);
  if (!(E1 > 0.0)) throw PreconditionError("transition_x3: E1 must be > 0");
  if (!(sys.g(x2, 0.0) > 0.0))
    throw PreconditionError("transition_x3: needs repulsion (g > 0) at x2");
  return accumulate_to(sys, x2, E1, 1.0, "transition_x3");
}

SingularOrbit singular_composition(const SlowFastSystem& sys, double x0, double E1) {
  const Transition t1 = transition_x1(sys, x0, E1);
  const Transition t2 = transition_x2(sys, t1.x);
  const Transition t3 = transition_x3(sys, t2.x, E1);
  SingularOrbit orbit;
  orbit.x0 = x0;
  orbit.x1 = t1.x;
  orbit.x2 = t2.x;
  orbit.x3 = t3.x;
  orbit.E1 = E1;
  orbit.pieces = {OrbitPiece{"unstable_rise", x0, t1.x},
                  OrbitPiece{"over_top", t1.x, t2.x},
                  OrbitPiece{"stable_descent", t2.x, t3.x}};
  return orbit;
}

PipelineResult affine_pipeline(const SlowFastSystem& sys, double x0, double z0,
                               double eps, double E1, const Tolerances& tol) {
  sys.require_inside(x0, z0);
  if (!(eps > 0.0)) throw PreconditionError("affine_pipeline: eps must be > 0");
  if (!(E1 > 0.0)) throw PreconditionError("affine_pipeline: E1 must be > 0");
  const double E0 = eps / z0;
  if (!(E0 < E1))
    throw PreconditionError("affine_pipeline: needs eps/z0 < E1 so the orbit starts "
                            "below the corner section");

  Field field = [&sys](double, std::span<const double> y, std::span<double> dydt) {
    const double h = sys.h(y[0], y[1]);
    dydt[0] = y[2];
    dydt[1] = h * y[1];
    dydt[2] = -h * y[2];
  };

  double max_cons = 0.0;
  StepObserver cons_guard = [eps, &max_cons](double, std::span<const double> y) {
    const double rel = std::abs(y[1] * y[2] - eps) / eps;
    max_cons = std::max(max_cons, rel);
    if (rel > 1e-6)
      throw ConservationError("affine_pipeline: z*E drifted from eps by relative " +
                              std::to_string(rel));
  };

  constexpr double kLegSpan = 1e5;

  // Leg 1: rise to the corner section E = E1.
  EventSpec up;
  up.surface = [E1](std::span<const double> y) { return y[2] - E1; };
  up.direction = Direction::rising;
  const std::array<double, 3> start{x0, z0, E0};
  PipelineResult result;
  result.legs[0] = integrate(field, start, 0.0, kLegSpan, tol, up, cons_guard);
  const std::vector<double> s1 = result.legs[0].event->state;

  // Leg 2: across the top, back to E = E1 with E decreasing.
  EventSpec down;
  down.surface = up.surface;
  down.direction = Direction::falling;
  down.skip_initial = true;  // starts exactly on the section
  result.legs[1] = integrate(field, s1, 0.0, kLegSpan, tol, down, cons_guard);
  const std::vector<double> s2 = result.legs[1].event->state;

  // Leg 3: descend to the return section z = z0.
  EventSpec home;
  home.surface = [z0](std::span<const double> y) { return y[1] - z0; };
  home.direction = Direction::rising;
  result.legs[2] = integrate(field, s2, 0.0, kLegSpan, tol, home, cons_guard);
  const std::vector<double> s3 = result.legs[2].event->state;

  result.x_exit = s3[0];
  result.z1 = s1[1];
  result.e3 = s3[2];
  result.z1_expected = (E0 / E1) * z0;
  result.e3_expected = E0;
  result.max_conservation_err = max_cons;
  return result;
}

}  // namespace slowfast
