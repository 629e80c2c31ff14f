#include "slowfast/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "slowfast/errors.hpp"
#include "slowfast/numerics.hpp"

namespace slowfast {

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// 5th-order minus embedded 4th-order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense-output coefficients.
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

constexpr double kGuardBand = 1e-8;
constexpr double kSurfaceTol = 1e-12;
constexpr int kScanSamples = 8;

using Arr = std::array<double, kMaxDim>;

// The quartic interpolant in the step-local coordinate theta in [0, 1].
// Events are refined in theta: at large |t| the absolute time grid is too
// coarse (ulp(t) * |surface slope| can exceed the surface tolerance).
Arr dense_eval_theta(const Trajectory::Segment& seg, int dim, double theta) {
  const double theta1 = 1.0 - theta;
  Arr out{};
  for (int i = 0; i < dim; ++i) {
    const auto& rc = seg.rcont;
    out[i] = rc[0][i] +
             theta * (rc[1][i] + theta1 * (rc[2][i] + theta * (rc[3][i] + theta1 * rc[4][i])));
  }
  return out;
}

Arr dense_eval(const Trajectory::Segment& seg, int dim, double time) {
  return dense_eval_theta(seg, dim, (time - seg.t0) / seg.h);
}

struct EventTracker {
  const EventSpec& spec;
  bool armed;
  int seen = 0;

  explicit EventTracker(const EventSpec& s) : spec(s), armed(!s.skip_initial) {}

  bool direction_matches(double s_early, double s_late) const {
    switch (spec.direction) {
      case Direction::rising: return s_early < 0.0 && s_late >= 0.0;
      case Direction::falling: return s_early > 0.0 && s_late <= 0.0;
      case Direction::any:
        return (s_early < 0.0 && s_late >= 0.0) || (s_early > 0.0 && s_late <= 0.0);
    }
    return false;
  }
};

}  // namespace

std::vector<double> Trajectory::front_state() const {
  return std::vector<double>(y.front().begin(), y.front().begin() + dim);
}

std::vector<double> Trajectory::back_state() const {
  return std::vector<double>(y.back().begin(), y.back().begin() + dim);
}

std::vector<double> Trajectory::state_at(double time) const {
  if (segments.empty()) {
    if (time == t.front()) return front_state();
    throw PreconditionError("state_at: trajectory has no dense segments");
  }
  const bool forward = segments.front().h > 0.0;
  const double lo = forward ? t_begin() : t_end();
  const double hi = forward ? t_end() : t_begin();
  const double slack = 1e-12 * (1.0 + std::abs(hi) + std::abs(lo));
  if (time < lo - slack || time > hi + slack)
    throw PreconditionError("state_at: time outside the integrated span");
  // Binary search for the segment containing `time`.
  std::size_t a = 0, b = segments.size() - 1;
  while (a < b) {
    const std::size_t mid = (a + b) / 2;
    const double t_end_mid = segments[mid].t0 + segments[mid].h;
    const bool before = forward ? time <= t_end_mid : time >= t_end_mid;
    if (before) b = mid; else a = mid + 1;
  }
  const Arr vals = dense_eval(segments[a], dim, time);
  return std::vector<double>(vals.begin(), vals.begin() + dim);
}

Trajectory integrate(const Field& field, std::span<const double> y0, double t0, double t1,
                     const Tolerances& tol, const std::optional<EventSpec>& event,
                     const StepObserver& observer) {
  const int n = static_cast<int>(y0.size());
  if (n < 1 || n > kMaxDim)
    throw PreconditionError("integrate: state dimension must be between 1 and " +
                            std::to_string(kMaxDim));
  if (!(tol.rel > 0.0) || !(tol.abs > 0.0))
    throw PreconditionError("integrate: tolerances must be positive");
  if (!(tol.h_min < tol.h_max))
    throw PreconditionError("integrate: h_min must be below h_max");
  if (tol.max_steps < 1)
    throw PreconditionError("integrate: max_steps must be >= 1");
  if (!std::isfinite(t0) || !std::isfinite(t1) || t0 == t1)
    throw PreconditionError("integrate: need a finite, nonempty time span");

  const double posneg = t1 > t0 ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);

  Arr y{}, ynew{}, ytmp{};
  Arr k1{}, k2{}, k3{}, k4{}, k5{}, k6{}, k7{};
  std::copy(y0.begin(), y0.end(), y.begin());

  Trajectory traj;
  traj.dim = n;
  traj.t.push_back(t0);
  traj.y.push_back(y);

  auto eval = [&](double t, const Arr& state, Arr& out) {
    field(t, std::span<const double>(state.data(), n), std::span<double>(out.data(), n));
    traj.evaluations += 1;
  };

  eval(t0, y, k1);

  // Initial step size: standard two-stage estimate.
  double h;
  {
    double dnf = 0.0, dny = 0.0;
    for (int i = 0; i < n; ++i) {
      const double sk = tol.abs + tol.rel * std::abs(y[i]);
      dnf += (k1[i] / sk) * (k1[i] / sk);
      dny += (y[i] / sk) * (y[i] / sk);
    }
    double h0 = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(dny / dnf);
    h0 = std::min(h0, span);
    for (int i = 0; i < n; ++i) ytmp[i] = y[i] + posneg * h0 * k1[i];
    eval(t0 + posneg * h0, ytmp, k2);
    double der2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double sk = tol.abs + tol.rel * std::abs(y[i]);
      der2 += ((k2[i] - k1[i]) / sk) * ((k2[i] - k1[i]) / sk);
    }
    der2 = std::sqrt(der2) / h0;
    const double der12 = std::max(der2, std::sqrt(dnf));
    const double h1 = der12 <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                                     : std::pow(0.01 / der12, 0.2);
    h = posneg * std::min({100.0 * h0, h1, span, tol.h_max});
  }

  num::Kahan time_acc;
  time_acc.add(t0);
  double t = t0;

  std::optional<EventTracker> tracker;
  if (event) {
    if (event->count < 1) throw PreconditionError("integrate: event count must be >= 1");
    if (!event->surface) throw PreconditionError("integrate: event has no surface");
    tracker.emplace(*event);
  }
  auto surface_of = [&](const Arr& state) {
    return event->surface(std::span<const double>(state.data(), n));
  };
  if (tracker && !tracker->armed) {
    if (std::abs(surface_of(y)) > kGuardBand) tracker->armed = true;
  }

  bool last = false;
  bool rejected = false;
  double facold = 1e-4;
  const double uround = std::numeric_limits<double>::epsilon();

  while (true) {
    if (traj.steps_accepted + traj.steps_rejected >= tol.max_steps) {
      std::ostringstream msg;
      msg << "integrate: exceeded " << tol.max_steps << " steps at t = " << t;
      throw MaxStepsExceeded(msg.str());
    }
    if ((t + 1.01 * h - t1) * posneg > 0.0) {
      h = t1 - t;
      last = true;
    } else {
      last = false;
    }
    const double h_floor = std::max(tol.h_min, 16.0 * uround * std::abs(t));
    if (std::abs(h) < h_floor && !last) {
      std::ostringstream msg;
      msg << "integrate: step size " << std::abs(h) << " fell below " << h_floor
          << " at t = " << t;
      throw StepUnderflow(msg.str());
    }

    // The six internal stages.
    for (int i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    eval(t + c2 * h, ytmp, k2);
    for (int i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    eval(t + c3 * h, ytmp, k3);
    for (int i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    eval(t + c4 * h, ytmp, k4);
    for (int i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    eval(t + c5 * h, ytmp, k5);
    for (int i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                            a65 * k5[i]);
    eval(t + h, ytmp, k6);
    for (int i = 0; i < n; ++i)
      ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    eval(t + h, ynew, k7);  // FSAL

    double err = 0.0;
    for (int i = 0; i < n; ++i) {
      const double sk = tol.abs + tol.rel * std::max(std::abs(y[i]), std::abs(ynew[i]));
      const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                             e6 * k6[i] + e7 * k7[i]);
      err += (ei / sk) * (ei / sk);
    }
    err = std::sqrt(err / n);

    const double fac11 = std::pow(std::max(err, 1e-32), 0.2);
    if (err <= 1.0) {
      // Accept.
      facold = std::max(err, 1e-4);
      traj.steps_accepted += 1;

      Trajectory::Segment seg;
      seg.t0 = t;
      seg.h = h;
      for (int i = 0; i < n; ++i) {
        const double ydiff = ynew[i] - y[i];
        const double bspl = h * k1[i] - ydiff;
        seg.rcont[0][i] = y[i];
        seg.rcont[1][i] = ydiff;
        seg.rcont[2][i] = bspl;
        seg.rcont[3][i] = ydiff - h * k7[i] - bspl;
        seg.rcont[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                               d6 * k6[i] + d7 * k7[i]);
      }

      time_acc.add(h);
      const double t_next = last ? t1 : time_acc.value();

      if (tracker) {
        // Scan the dense interpolant for surface crossings, honoring the
        // arming guard band and the requested crossing count.
        double s_prev = surface_of(y);
        double theta_prev = 0.0;
        bool armed_prev = tracker->armed;
        for (int j = 1; j <= kScanSamples; ++j) {
          const double theta = static_cast<double>(j) / kScanSamples;
          const Arr yj = j == kScanSamples ? ynew : dense_eval_theta(seg, n, theta);
          const double s_j = surface_of(yj);
          if (armed_prev && tracker->direction_matches(
                                posneg > 0 ? s_prev : s_j, posneg > 0 ? s_j : s_prev)) {
            tracker->seen += 1;
            if (tracker->seen == tracker->spec.count) {
              auto surf_at = [&](double th) {
                const Arr ys = dense_eval_theta(seg, n, th);
                return surface_of(ys);
              };
              double theta_evt = theta;
              if (s_j != 0.0)
                theta_evt =
                    num::find_root(surf_at, theta_prev, theta, 4.0 * uround).root;
              Arr ye = dense_eval_theta(seg, n, theta_evt);
              double s_e = surface_of(ye);
              if (std::abs(s_e) > kSurfaceTol) {
                // Polish by bisection against the sample with opposite sign.
                double lo = theta_evt, hi = (s_e > 0.0) == (s_j > 0.0) ? theta_prev : theta;
                for (int it = 0; it < 200 && std::abs(s_e) > kSurfaceTol; ++it) {
                  const double mid = 0.5 * (lo + hi);
                  if (mid == lo || mid == hi) break;
                  const Arr ym = dense_eval_theta(seg, n, mid);
                  const double sm = surface_of(ym);
                  if ((sm > 0.0) == (s_e > 0.0)) lo = mid; else hi = mid;
                  if (std::abs(sm) < std::abs(s_e)) { theta_evt = mid; ye = ym; s_e = sm; }
                }
                if (std::abs(s_e) > kSurfaceTol) {
                  std::ostringstream msg;
                  msg << "integrate: event refinement stalled with |surface| = "
                      << std::scientific << std::abs(s_e);
                  throw Error(msg.str());
                }
              }
              const double t_evt = seg.t0 + theta_evt * seg.h;
              traj.t.push_back(t_evt);
              Arr ystore{};
              std::copy(ye.begin(), ye.begin() + n, ystore.begin());
              traj.y.push_back(ystore);
              traj.segments.push_back(seg);
              traj.event = EventHit{t_evt,
                                    std::vector<double>(ye.begin(), ye.begin() + n), s_e};
              if (observer) observer(t_evt, std::span<const double>(ye.data(), n));
              return traj;
            }
          }
          if (!armed_prev && std::abs(s_j) > kGuardBand) tracker->armed = true;
          armed_prev = tracker->armed;
          s_prev = s_j;
          theta_prev = theta;
        }
      }

      t = t_next;
      traj.t.push_back(t);
      traj.y.push_back(ynew);
      traj.segments.push_back(seg);
      if (observer) observer(t, std::span<const double>(ynew.data(), n));

      y = ynew;
      k1 = k7;  // FSAL

      if (last) {
        if (tracker) {
          std::ostringstream msg;
          msg << "integrate: event not found in [" << t0 << ", " << t1 << "]";
          throw EventNotFound(msg.str());
        }
        return traj;
      }

      double fac = fac11 / std::pow(facold, 0.04);
      fac = std::max(0.1, std::min(10.0, 0.9 / fac));
      if (rejected) fac = std::min(1.0, fac);
      h *= fac;
      if (std::abs(h) > tol.h_max) h = posneg * tol.h_max;
      rejected = false;
    } else {
      // Reject and retry with a smaller step.
      traj.steps_rejected += 1;
      const double fac = std::max(0.1, 0.9 / fac11);
      h *= fac;
      rejected = true;
    }
  }
}

}  // namespace slowfast
