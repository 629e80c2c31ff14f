#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace slowfast {

struct Tolerances {
  double rel = 1e-10;
  double abs = 1e-12;
  double h_min = 0.0;  // 0 means roundoff-limited
  double h_max = std::numeric_limits<double>::infinity();
  std::int64_t max_steps = 10'000'000;
};

enum class Direction { rising, falling, any };

/// Stop condition: zero crossing of a scalar surface function of the state.
struct EventSpec {
  std::function<double(std::span<const double>)> surface;
  Direction direction = Direction::any;
  /// When true, detection stays disarmed until |surface| > 1e-8 has been
  /// observed once; lets trajectories start exactly on the surface.
  bool skip_initial = false;
  int count = 1;  // stop at the count-th matching crossing
};

inline constexpr int kMaxDim = 4;

using Field =
    std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

/// Called after every accepted step; may throw to abort the integration.
using StepObserver = std::function<void(double t, std::span<const double> y)>;

struct EventHit {
  double t;
  std::vector<double> state;
  double surface_value;
};

/// Time-ordered nodes plus one quartic interpolant per accepted step.
struct Trajectory {
  int dim = 0;
  std::vector<double> t;
  std::vector<std::array<double, kMaxDim>> y;

  struct Segment {
    double t0;
    double h;
    std::array<std::array<double, kMaxDim>, 5> rcont;
  };
  std::vector<Segment> segments;

  std::optional<EventHit> event;

  std::int64_t steps_accepted = 0;
  std::int64_t steps_rejected = 0;
  std::int64_t evaluations = 0;

  double t_begin() const { return t.front(); }
  double t_end() const { return t.back(); }
  std::vector<double> front_state() const;
  std::vector<double> back_state() const;
  /// Dense evaluation; time must lie within [t_begin, t_end].
  std::vector<double> state_at(double time) const;
};

/// Adaptive embedded Runge-Kutta 5(4) (Dormand-Prince) with free 4th-order
/// dense output.  Integrates from t0 to t1 (either direction).  If an event
/// is given, stops at the located crossing, with |surface| <= 1e-12 there.
/// Throws MaxStepsExceeded, StepUnderflow or EventNotFound.
Trajectory integrate(const Field& field, std::span<const double> y0, double t0, double t1,
                     const Tolerances& tol = {},
                     const std::optional<EventSpec>& event = std::nullopt,
                     const StepObserver& observer = nullptr);

}  // namespace slowfast
