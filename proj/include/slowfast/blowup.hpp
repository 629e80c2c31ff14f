#pragma once

#include <array>
#include <string>

#include "slowfast/integrate.hpp"
#include "slowfast/system.hpp"

namespace slowfast {

/// Chart coordinates on the blown-up cylinder.  The polar chart covers the
/// quarter cylinder theta in [0, pi/2]; the affine chart uses E = eps/z and
/// covers theta < pi/2.  All quantitative maps run in the affine chart; the
/// polar chart is kept for visualization and round-trip checks.
struct PolarState {
  double x;
  double theta;
  double r;
};

struct AffineState {
  double x;
  double z;
  double E;
};

struct Original3 {
  double x;
  double z;
  double eps;
};

/// Blow-down: (x, z, E) -> (x, z, zE).
Original3 affine_to_original(const AffineState& s);
/// Blow-down: (x, theta, r) -> (x, r cos theta, r sin theta).
Original3 polar_to_original(const PolarState& s);

/// E = tan theta, z = r cos theta.  Throws ChartBoundaryError at theta = pi/2.
AffineState polar_to_affine(const PolarState& s);
PolarState affine_to_polar(const AffineState& s);

struct AffineDeriv {
  double dx;
  double dz;
  double dE;
};

struct PolarDeriv {
  double dx;
  double dr;
  double dtheta;
};

/// Desingularized affine-chart field: (E, h z, -h E) with h = g/f at (x, z).
/// Exact zeros on the invariant planes z = 0 and E = 0.
AffineDeriv affine_rhs(const SlowFastSystem& sys, const AffineState& s);

/// Desingularized polar-chart field:
/// (sin theta, r cos^3 theta h, -cos^2 theta sin theta h), h at (x, r cos theta).
PolarDeriv polar_rhs(const SlowFastSystem& sys, const PolarState& s);

struct Transition {
  double x;
  bool at_chart_boundary;  // the solve landed where g(.,0) vanishes
};

/// Entry transition: x1 > x0 with  E1 = -integral_{x0}^{x1} h(x,0) dx.
/// Throws ChartOverflowError when E1 exceeds the attraction available before
/// the next turning point.
Transition transition_x1(const SlowFastSystem& sys, double x0, double E1);

/// Corner-to-corner transition: leftmost x2 > x1 with
/// integral_{x1}^{x2} h(x,0) dx = 0 and g(x2,0) > 0.
Transition transition_x2(const SlowFastSystem& sys, double x1);

/// Exit transition: x3 > x2 with  E1 = integral_{x2}^{x3} h(x,0) dx.
Transition transition_x3(const SlowFastSystem& sys, double x2, double E1);

struct OrbitPiece {
  std::string kind;  // "unstable_rise", "over_top", "stable_descent"
  double x_from;
  double x_to;
};

/// Three-piece limiting orbit on the cylinder realizing the entry-exit map;
/// its endpoint is independent of the section parameter E1.
struct SingularOrbit {
  double x0;
  double x1;
  double x2;
  double x3;
  double E1;
  std::array<OrbitPiece, 3> pieces;
};

SingularOrbit singular_composition(const SlowFastSystem& sys, double x0, double E1);

struct PipelineResult {
  double x_exit;
  double z1;                    // measured state entering the corner section
  double e3;                    // measured E back on the z = z0 section
  double z1_expected;           // (E0/E1) z0
  double e3_expected;           // E0
  double max_conservation_err;  // max |zE - eps| / eps over all nodes
  std::array<Trajectory, 3> legs;
};

/// Runs the eps > 0 flow through the affine chart in three legs: up to the
/// section E = E1, across it (next crossing with E decreasing), then down to
/// z = z0.  Checks z*E = eps conservation to 1e-6 relative along the way.
PipelineResult affine_pipeline(const SlowFastSystem& sys, double x0, double z0,
                               double eps, double E1, const Tolerances& tol = {});

}  // namespace slowfast
