// End-to-end verification suite.  Each numbered check prints one PASS/FAIL
// line with the measured quantities and its tolerance; the process exit code
// is the number of failed checks.

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "slowfast/asymptotics.hpp"
#include "slowfast/blowup.hpp"
#include "slowfast/entryexit.hpp"
#include "slowfast/example5.hpp"
#include "slowfast/integrate.hpp"
#include "slowfast/numerics.hpp"
#include "slowfast/system.hpp"

using namespace slowfast;

namespace {

int failures = 0;

void report(int number, const std::string& title, bool pass, const std::string& detail) {
  std::printf("[%d] %-34s %s  %s\n", number, title.c_str(), pass ? "PASS" : "FAIL",
              detail.c_str());
  if (!pass) ++failures;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// 1. The alpha = 0 family returns exactly to -x0.
void criterion_exact_return() {
  const SlowFastSystem sys = builtin("example5");
  double worst = 0.0;
  for (double x0 : {-1.0, -0.7, -0.5})
    for (double eps : {1e-2, 1e-3, 1e-4}) {
      const double p = numerical_return(sys, x0, 1.0, eps).p_eps;
      worst = std::max(worst, std::abs(p - (-x0)));
    }
  report(1, "exact return map (alpha = 0)", worst <= 1e-6,
         "max |p_eps + x0| = " + fmt(worst) + " (tol 1e-6)");
}

// 2. Entry-exit limit on the symmetric profile.
void criterion_entry_exit_limit() {
  const SlowFastSystem sys = builtin("symmetric_quadratic");
  const ExitSolve exit = theoretical_exit(sys, -1.0);
  const bool p0_exact = std::abs(exit.p0 - 1.0) <= 1e-12 &&
                        std::abs(exit.integral_residual) <= 1e-10;

  // Purely relative error control: an absolute floor gets injected at the
  // near-axis minimum of z and amplified ~ 1/eps into the measured exit.
  Tolerances deep;
  deep.abs = 1e-300;
  const std::vector<double> ladder{1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
  std::vector<double> errors;
  for (double eps : ladder)
    errors.push_back(
        std::abs(numerical_return(sys, -1.0, 0.1, eps, deep).p_eps - exit.p0));
  bool decreasing = true;
  for (std::size_t i = 1; i < errors.size(); ++i)
    if (!(errors[i] < errors[i - 1])) decreasing = false;
  const bool small_at_end = errors.back() <= 5e-3;

  std::string detail = "errors =";
  for (double e : errors) detail += " " + fmt(e);
  detail += p0_exact ? "; p0 = 1 (residual ok)" : "; p0 check failed";
  if (!decreasing)
    detail += "; not strictly decreasing: for z-independent g the return map "
              "equals p0 exactly at every eps, so the measured errors sit at "
              "the double-precision floor with no convergence tail to resolve";
  report(2, "entry-exit limit", p0_exact && decreasing && small_at_end, detail);
}

// 3. First-order perturbation coefficient against the closed form.
void criterion_first_order_coefficient() {
  double worst = 0.0;
  for (double eps : {1e-2, 5e-3, 2e-3, 1e-3})
    worst = std::max(worst, c_via_finite_difference(-1.0, eps, 1e-3).agreement);
  report(3, "first-order coefficient", worst <= 1e-3,
         "max rel err = " + fmt(worst) + " (tol 1e-3)");
}

// 4. The eps log eps term: present where expected, absent where flatness holds.
void criterion_log_term() {
  const auto ladder = default_eps_ladder();
  std::vector<double> y;
  for (double e : ladder) y.push_back(c_closed(-1.0, e));
  const AsymptoticFit fit = fit_scale(ladder, y, 2);
  double a01 = 0.0;
  for (std::size_t j = 0; j < fit.basis.size(); ++j)
    if (fit.basis[j] == std::pair<int, int>{0, 1}) a01 = fit.coeffs[j];
  const bool coeff_ok = std::abs(a01 - 2.0) / 2.0 <= 0.05;

  const bool perturbed_has_log =
      detect_log_term(builtin("example5", {{"alpha", 0.1}}), -1.0, 1.0, ladder).has_log;
  const bool flat_has_log =
      detect_log_term(builtin("flat_perturbed"), -1.0, 0.1, ladder).has_log;

  report(4, "logarithmic term",
         coeff_ok && perturbed_has_log && !flat_has_log,
         "fitted a01 = " + fmt(a01) + " (target 2 within 5%); perturbed has_log = " +
             (perturbed_has_log ? "true" : "false") +
             "; flat has_log = " + (flat_has_log ? "true" : "false"));
}

// 5. Singular composition is independent of the section parameter.
void criterion_composition() {
  const SlowFastSystem sys = builtin("symmetric_quadratic");
  const double p0 = theoretical_exit(sys, -1.0).p0;
  std::vector<double> x3;
  for (double e1 : {0.1, 0.2, 0.3}) x3.push_back(singular_composition(sys, -1.0, e1).x3);
  double spread = 0.0, gap = 0.0;
  for (double a : x3)
    for (double b : x3) spread = std::max(spread, std::abs(a - b));
  for (double a : x3) gap = std::max(gap, std::abs(a - p0));
  report(5, "blow-up composition", spread <= 1e-8 && gap <= 1e-9,
         "pairwise spread = " + fmt(spread) + " (tol 1e-8); |x3 - p0| = " + fmt(gap) +
             " (tol 1e-9)");
}

// 6. Conservation and corner relations along every pipeline run used above.
void criterion_chart_invariants() {
  double worst_cons = 0.0, worst_z1 = 0.0, worst_e3 = 0.0;
  auto absorb = [&](const PipelineResult& run) {
    worst_cons = std::max(worst_cons, run.max_conservation_err);
    worst_z1 =
        std::max(worst_z1, std::abs(run.z1 - run.z1_expected) / run.z1_expected);
    worst_e3 =
        std::max(worst_e3, std::abs(run.e3 - run.e3_expected) / run.e3_expected);
  };
  const SlowFastSystem sys = builtin("symmetric_quadratic");
  for (double eps : {1e-2, 3e-3, 1e-3, 3e-4, 1e-4})
    absorb(affine_pipeline(sys, -1.0, 0.1, eps, 0.2));
  for (double e1 : {0.1, 0.2, 0.3})
    absorb(affine_pipeline(sys, -1.0, 0.1, 1e-3, e1));
  report(6, "chart invariants",
         worst_cons <= 1e-6 && worst_z1 <= 1e-8 && worst_e3 <= 1e-8,
         "max |zE-eps|/eps = " + fmt(worst_cons) + " (tol 1e-6); z1 rel = " +
             fmt(worst_z1) + ", E3 rel = " + fmt(worst_e3) + " (tol 1e-8)");
}

// 7. The kappa substitution reduces the linear fast term to the quadratic one.
void criterion_kappa_reduction() {
  const SlowFastSystem base = builtin("linear_case");
  const KappaSystem pair = kappa_transform(base);
  const double w0 = kappa_inverse(0.1);
  // The m = 1 flow contracts z to z0 e^{-1/(2 eps)} (1e-218 at eps = 1e-3);
  // direct runs therefore use a purely relative error control, and the ladder
  // stops at 1e-3, below which the true z_min is not representable in doubles.
  Tolerances deep;
  deep.abs = 1e-300;
  const double agree =
      std::abs(numerical_return(pair.transformed, -1.0, w0, 1e-3).p_eps -
               numerical_return(base, -1.0, 0.1, 1e-3, deep).p_eps);
  double worst = 0.0;
  for (double eps : {1e-2, 3e-3, 1e-3}) {
    worst = std::max(
        worst, std::abs(numerical_return(base, -1.0, 0.1, eps, deep).p_eps - 1.0));
    worst = std::max(
        worst, std::abs(numerical_return(pair.transformed, -1.0, w0, eps).p_eps - 1.0));
  }
  report(7, "kappa reduction", agree <= 1e-5 && worst <= 1e-5,
         "|p_kappa - p_direct| = " + fmt(agree) +
             " (tol 1e-5); max |p - p0| along ladder = " + fmt(worst));
}

// 8. Relaxed conditions: exits land on the leftmost balance point.
void criterion_multi_turning() {
  const SlowFastSystem sys = builtin("multi_turning");
  const ExitSolve exit = theoretical_exit(sys, -1.0);
  const double scanned = oracles::dense_scan_balance(
      [&sys](double x) { return sys.h(x, 0.0); }, -1.0, sys.domain().x_max, 1'000'000);
  const bool oracle_ok = std::abs(exit.p0 - scanned) <= 1e-8;

  Tolerances deep;
  deep.abs = 1e-300;  // see criterion 2
  std::vector<double> errors;
  for (double eps : {1e-2, 3e-3, 1e-3, 3e-4, 1e-4})
    errors.push_back(
        std::abs(numerical_return(sys, -1.0, 0.1, eps, deep).p_eps - exit.p0));
  bool decreasing = true;
  for (std::size_t i = 1; i < errors.size(); ++i)
    if (!(errors[i] < errors[i - 1])) decreasing = false;

  std::string detail = "|p0 - scan| = " + fmt(std::abs(exit.p0 - scanned)) +
                       " (tol 1e-8); errors =";
  for (double e : errors) detail += " " + fmt(e);
  if (!decreasing)
    detail += "; not strictly decreasing: z-independent g makes the exit exact at "
              "every eps, so the errors are at the double-precision floor";
  report(8, "multi-turning points", oracle_ok && decreasing, detail);
}

// 9. Property suites from the module contracts, bundled.
void criterion_property_suites() {
  int failed = 0;
  std::string notes;

  // (a) self-consistency: halving tolerances moves the measured return less
  // than the coarser tolerance
  {
    const SlowFastSystem sys = builtin("example5", {{"alpha", 0.1}});
    Tolerances coarse;
    coarse.rel = 1e-8;
    coarse.abs = 1e-10;
    Tolerances fine = coarse;
    fine.rel /= 2.0;
    fine.abs /= 2.0;
    const double pa = numerical_return(sys, -1.0, 1.0, 1e-2, coarse).p_eps;
    const double pb = numerical_return(sys, -1.0, 1.0, 1e-2, fine).p_eps;
    if (!(std::abs(pa - pb) < coarse.rel * (1.0 + std::abs(pa)))) {
      ++failed;
      notes += " self-consistency";
    }
  }

  // (b) forward-backward reversibility within 10x tolerance
  {
    const SlowFastSystem sys = builtin("symmetric_quadratic");
    const double eps = 1e-2;
    Field field = [&sys, eps](double, std::span<const double> y, std::span<double> d) {
      d[0] = eps * sys.f(y[0], y[1]);
      d[1] = sys.g(y[0], y[1]) * y[1] * y[1];
    };
    EventSpec event;
    event.surface = [](std::span<const double> y) { return y[1] - 0.1; };
    event.direction = Direction::rising;
    event.skip_initial = true;
    Tolerances tol;
    const std::array<double, 2> y0{-1.0, 0.1};
    Trajectory fwd = integrate(field, y0, 0.0, 1e4, tol, event);
    Trajectory bwd = integrate(field, fwd.event->state, fwd.event->t, 0.0, tol);
    const std::vector<double> back = bwd.back_state();
    if (!(std::abs(back[0] + 1.0) <= 10.0 * tol.rel * 2.0 &&
          std::abs(back[1] - 0.1) <= 10.0 * tol.rel * 1.1)) {
      ++failed;
      notes += " reversibility";
    }
  }

  // (c) fit exactness on synthetic basis data
  {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> coeff(-3.0, 3.0);
    const auto ladder = num::log_ladder(1e-4, 1e-2, 12);
    const auto basis = scale_basis(2);
    bool ok = true;
    for (int trial = 0; trial < 10 && ok; ++trial) {
      std::vector<double> y;
      std::vector<double> truth;
      for (std::size_t j = 0; j < basis.size(); ++j) truth.push_back(coeff(rng));
      double norm = 0.0;
      for (double e : ladder) {
        const double v = e * std::log(e);
        double acc = 0.0;
        for (std::size_t j = 0; j < basis.size(); ++j)
          acc += truth[j] * std::pow(e, basis[j].first) * std::pow(v, basis[j].second);
        y.push_back(acc);
        norm += acc * acc;
      }
      ok = fit_scale(ladder, y, 2).residual_norm <= 1e-9 * std::sqrt(norm);
    }
    if (!ok) {
      ++failed;
      notes += " fit-exactness";
    }
  }

  // (d) exit_derivative against a centered difference
  {
    const SlowFastSystem sys = builtin("multi_turning");
    const double analytic = exit_derivative(sys, -1.0);
    const double fd = oracles::central_difference(
        [&sys](double x0) { return theoretical_exit(sys, x0).p0; }, -1.0, 1e-6);
    if (!(std::abs(analytic - fd) / std::abs(fd) <= 1e-6)) {
      ++failed;
      notes += " exit-derivative";
    }
  }

  report(9, "property suites", failed == 0,
         failed == 0 ? "self-consistency, reversibility, fit exactness, "
                       "exit derivative: 4/4"
                     : "failed:" + notes);
}

}  // namespace

int main() {
  criterion_exact_return();
  criterion_entry_exit_limit();
  criterion_first_order_coefficient();
  criterion_log_term();
  criterion_composition();
  criterion_chart_invariants();
  criterion_kappa_reduction();
  criterion_multi_turning();
  criterion_property_suites();
  if (failures == 0)
    std::printf("all criteria passed\n");
  else
    std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
