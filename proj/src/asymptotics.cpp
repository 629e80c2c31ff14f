#include "slowfast/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "slowfast/entryexit.hpp"
#include "slowfast/errors.hpp"
#include "slowfast/numerics.hpp"

namespace slowfast {

std::vector<std::pair<int, int>> scale_basis(int basis_degree) {
  std::vector<std::pair<int, int>> basis;
  for (int total = 0; total <= basis_degree; ++total)
    for (int l = total; l >= 0; --l)  // more log factors dominate at equal degree
      basis.emplace_back(total - l, l);
  return basis;
}

namespace {

AsymptoticFit fit_with_basis(std::span<const double> eps, std::span<const double> y,
                             const std::vector<std::pair<int, int>>& basis) {
  const int nrows = static_cast<int>(eps.size());
  std::vector<std::vector<double>> columns(basis.size(), std::vector<double>(nrows));
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const auto [k, l] = basis[j];
    for (int i = 0; i < nrows; ++i) {
      const double v = eps[i] * std::log(eps[i]);
      columns[j][i] = std::pow(eps[i], k) * std::pow(v, l);
    }
  }

  // Equilibrate columns to unit norm; the raw scale basis spans many orders
  // of magnitude and would swamp the small singular values.
  std::vector<double> scale(basis.size(), 1.0);
  for (std::size_t j = 0; j < basis.size(); ++j) {
    double norm = 0.0;
    for (double v : columns[j]) norm += v * v;
    norm = std::sqrt(norm);
    if (norm > 0.0) {
      scale[j] = norm;
      for (double& v : columns[j]) v /= norm;
    }
  }

  std::vector<double> rhs(y.begin(), y.end());
  num::LstsqResult solved = num::lstsq_svd(columns, rhs);

  AsymptoticFit fit;
  fit.basis = basis;
  fit.coeffs.resize(basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j)
    fit.coeffs[j] = solved.coeffs[j] / scale[j];
  fit.residual_norm = solved.residual_norm;
  fit.condition_estimate = solved.condition;
  fit.ill_conditioned = solved.condition > 1e12;
  return fit;
}

}  // namespace

AsymptoticFit fit_scale(std::span<const double> eps, std::span<const double> y,
                        int basis_degree) {
  if (basis_degree < 0) throw PreconditionError("fit_scale: basis_degree must be >= 0");
  if (eps.size() != y.size()) throw PreconditionError("fit_scale: size mismatch");
  const auto basis = scale_basis(basis_degree);
  if (eps.size() < basis.size() + 2)
    throw FitError("fit_scale: need at least " + std::to_string(basis.size() + 2) +
                   " samples for a degree-" + std::to_string(basis_degree) + " basis");
  std::set<double> distinct;
  for (double e : eps) {
    if (!(e > 0.0) || !(e < std::exp(-1.0)))
      throw PreconditionError("fit_scale: eps values must lie in (0, 1/e)");
    if (!distinct.insert(e).second)
      throw PreconditionError("fit_scale: eps values must be distinct");
  }
  return fit_with_basis(eps, y, basis);
}

LogTermReport detect_log_term(const SlowFastSystem& sys, double x0, double z0,
                              std::span<const double> eps_ladder,
                              const Tolerances& tol) {
  if (eps_ladder.size() < 8)
    throw PreconditionError("detect_log_term: need a ladder of at least 8 eps values");
  double lo = eps_ladder[0], hi = eps_ladder[0];
  for (double e : eps_ladder) {
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  if (!(hi / lo >= std::pow(10.0, 1.5)))
    throw PreconditionError("detect_log_term: ladder must span at least 1.5 decades");

  const double p0 = theoretical_exit(sys, x0).p0;
  std::vector<double> eps(eps_ladder.begin(), eps_ladder.end());
  std::vector<double> y(eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i)
    y[i] = numerical_return(sys, x0, z0, eps[i], tol).p_eps - p0;

  LogTermReport report;
  report.fit = fit_scale(eps, y, 2);
  report.eps = eps;
  report.y = y;

  double a01 = 0.0, a10 = 0.0;
  for (std::size_t j = 0; j < report.fit.basis.size(); ++j) {
    if (report.fit.basis[j] == std::pair<int, int>{0, 1}) a01 = report.fit.coeffs[j];
    if (report.fit.basis[j] == std::pair<int, int>{1, 0}) a10 = report.fit.coeffs[j];
  }
  report.a01 = a01;

  // Model comparison: refit without the log columns.  When the samples are
  // integrator noise or a smooth eps-series, the log-free basis does (almost)
  // as well and the fitted a01 is misattribution, not evidence.
  report.log_free_residual =
      fit_with_basis(eps, y, {{0, 0}, {1, 0}, {2, 0}}).residual_norm;
  const bool log_explains_signal =
      report.log_free_residual > 10.0 * report.fit.residual_norm;

  // Coefficient floors: absolute, and relative to the leading analytic term.
  // Engineering thresholds, reported alongside the verdict.
  report.threshold = std::max(1e-6, 1e-4 * std::abs(a10));
  report.has_log = log_explains_signal && std::abs(a01) > report.threshold;
  return report;
}

double kappa(double w) { return flat_exp(w); }

double kappa_inverse(double z) {
  if (!(z > 0.0) || !(z < 1.0))
    throw PreconditionError("kappa_inverse: z must lie in (0, 1)");
  return -1.0 / std::log(z);
}

KappaSystem kappa_transform(const SlowFastSystem& base) {
  if (base.fast_exponent() != 1)
    throw PreconditionError("kappa_transform: base system must have fast exponent 1");
  ScalarField f = [base](double x, double w) { return base.f(x, kappa(w)); };
  ScalarField g = [base](double x, double w) { return base.g(x, kappa(w)); };
  // Cap w so that kappa(w_max) stays inside the base fast-variable range,
  // never beyond w = 0.9 (the substitution has no slow-fast meaning there).
  const double z_cap = base.domain().z_max;
  const double w_max = z_cap < 1.0 ? std::min(0.9, kappa_inverse(z_cap)) : 0.9;
  const DomainBox wdomain{base.domain().x_min, base.domain().x_max, w_max};
  SlowFastSystem transformed(base.name() + "_kappa", std::move(f), std::move(g), 2,
                             base.params(), wdomain);
  return KappaSystem{base, std::move(transformed)};
}

std::vector<double> default_eps_ladder() { return num::log_ladder(1e-4, 1e-2, 12); }

}  // namespace slowfast
