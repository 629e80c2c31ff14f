#pragma once

#include <span>
#include <utility>
#include <vector>

#include "slowfast/integrate.hpp"
#include "slowfast/system.hpp"

namespace slowfast {

/// Least-squares fit on the asymptotic scale {eps^k (eps log eps)^l}.
/// The basis is ordered by dominance: within each total degree k+l the
/// log-heavy terms come first, so consecutive ratios vanish as eps -> 0.
struct AsymptoticFit {
  std::vector<std::pair<int, int>> basis;  // (k, l) pairs
  std::vector<double> coeffs;
  double residual_norm;      // ||y - fit||_2
  double condition_estimate; // of the column-equilibrated design matrix
  bool ill_conditioned;      // condition_estimate > 1e12
};

/// Ordinary least squares for y ~ sum a_kl eps^k (eps log eps)^l over
/// k + l <= basis_degree, solved through a column-equilibrated SVD.
/// Requires at least basis size + 2 samples and eps values distinct in
/// (0, 1/e) so that eps log eps is monotone.
AsymptoticFit fit_scale(std::span<const double> eps, std::span<const double> y,
                        int basis_degree);

std::vector<std::pair<int, int>> scale_basis(int basis_degree);

struct LogTermReport {
  bool has_log;
  double a01;                // fitted coefficient of eps log eps
  double threshold;          // coefficient floor |a01| must clear
  double log_free_residual;  // residual of the best fit without log columns
  AsymptoticFit fit;
  std::vector<double> eps;  // ladder actually used
  std::vector<double> y;    // fitted samples p_eps - p0
};

/// Fits p_eps(x0) - p0(x0) on the degree-2 scale and decides whether a
/// log term is genuinely present.  Two gates must pass: the log-free basis
/// {1, eps, eps^2} must fit at least 10x worse than the full scale (so the
/// log columns explain signal a smooth expansion cannot), and |a01| must
/// clear max(1e-6, 1e-4 |a10|).  A fitted a01 alone is not evidence: fitting
/// integrator noise or a smooth series on the scale also produces a small
/// nonzero a01.  Needs a ladder of >= 8 values spanning >= 1.5 decades.
LogTermReport detect_log_term(const SlowFastSystem& sys, double x0, double z0,
                              std::span<const double> eps_ladder,
                              const Tolerances& tol = {});

/// kappa(w) = e^{-1/w} for w > 0, 0 at w <= 0.
double kappa(double w);
/// Inverse on (0,1): w = -1/log z.
double kappa_inverse(double z);

/// Reduction of a linear fast term (m = 1) to a quadratic one (m = 2) by the
/// substitution z = kappa(w); the transformed fields are flat in w at w = 0.
struct KappaSystem {
  SlowFastSystem base;
  SlowFastSystem transformed;
};

KappaSystem kappa_transform(const SlowFastSystem& base);

/// Default ladder for log-term detection: 12 log-spaced eps in [1e-4, 1e-2],
/// descending.
std::vector<double> default_eps_ladder();

}  // namespace slowfast
