#include "slowfast/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "slowfast/errors.hpp"

namespace slowfast::num {

RootResult find_root(const std::function<double(double)>& f, double a, double b,
                     double xtol, int max_iterations) {
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return {a, 0.0, a, a, 0};
  if (fb == 0.0) return {b, 0.0, b, b, 0};
  if ((fa > 0.0) == (fb > 0.0))
    throw PreconditionError("find_root: root not bracketed");

  double c = a, fc = fa;
  double d = b - a, e = d;
  const double eps = std::numeric_limits<double>::epsilon();
  for (int it = 1; it <= max_iterations; ++it) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      e = d = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol1 = 2.0 * eps * std::abs(b) + 0.5 * xtol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0)
      return {b, fb, std::min(b, c), std::max(b, c), it};
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      const double min1 = 3.0 * xm * q - std::abs(tol1 * q);
      const double min2 = std::abs(e * q);
      if (2.0 * p < std::min(min1, min2)) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol1 ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = f(b);
  }
  throw Error("find_root: too many iterations");
}

namespace {

// Gauss-Kronrod 7/15 nodes and weights (positive half, QUADPACK dqk15).
constexpr double kXgk[8] = {
    0.9914553711208126392069, 0.9491079123427585245262,
    0.8648644233597690727897, 0.7415311855993944398639,
    0.5860872354676911302941, 0.4058451513773971669066,
    0.2077849550078984676007, 0.0};
constexpr double kWgk[8] = {
    0.0229353220105292249637, 0.0630920926299785532907,
    0.1047900103222501838399, 0.1406532597155259187452,
    0.1690047266392679028266, 0.1903505780647854099133,
    0.2044329400752988924142, 0.2094821410847278280130};
constexpr double kWg[4] = {
    0.1294849661688696932706, 0.2797053914892766679015,
    0.3818300505051189449504, 0.4179591836734693877551};

struct PanelEstimate {
  double value;
  double error;
};

PanelEstimate kronrod15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double result_gauss = kWg[3] * fc;
  double result_kronrod = kWgk[7] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    result_kronrod += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) result_gauss += kWg[j / 2] * (f1 + f2);
  }
  result_kronrod *= half;
  result_gauss *= half;
  return {result_kronrod, std::abs(result_kronrod - result_gauss)};
}

struct Interval {
  double a, b, value, error;
  bool operator<(const Interval& o) const { return error < o.error; }
};

}  // namespace

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double abs_tol, int max_intervals) {
  if (a == b) return {0.0, 0.0, 0};
  int evals = 15;
  PanelEstimate first = kronrod15(f, a, b);
  std::priority_queue<Interval> heap;
  heap.push({a, b, first.value, first.error});
  double total_error = first.error;
  int n = 1;
  while (total_error > abs_tol && n < max_intervals) {
    Interval worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid == worst.a || mid == worst.b) {  // interval at roundoff limit
      worst.error = 0.0;
      heap.push(worst);
      total_error = 0.0;
      for (auto copy = heap; !copy.empty(); copy.pop()) total_error += copy.top().error;
      if (total_error > abs_tol) break;
      continue;
    }
    PanelEstimate left = kronrod15(f, worst.a, mid);
    PanelEstimate right = kronrod15(f, mid, worst.b);
    evals += 30;
    total_error += left.error + right.error - worst.error;
    heap.push({worst.a, mid, left.value, left.error});
    heap.push({mid, worst.b, right.value, right.error});
    n += 1;
  }
  Kahan sum;
  double err = 0.0;
  while (!heap.empty()) {
    sum.add(heap.top().value);
    err += heap.top().error;
    heap.pop();
  }
  return {sum.value(), err, evals};
}

double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  if (panels < 1) throw PreconditionError("simpson: panels must be >= 1");
  const double h = (b - a) / panels;
  Kahan sum;
  double f_left = f(a);
  for (int i = 0; i < panels; ++i) {
    const double x_right = a + (i + 1) * h;
    const double x_mid = a + (i + 0.5) * h;
    const double f_right = f(x_right);
    sum.add(h / 6.0 * (f_left + 4.0 * f(x_mid) + f_right));
    f_left = f_right;
  }
  return sum.value();
}

std::vector<double> log_ladder(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo)) throw PreconditionError("log_ladder: need 0 < lo < hi");
  if (n < 2) throw PreconditionError("log_ladder: need n >= 2");
  std::vector<double> out(n);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < n; ++i)
    out[i] = std::exp(lhi + (llo - lhi) * i / (n - 1));
  out.front() = hi;
  out.back() = lo;
  return out;
}

LstsqResult lstsq_svd(const std::vector<std::vector<double>>& columns,
                      const std::vector<double>& y) {
  const int ncols = static_cast<int>(columns.size());
  const int nrows = static_cast<int>(y.size());
  if (ncols == 0 || nrows < ncols)
    throw FitError("lstsq_svd: system is underdetermined");
  for (const auto& col : columns)
    if (static_cast<int>(col.size()) != nrows)
      throw FitError("lstsq_svd: column length mismatch");

  // One-sided Jacobi: orthogonalize the columns of U (a copy of A),
  // accumulating the rotations in V.  Then A = U_hat * diag(sigma) * V^T.
  std::vector<std::vector<double>> u = columns;
  std::vector<std::vector<double>> v(ncols, std::vector<double>(ncols, 0.0));
  for (int j = 0; j < ncols; ++j) v[j][j] = 1.0;

  const double tol = 1e-15;
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < ncols - 1; ++p) {
      for (int q = p + 1; q < ncols; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (int i = 0; i < nrows; ++i) {
          alpha += u[p][i] * u[p][i];
          beta += u[q][i] * u[q][i];
          gamma += u[p][i] * u[q][i];
        }
        if (std::abs(gamma) <= tol * std::sqrt(alpha * beta) || gamma == 0.0) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (int i = 0; i < nrows; ++i) {
          const double up = u[p][i];
          u[p][i] = c * up - s * u[q][i];
          u[q][i] = s * up + c * u[q][i];
        }
        for (int i = 0; i < ncols; ++i) {
          const double vp = v[p][i];
          v[p][i] = c * vp - s * v[q][i];
          v[q][i] = s * vp + c * v[q][i];
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sigma(ncols);
  double sigma_max = 0.0;
  for (int j = 0; j < ncols; ++j) {
    double norm2 = 0.0;
    for (int i = 0; i < nrows; ++i) norm2 += u[j][i] * u[j][i];
    sigma[j] = std::sqrt(norm2);
    sigma_max = std::max(sigma_max, sigma[j]);
  }
  double sigma_min = sigma_max;
  for (int j = 0; j < ncols; ++j) sigma_min = std::min(sigma_min, sigma[j]);

  // x = V diag(1/sigma) U_hat^T y; u[j] = sigma_j * (j-th column of U_hat), so the
  // j-th term is (u_j . y) / sigma_j^2.  Directions below the cutoff are dropped,
  // giving the minimum-norm solution for (numerically) rank-deficient systems.
  const double cutoff = sigma_max * 1e-18;
  std::vector<double> uty(ncols, 0.0);
  for (int j = 0; j < ncols; ++j) {
    double dot = 0.0;
    for (int i = 0; i < nrows; ++i) dot += u[j][i] * y[i];
    uty[j] = sigma[j] > cutoff ? dot / (sigma[j] * sigma[j]) : 0.0;
  }
  std::vector<double> coeffs(ncols, 0.0);
  for (int i = 0; i < ncols; ++i) {
    double acc = 0.0;
    for (int j = 0; j < ncols; ++j) acc += v[j][i] * uty[j];
    coeffs[i] = acc;
  }

  double rss = 0.0;
  for (int i = 0; i < nrows; ++i) {
    double pred = 0.0;
    for (int j = 0; j < ncols; ++j) pred += columns[j][i] * coeffs[j];
    const double r = y[i] - pred;
    rss += r * r;
  }
  const double condition =
      sigma_min > 0.0 ? sigma_max / sigma_min : std::numeric_limits<double>::infinity();
  return {std::move(coeffs), std::sqrt(rss), condition};
}

}  // namespace slowfast::num
