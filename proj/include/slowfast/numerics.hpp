#pragma once

#include <functional>
#include <vector>

namespace slowfast::num {

// Kahan-compensated accumulator.
struct Kahan {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    double y = v - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

struct RootResult {
  double root;
  double f_root;
  double bracket_lo;
  double bracket_hi;
  int iterations;
};

// Safeguarded secant/inverse-quadratic/bisection hybrid (Brent).
// Requires f(a) and f(b) of opposite sign (or one of them zero).
RootResult find_root(const std::function<double(double)>& f, double a, double b,
                     double xtol, int max_iterations = 200);

struct QuadResult {
  double value;
  double error_estimate;
  int evaluations;
};

// Globally adaptive Gauss-Kronrod 7/15 quadrature to absolute tolerance.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double abs_tol = 1e-12, int max_intervals = 4000);

// Composite Simpson on n equal panels; used as an independent cross-check.
double simpson(const std::function<double(double)>& f, double a, double b, int panels);

// n log-spaced values from hi down to lo (descending, as convergence ladders expect).
std::vector<double> log_ladder(double lo, double hi, int n);

struct LstsqResult {
  std::vector<double> coeffs;
  double residual_norm;    // ||A c - y||_2
  double condition;        // sigma_max / sigma_min of the matrix as given
};

// Least squares via one-sided Jacobi SVD; columns[j] is the j-th column of A.
LstsqResult lstsq_svd(const std::vector<std::vector<double>>& columns,
                      const std::vector<double>& y);

}  // namespace slowfast::num
