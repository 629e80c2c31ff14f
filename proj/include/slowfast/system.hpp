#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace slowfast {

/// Closed box [x_min, x_max] x [0, z_max].
struct DomainBox {
  double x_min;
  double x_max;
  double z_max;
  bool contains(double x, double z) const {
    return x >= x_min && x <= x_max && z >= 0.0 && z <= z_max;
  }
};

using ScalarField = std::function<double(double, double)>;

/// Planar slow-fast system  x' = eps f(x,z),  z' = g(x,z) z^m,  m in {1,2}.
/// Immutable after construction; evaluation is pure, so instances may be
/// shared freely across threads.
class SlowFastSystem {
public:
  SlowFastSystem(std::string name, ScalarField f, ScalarField g, int fast_exponent,
                 std::map<std::string, double> params, DomainBox domain);

  double f(double x, double z) const { return f_(x, z); }
  double g(double x, double z) const { return g_(x, z); }
  /// g/f; callers must ensure f > 0 (validated on the domain at construction
  /// for catalog systems).
  double h(double x, double z) const { return g_(x, z) / f_(x, z); }
  int fast_exponent() const { return m_; }
  const std::string& name() const { return name_; }
  const std::map<std::string, double>& params() const { return params_; }
  const DomainBox& domain() const { return domain_; }

  bool inside(double x, double z) const { return domain_.contains(x, z); }
  /// Throws DomainError naming the offending coordinate.
  void require_inside(double x, double z) const;

private:
  std::string name_;
  ScalarField f_;
  ScalarField g_;
  int m_;
  std::map<std::string, double> params_;
  DomainBox domain_;
};

struct Deriv2 {
  double dx;
  double dz;
};

/// Vector field of the full system: (eps f(x,z), g(x,z) z^m).
/// z = 0 gives dz = 0 exactly, keeping the axis invariant bit-for-bit.
Deriv2 rhs(const SlowFastSystem& sys, double x, double z, double eps);

struct DelayConditionReport {
  bool entry_ok;                    // g(x_entry, 0) < 0
  bool exit_ok;                     // g(x_exit, 0) > 0
  std::vector<double> sign_changes; // zeros of g(.,0) on [x_entry, x_exit]
  bool classical;                   // single sign change, - to +
};

/// Sampling-based check of the entry/exit sign conditions on [x_entry, x_exit].
/// Zeros of g(.,0) are bracketed on a grid_n-point grid and refined by
/// bisection to |dx| <= 1e-12.  This is a practical guard, not a proof.
DelayConditionReport check_conditions(const SlowFastSystem& sys, double x_entry,
                                      double x_exit, int grid_n = 1024);

/// e^{-1/z} for z > 0, extended by 0 at z <= 0 (underflow-aware: arguments
/// whose exponent would underflow are mapped to 0 outright).
double flat_exp(double z);

/// Catalog constructor.  Known names: example5, symmetric_quadratic,
/// linear_case, flat_perturbed, multi_turning.
SlowFastSystem builtin(const std::string& name,
                       const std::map<std::string, double>& params = {});

std::vector<std::string> builtin_names();

}  // namespace slowfast
