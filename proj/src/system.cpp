#include "slowfast/system.hpp"

#include <cmath>
#include <sstream>

#include "slowfast/errors.hpp"
#include "slowfast/numerics.hpp"

namespace slowfast {

SlowFastSystem::SlowFastSystem(std::string name, ScalarField f, ScalarField g,
                               int fast_exponent, std::map<std::string, double> params,
                               DomainBox domain)
    : name_(std::move(name)),
      f_(std::move(f)),
      g_(std::move(g)),
      m_(fast_exponent),
      params_(std::move(params)),
      domain_(domain) {
  if (m_ != 1 && m_ != 2)
    throw PreconditionError("fast exponent must be 1 or 2, got " + std::to_string(m_));
  if (!(domain_.x_min < domain_.x_max) || !(domain_.z_max > 0.0))
    throw PreconditionError("domain box is empty");
  // Sign certificate for f on the critical segment, sampled.
  constexpr int kGrid = 257;
  for (int i = 0; i < kGrid; ++i) {
    const double x = domain_.x_min + (domain_.x_max - domain_.x_min) * i / (kGrid - 1);
    const double fx = f_(x, 0.0);
    if (!std::isfinite(fx) || fx <= 0.0) {
      std::ostringstream msg;
      msg << "f(x,0) must be positive on the domain; f(" << x << ",0) = " << fx;
      throw PreconditionError(msg.str());
    }
  }
}

void SlowFastSystem::require_inside(double x, double z) const {
  if (x < domain_.x_min || x > domain_.x_max) {
    std::ostringstream msg;
    msg << "coordinate x = " << x << " outside [" << domain_.x_min << ", "
        << domain_.x_max << "] for system " << name_;
    throw DomainError("x", x, msg.str());
  }
  if (z < 0.0 || z > domain_.z_max) {
    std::ostringstream msg;
    msg << "coordinate z = " << z << " outside [0, " << domain_.z_max
        << "] for system " << name_;
    throw DomainError("z", z, msg.str());
  }
}

Deriv2 rhs(const SlowFastSystem& sys, double x, double z, double eps) {
  if (eps < 0.0) throw PreconditionError("rhs: eps must be >= 0");
  sys.require_inside(x, z);
  const double zm = sys.fast_exponent() == 1 ? z : z * z;
  return {eps * sys.f(x, z), sys.g(x, z) * zm};
}

DelayConditionReport check_conditions(const SlowFastSystem& sys, double x_entry,
                                      double x_exit, int grid_n) {
  if (!(x_entry < x_exit))
    throw PreconditionError("check_conditions: x_entry must be < x_exit");
  sys.require_inside(x_entry, 0.0);
  sys.require_inside(x_exit, 0.0);
  if (grid_n < 2) throw PreconditionError("check_conditions: grid_n must be >= 2");

  auto g0 = [&sys](double x) { return sys.g(x, 0.0); };

  DelayConditionReport report;
  report.entry_ok = g0(x_entry) < 0.0;
  report.exit_ok = g0(x_exit) > 0.0;

  std::vector<double> grid(grid_n);
  std::vector<double> values(grid_n);
  for (int i = 0; i < grid_n; ++i) {
    grid[i] = x_entry + (x_exit - x_entry) * i / (grid_n - 1);
    values[i] = g0(grid[i]);
  }
  for (int i = 0; i + 1 < grid_n; ++i) {
    if (values[i] == 0.0 && values[i + 1] == 0.0)
      throw DegenerateSystemError("g(.,0) vanishes identically on a grid subinterval near x = " +
                                  std::to_string(grid[i]));
  }

  int changes_minus_to_plus = 0;
  int changes_plus_to_minus = 0;
  for (int i = 0; i + 1 < grid_n; ++i) {
    double a = values[i], b = values[i + 1];
    if (a == 0.0) {
      // grid point exactly on a root; skip, the neighbour pair records it
      continue;
    }
    if (b == 0.0) {
      report.sign_changes.push_back(grid[i + 1]);
      if (i + 2 < grid_n) {
        if (a < 0.0 && values[i + 2] > 0.0) ++changes_minus_to_plus;
        if (a > 0.0 && values[i + 2] < 0.0) ++changes_plus_to_minus;
      }
      continue;
    }
    if ((a > 0.0) != (b > 0.0)) {
      double lo = grid[i], hi = grid[i + 1];
      while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        const double fm = g0(mid);
        if (fm == 0.0) { lo = hi = mid; break; }
        if ((fm > 0.0) == (b > 0.0)) hi = mid; else lo = mid;
      }
      report.sign_changes.push_back(0.5 * (lo + hi));
      if (a < 0.0) ++changes_minus_to_plus; else ++changes_plus_to_minus;
    }
  }
  report.classical = report.entry_ok && report.exit_ok &&
                     report.sign_changes.size() == 1 &&
                     changes_minus_to_plus == 1 && changes_plus_to_minus == 0;
  return report;
}

double flat_exp(double z) {
  // exp(-1/z) underflows for z < 1/745; return 0 there and for the z <= 0
  // flat extension.
  if (z <= 0.0 || z < 1.0 / 745.0) return 0.0;
  return std::exp(-1.0 / z);
}

namespace {

void reject_unknown_params(const std::string& name,
                           const std::map<std::string, double>& given,
                           const std::vector<std::string>& allowed) {
  for (const auto& [key, value] : given) {
    bool ok = false;
    for (const auto& a : allowed)
      if (key == a) { ok = true; break; }
    if (!ok)
      throw ConfigError("system '" + name + "' does not accept parameter '" + key + "'");
  }
}

double param_or(const std::map<std::string, double>& params, const std::string& key,
                double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

}  // namespace

SlowFastSystem builtin(const std::string& name,
                       const std::map<std::string, double>& params) {
  if (name == "example5") {
    reject_unknown_params(name, params, {"alpha"});
    const double alpha = param_or(params, "alpha", 0.0);
    return SlowFastSystem(
        name, [](double, double) { return 1.0; },
        [alpha](double x, double z) { return x + alpha * z; }, 2,
        {{"alpha", alpha}}, DomainBox{-2.0, 2.0, 2.5});
  }
  if (name == "symmetric_quadratic") {
    reject_unknown_params(name, params, {});
    return SlowFastSystem(
        name, [](double, double) { return 1.0; },
        [](double x, double) { return x; }, 2, {}, DomainBox{-1.5, 1.5, 0.25});
  }
  if (name == "linear_case") {
    reject_unknown_params(name, params, {});
    return SlowFastSystem(
        name, [](double, double) { return 1.0; },
        [](double x, double) { return x; }, 1, {}, DomainBox{-1.5, 1.5, 0.25});
  }
  if (name == "flat_perturbed") {
    reject_unknown_params(name, params, {"rho"});
    const double rho = param_or(params, "rho", 1.0);
    return SlowFastSystem(
        name, [](double, double) { return 1.0; },
        [rho](double x, double z) { return x + rho * flat_exp(z); }, 2,
        {{"rho", rho}}, DomainBox{-1.5, 1.5, 0.25});
  }
  if (name == "multi_turning") {
    reject_unknown_params(name, params, {});
    return SlowFastSystem(
        name, [](double, double) { return 1.0; },
        [](double x, double) { return (x + 0.8) * (x - 0.2) * (x - 0.9); }, 2, {},
        DomainBox{-1.5, 1.5, 0.25});
  }
  throw UnknownSystemError("unknown system '" + name + "'");
}

std::vector<std::string> builtin_names() {
  return {"example5", "symmetric_quadratic", "linear_case", "flat_perturbed",
          "multi_turning"};
}

}  // namespace slowfast
