#pragma once

#include <map>
#include <string>
#include <vector>

#include "slowfast/integrate.hpp"
#include "slowfast/system.hpp"

namespace slowfast {

/// Declarative description of a run; everything the CLI does is derived from
/// one of these, so identical configs give identical output bytes.
struct RunConfig {
  std::string system_name = "symmetric_quadratic";
  std::map<std::string, double> params;
  double x0 = -1.0;
  double z0 = 0.1;
  double eps = 1e-3;
  std::vector<double> eps_ladder;  // descending; empty means single-eps run
  std::vector<double> e1_values{0.2};
  double alpha = 1e-3;
  double x_exit = 1.0;
  int grid_n = 1024;
  int degree = 2;
  std::string mode = "singular";  // blowup: singular | pipeline | polar
  Tolerances tol;
  std::string out;  // output path; empty = stdout

  bool operator==(const RunConfig& other) const;

  SlowFastSystem make_system() const;
  void validate() const;  // range checks shared by every subcommand
};

/// JSON round trip.  Unknown keys are rejected.
RunConfig config_from_json(const std::string& text);
std::string config_to_json(const RunConfig& config);

/// System description as emitted in reports:
/// {"name":..., "params":{...}, "domain":{"x_min":..., "x_max":..., "z_max":...}}.
std::string system_to_json(const SlowFastSystem& sys);

/// Parses "lo:hi:n" or "lo:hi:nlog" into a descending ladder (log-spaced with
/// the "log" suffix, linear otherwise).
std::vector<double> parse_ladder(const std::string& text);

}  // namespace slowfast
