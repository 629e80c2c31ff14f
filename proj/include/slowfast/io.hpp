#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "slowfast/integrate.hpp"

namespace slowfast {

/// Shortest-faithful decimal form of a double: 17 significant digits.
std::string fmt17(double value);

/// CSV writer with a fixed header; values are printed with fmt17, '.' decimal,
/// comma separated, one row per call.
class CsvWriter {
public:
  CsvWriter(std::ostream& out, std::span<const std::string> header);
  void row(std::span<const double> values);

private:
  std::ostream& out_;
  std::size_t columns_;
};

/// Full-precision trajectory dump with header t,<names...>.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj,
                          std::span<const std::string> state_names,
                          double t_offset = 0.0);

}  // namespace slowfast
