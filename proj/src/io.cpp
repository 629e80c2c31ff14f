#include "slowfast/io.hpp"

#include <cstdio>

#include "slowfast/errors.hpp"

namespace slowfast {

std::string fmt17(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& out, std::span<const std::string> header)
    : out_(out), columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i)
    out_ << (i ? "," : "") << header[i];
  out_ << "\n";
}

void CsvWriter::row(std::span<const double> values) {
  if (values.size() != columns_)
    throw PreconditionError("CsvWriter: row width does not match header");
  for (std::size_t i = 0; i < values.size(); ++i)
    out_ << (i ? "," : "") << fmt17(values[i]);
  out_ << "\n";
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj,
                          std::span<const std::string> state_names, double t_offset) {
  if (static_cast<int>(state_names.size()) != traj.dim)
    throw PreconditionError("write_trajectory_csv: need one name per state component");
  std::vector<std::string> header{"t"};
  header.insert(header.end(), state_names.begin(), state_names.end());
  CsvWriter csv(out, header);
  std::vector<double> row(1 + traj.dim);
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    row[0] = traj.t[i] + t_offset;
    for (int j = 0; j < traj.dim; ++j) row[1 + j] = traj.y[i][j];
    csv.row(row);
  }
}

}  // namespace slowfast
