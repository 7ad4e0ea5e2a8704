#pragma once

#include <string>

#include "ringlab/integrate.hpp"

namespace ringlab::io {

// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

// Fixed 17 significant digits, for trajectory dumps.
std::string format_full(double v);

// Writes through a temp file in the same directory followed by a rename,
// so a concurrent reader never sees a partial file.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

void ensure_directory(const std::string& path);

// Rows t,z1..zn,y1..yn at full precision for an interleaved network
// trajectory, preceded by one "# key=value" line per meta entry.
std::string trajectory_csv(const ode::Trajectory& traj);

}  // namespace ringlab::io
