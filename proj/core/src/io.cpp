#include "ringlab/io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

#include "ringlab/errors.hpp"

namespace fs = std::filesystem;

namespace ringlab::io {

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc())
    throw DomainError("format_double: value does not fit the buffer");
  return std::string(buf, ptr);
}

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError("cannot open for writing: " + tmp.string());
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw DomainError("short write: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec)
    throw DomainError("rename failed for " + target.string() + ": " +
                      ec.message());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void ensure_directory(const std::string& path) {
  std::error_code ec;
  fs::create_directories(path, ec);
  if (ec)
    throw DomainError("cannot create directory " + path + ": " + ec.message());
}

std::string trajectory_csv(const ode::Trajectory& traj) {
  if (traj.dim % 2 != 0)
    throw DomainError("trajectory_csv expects the interleaved z,y layout");
  const int n = traj.dim / 2;
  std::ostringstream out;
  for (const auto& [key, value] : traj.meta)
    out << "# " << key << "=" << value << "\n";
  out << "t";
  for (int j = 1; j <= n; ++j) out << ",z" << j;
  for (int j = 1; j <= n; ++j) out << ",y" << j;
  out << "\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    out << format_full(traj.times[i]);
    std::span<const double> x = traj.state(i);
    for (int j = 0; j < n; ++j) out << "," << format_full(x[2 * j]);
    for (int j = 0; j < n; ++j) out << "," << format_full(x[2 * j + 1]);
    out << "\n";
  }
  return out.str();
}

}  // namespace ringlab::io
