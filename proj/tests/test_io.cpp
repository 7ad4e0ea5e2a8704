#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "ringlab/errors.hpp"
#include "ringlab/integrate.hpp"
#include "ringlab/io.hpp"

using namespace ringlab;
namespace fs = std::filesystem;

TEST_SUITE_BEGIN("io");

TEST_CASE("shortest roundtrip formatting") {
  CHECK(io::format_double(1.0) == "1");
  CHECK(io::format_double(0.5) == "0.5");
  CHECK(io::format_double(0.0) == "0");
  CHECK(io::format_double(-2.25) == "-2.25");
  const double v = 0.1 + 0.2;
  CHECK(std::stod(io::format_double(v)) == v);
  const double tiny = 3.0776835371752527;
  CHECK(std::stod(io::format_double(tiny)) == tiny);
  CHECK(std::stod(io::format_full(tiny)) == tiny);
}

TEST_CASE("atomic write and read back") {
  const fs::path dir = fs::temp_directory_path() /
                       ("ringlab_io_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  const fs::path file = dir / "nested" / "out.txt";
  io::write_file_atomic(file.string(), "payload\n");
  CHECK(io::read_file(file.string()) == "payload\n");

  io::write_file_atomic(file.string(), "rewritten");
  CHECK(io::read_file(file.string()) == "rewritten");

  // no temp leftovers next to the file
  int entries = 0;
  for (const auto& e : fs::directory_iterator(file.parent_path())) {
    (void)e;
    ++entries;
  }
  CHECK(entries == 1);
  fs::remove_all(dir);

  CHECK_THROWS_AS(io::read_file((dir / "missing.txt").string()),
                  ringlab::Error);
}

TEST_CASE("trajectory csv layout") {
  ode::Trajectory traj;
  traj.dim = 4;  // two nodes
  std::vector<double> row = {0.25, -1.0, 0.5, 2.0};
  traj.push(0.0, row);
  row = {0.3, -0.9, 0.55, 1.9};
  traj.push(0.1, row);
  traj.final_time = 0.1;
  traj.final_state = row;
  traj.meta["sigma"] = "0.75";
  traj.meta["topology"] = "ring";

  const std::string csv = io::trajectory_csv(traj);
  CHECK(csv.find("# sigma=0.75\n") != std::string::npos);
  CHECK(csv.find("# topology=ring\n") != std::string::npos);
  CHECK(csv.find("t,z1,z2,y1,y2\n") != std::string::npos);
  // full precision values, interleaved layout unpacked per component
  CHECK(csv.find("0.25") != std::string::npos);
  CHECK(csv.find("-0.9") != std::string::npos);

  ode::Trajectory odd;
  odd.dim = 3;
  std::vector<double> r3 = {1.0, 2.0, 3.0};
  odd.push(0.0, r3);
  CHECK_THROWS_AS(io::trajectory_csv(odd), ringlab::DomainError);
}

TEST_SUITE_END();
