#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <string>

#include "doctest.h"
#include "ringlab/errors.hpp"
#include "ringlab/io.hpp"
#include "ringlab/sweep.hpp"

using namespace ringlab;
using sweep::CellResult;
using sweep::Region;
using sweep::SweepConfig;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir(const char* tag) {
    path = fs::temp_directory_path() /
           (std::string("ringlab_test_") + tag + "_" +
            std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

SweepConfig tiny_chain_config() {
  SweepConfig cfg;
  cfg.topology = "chain";
  cfg.n_values = {2};
  cfg.sigma_values = {1.5};
  cfg.samples_per_cell = 2;
  cfg.t_final = 4000.0;
  cfg.checkpoint_interval = 1000.0;
  cfg.master_seed = 77;
  return cfg;
}

CellResult synthetic_cell(int n, int sigma_index, double sigma, int sync,
                          int wave_mode1, int wave_any, int none) {
  CellResult c;
  c.n = n;
  c.sigma_index = sigma_index;
  c.sigma = sigma;
  c.sync_count = sync;
  c.wave_mode1_count = wave_mode1;
  c.wave_any_count = wave_any;
  c.none_count = none;
  const int total = sync + wave_any + none;
  for (int k = 0; k < total; ++k) {
    sweep::SampleResult s;
    s.sample = k;
    s.outcome = k < sync ? detect::Outcome::Sync
                : k < sync + wave_any ? detect::Outcome::RotatingWave
                                      : detect::Outcome::None;
    c.samples.push_back(s);
  }
  return c;
}

}  // namespace

TEST_SUITE_BEGIN("sweep");

TEST_CASE("config roundtrip through json") {
  TempDir dir("config");
  SweepConfig cfg = tiny_chain_config();
  cfg.detect.phase_tol = 0.02;
  cfg.workers = 3;
  const std::string path = (dir.path / "cfg.json").string();
  sweep::save_config(cfg, path);
  SweepConfig back = sweep::load_config(path);
  CHECK(back.topology == cfg.topology);
  CHECK(back.n_values == cfg.n_values);
  CHECK(back.sigma_values == cfg.sigma_values);
  CHECK(back.samples_per_cell == cfg.samples_per_cell);
  CHECK(back.t_final == cfg.t_final);
  CHECK(back.master_seed == cfg.master_seed);
  CHECK(back.detect.phase_tol == cfg.detect.phase_tol);
  // workers is a machine detail: accepted from hand-written configs but
  // never saved, so a reloaded config falls back to auto.
  CHECK(back.workers == 0);
}

TEST_CASE("config rejects unknown keys and bad values") {
  TempDir dir("badcfg");
  const std::string path = (dir.path / "bad.json").string();

  io::write_file_atomic(path, R"({"topology":"ring","n_valuess":[3]})");
  CHECK_THROWS_AS(sweep::load_config(path), DomainError);

  io::write_file_atomic(path, R"({"topology":"moebius"})");
  CHECK_THROWS_AS(sweep::load_config(path), DomainError);

  io::write_file_atomic(path, R"({"sigma_values":[]})");
  CHECK_THROWS_AS(sweep::load_config(path), DomainError);

  io::write_file_atomic(path, R"({"t_final":-5})");
  CHECK_THROWS_AS(sweep::load_config(path), DomainError);

  io::write_file_atomic(path, R"({"topology":3})");
  CHECK_THROWS_AS(sweep::load_config(path), DomainError);

  io::write_file_atomic(path, "not json at all{");
  CHECK_THROWS_AS(sweep::load_config(path), DomainError);
}

TEST_CASE("strong chain coupling cell synchronizes deterministically") {
  SweepConfig cfg = tiny_chain_config();
  auto a = sweep::run_cell(cfg, 2, 0);
  auto b = sweep::run_cell(cfg, 2, 0);
  CHECK(a.sync_count == 2);
  CHECK(a.wave_any_count == 0);
  CHECK(a.none_count == 0);
  REQUIRE(a.samples.size() == 2);
  CHECK(a.samples[0].outcome == detect::Outcome::Sync);
  CHECK(b.sync_count == a.sync_count);
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(b.samples[i].checkpoint_time == a.samples[i].checkpoint_time);
    CHECK(b.samples[i].sync_error == a.samples[i].sync_error);
  }
}

TEST_CASE("grid resume skips finished cells and survives tampering") {
  TempDir dir("resume");
  SweepConfig cfg = tiny_chain_config();
  const std::string resume = dir.path.string();

  int observed = 0;
  auto grid1 = sweep::run_grid(cfg, resume,
                               [&](const CellResult&) { ++observed; });
  CHECK(observed == 1);
  REQUIRE(grid1.cells.size() == 1);
  CHECK(grid1.cells[0].sync_count == 2);

  // file exists now; a rerun must reload it (counts identical)
  auto grid2 = sweep::run_grid(cfg, resume);
  CHECK(grid2.cells[0].sync_count == grid1.cells[0].sync_count);
  CHECK(grid2.cells[0].samples.size() == grid1.cells[0].samples.size());

  // a corrupted cell file is recomputed, not trusted
  for (const auto& entry : fs::directory_iterator(dir.path))
    io::write_file_atomic(entry.path().string(), "{broken");
  auto grid3 = sweep::run_grid(cfg, resume);
  CHECK(grid3.cells[0].sync_count == 2);

  // a cell from a different seed is recomputed as well
  SweepConfig other = cfg;
  other.master_seed = 78;
  auto grid4 = sweep::run_grid(other, resume);
  CHECK(grid4.cells[0].sync_count == 2);
}

TEST_CASE("grid output is independent of worker count") {
  SweepConfig cfg = tiny_chain_config();
  cfg.n_values = {2, 3};
  cfg.workers = 1;
  auto serial = sweep::run_grid(cfg);
  cfg.workers = 2;
  auto threaded = sweep::run_grid(cfg);
  CHECK(sweep::grid_csv(serial) == sweep::grid_csv(threaded));
}

TEST_CASE("analytic threshold curve") {
  using std::numbers::pi;
  CHECK(sweep::analytic_sync_sigma("chain", 5) == 1.0);
  CHECK(sweep::analytic_sync_sigma("ring", 4) == doctest::Approx(1.0));
  CHECK(sweep::analytic_sync_sigma("ring", 3) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(sweep::analytic_sync_sigma("ring", 20) ==
        doctest::Approx(1.0 / (1.0 - std::cos(pi / 10.0))).epsilon(1e-9));
  CHECK(sweep::analytic_sync_sigma("ring", 20) ==
        doctest::Approx(20.4317).epsilon(1e-4));
  CHECK_THROWS_AS(sweep::analytic_sync_sigma("ring", 1), DomainError);
  CHECK_THROWS_AS(sweep::analytic_sync_sigma("grid", 4), DomainError);
}

TEST_CASE("region labeling covers every branch") {
  sweep::GridResult grid;
  grid.config.topology = "ring";
  grid.config.n_values = {3, 4};
  grid.config.sigma_values = {0.25, 1.0};
  grid.config.samples_per_cell = 2;

  // n=3: sigma_c = 2/3. 0.25 below, 1.0 above.
  grid.cells.push_back(synthetic_cell(3, 0, 0.25, 1, 1, 1, 0));  // mixed
  grid.cells.push_back(synthetic_cell(3, 1, 1.0, 2, 0, 0, 0));   // above, sync
  // n=4: sigma_c = 1.0 exactly; 1.0 is NOT above the curve.
  grid.cells.push_back(synthetic_cell(4, 0, 0.25, 0, 2, 2, 0));  // all wave
  grid.cells.push_back(synthetic_cell(4, 1, 1.0, 2, 0, 0, 0));   // sync on curve

  auto plain = sweep::label_regions(grid);
  REQUIRE(plain.size() == 4);
  CHECK(plain[0].region == Region::Coexistence);
  CHECK(plain[1].region == Region::Sync1);
  CHECK(plain[2].region == Region::WaveOnly);
  CHECK(plain[3].region == Region::Sync23Undetermined);

  auto probed = sweep::label_regions(
      grid, [](int, double sigma) { return sigma < 0.5; });
  CHECK(probed[3].region == Region::Sync2);
  auto probed2 = sweep::label_regions(grid, [](int, double) { return true; });
  CHECK(probed2[3].region == Region::Sync3);

  // undecided samples poison the cell; a wave above the curve is flagged
  sweep::GridResult odd;
  odd.config = grid.config;
  odd.cells.push_back(synthetic_cell(3, 0, 0.25, 1, 0, 0, 1));
  odd.cells.push_back(synthetic_cell(3, 1, 1.0, 1, 1, 1, 0));
  auto labels = sweep::label_regions(odd);
  CHECK(labels[0].region == Region::Unclassified);
  CHECK(labels[1].region == Region::Unclassified);
}

TEST_CASE("csv renderers embed the config and use the pinned headers") {
  SweepConfig cfg = tiny_chain_config();
  sweep::GridResult grid;
  grid.config = cfg;
  grid.cells.push_back(synthetic_cell(2, 0, 1.5, 2, 0, 0, 0));

  const std::string g = sweep::grid_csv(grid);
  CHECK(g.rfind("# config=", 0) == 0);
  CHECK(g.find("\nn,sigma,samples,prop_sync,prop_wave_mode1,prop_wave_any,"
               "prop_none,seed\n") != std::string::npos);
  CHECK(g.find("\n2,1.5,2,1,0,0,0,77\n") != std::string::npos);
  CHECK(g.find("\"master_seed\":77") != std::string::npos);

  auto regions = sweep::label_regions(grid);
  const std::string r = sweep::regions_csv(cfg, regions);
  CHECK(r.rfind("# config=", 0) == 0);
  CHECK(r.find("\nn,sigma,region\n") != std::string::npos);
  CHECK(r.find("\n2,1.5,") != std::string::npos);
}

TEST_SUITE_END();
