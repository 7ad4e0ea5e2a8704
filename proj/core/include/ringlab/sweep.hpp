#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ringlab/detect.hpp"

namespace ringlab::sweep {

// Grid scan settings. Loaded from / saved to JSON with exactly these keys;
// unknown keys in a config file are rejected.
struct SweepConfig {
  std::string topology = "ring";  // "ring" or "chain"
  std::vector<int> n_values = {2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  std::vector<double> sigma_values = {0.25, 0.5,  0.75, 1.0,  1.25, 1.5,
                                      1.75, 2.0,  2.25, 2.5,  2.75, 3.0};
  int samples_per_cell = 20;
  double t_final = 20000.0;
  double checkpoint_interval = 1000.0;
  std::uint64_t master_seed = 2026;
  double rtol = 1e-5;
  double atol = 1e-5;
  double sample_dt = 0.1;
  detect::DetectConfig detect;
  int workers = 0;  // 0: $RINGLAB_WORKERS, else hardware concurrency
};

SweepConfig load_config(const std::string& path);
void save_config(const SweepConfig& cfg, const std::string& path);

struct SampleResult {
  int sample = 0;
  detect::Outcome outcome = detect::Outcome::None;
  int mode = 0;
  double checkpoint_time = 0.0;
  double sync_error = 0.0;
  std::string note;
};

struct CellResult {
  int n = 0;
  int sigma_index = 0;
  double sigma = 0.0;
  int sync_count = 0;
  int wave_mode1_count = 0;
  int wave_any_count = 0;  // includes the mode-1 runs
  int none_count = 0;
  std::vector<SampleResult> samples;
};

// One (n, sigma) cell: samples_per_cell runs of the classification
// protocol, each from the initial state drawn with the sub-seed
// mix_seed(master_seed, n, sigma_index, sample). Independent of worker
// scheduling by construction.
CellResult run_cell(const SweepConfig& cfg, int n, int sigma_index);

struct GridResult {
  SweepConfig config;
  std::vector<CellResult> cells;  // ordered by (n, sigma_index)
};

// Full grid with a worker pool. When resume_dir is non-empty each finished
// cell is written there as JSON (atomically) and existing files are
// reloaded instead of recomputed. on_cell, when given, observes every cell
// as it completes.
GridResult run_grid(const SweepConfig& cfg, const std::string& resume_dir = "",
                    const std::function<void(const CellResult&)>& on_cell = {});

enum class Region {
  Sync1,               // above the threshold curve, all samples synchronized
  Sync2,               // below it, all sync, no stable wave at this cell
  Sync3,               // below it, all sync, stable wave exists regardless
  Coexistence,         // both outcomes observed
  Sync23Undetermined,  // all sync below the curve, wave stability unknown
  WaveOnly,            // every sample locked onto a wave
  Unclassified         // undecided samples, or sync missing above the curve
};

const char* to_string(Region r);

struct RegionCell {
  int n = 0;
  double sigma = 0.0;
  Region region = Region::Unclassified;
};

// Region label per cell. stable_wave(n, sigma), when provided, settles the
// Sync2 / Sync3 split; without it those cells stay SyncUndetermined.
std::vector<RegionCell> label_regions(
    const GridResult& grid,
    const std::function<bool(int, double)>& stable_wave = {});

// Coupling beyond which synchronization is guaranteed for every initial
// state: 1 for the chain, 1/(1 - cos(2*pi/n)) for the ring.
double analytic_sync_sigma(const std::string& topology, int n);

// CSV renderers. Deterministic bytes for a fixed input; both files start
// with a "# config=..." comment embedding the resolved settings and seed.
std::string grid_csv(const GridResult& grid);
std::string regions_csv(const SweepConfig& cfg,
                        const std::vector<RegionCell>& cells);

}  // namespace ringlab::sweep
