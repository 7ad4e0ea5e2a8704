#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ringlab/fhn.hpp"
#include "ringlab/integrate.hpp"
#include "ringlab/topology.hpp"

namespace ringlab::detect {

struct PeriodEstimate {
  double period = 0.0;
  double jitter = 0.0;  // max relative deviation of cycle lengths
  int cycles = 0;       // number of crossing intervals averaged
};

// Period of a uniformly sampled scalar signal from its upward mean
// crossings (linearly interpolated). Throws NotPeriodicError when fewer
// than three crossings are present.
PeriodEstimate estimate_period(std::span<const double> signal, double dt);

struct SyncCheck {
  bool sync = false;
  double error = std::numeric_limits<double>::quiet_NaN();
};

// Mean absolute neighbour difference (both components, all pairs) over the
// trailing window [t_end - window, t_end]. Throws DomainError when the
// trajectory does not cover that window.
SyncCheck measure_sync(const ode::Trajectory& traj,
                       const std::vector<std::pair<int, int>>& pairs,
                       double t_end, double window = 1000.0,
                       double tol = 2e-5);

struct DetectConfig {
  double sync_window = 1000.0;
  double sync_tol = 2e-5;
  double orbit_tol = 1e-4;     // mean shifted-profile mismatch per pair
  double phase_tol = 1e-2;     // |n*shift_j - mode*T| acceptance
  double jitter_tol = 0.02;    // period regularity gate
  double tail_fraction = 0.2;  // trailing share of elapsed time analysed
};

// Per-pair time shifts and shifted-profile mismatches of the y signals,
// shared by the mode tests. Shifts lie in [0, T): the downstream node lags
// its upstream neighbour by the shift.
struct WaveAnalysis {
  PeriodEstimate period;
  std::vector<double> shifts;
  std::vector<double> mismatches;
};

// elapsed is the simulated time behind t_end; the trajectory may retain only
// a trailing window of it. The period is taken from the y signal of the
// first node of the first pair, so a pair list covering a sub-ring of a
// larger network is timed against its own dynamics. Returns nothing when
// the tail is too short, the signal is not cleanly periodic, or the period
// resolves too few samples.
std::optional<WaveAnalysis> analyze_wave(
    const ode::Trajectory& traj,
    const std::vector<std::pair<int, int>>& pairs, double t_end,
    double elapsed, const DetectConfig& cfg = {});

struct WaveDescriptor {
  int mode = 0;
  double period = 0.0;
  double shift = 0.0;           // mean neighbour time shift
  double orbit_mismatch = 0.0;  // worst mean profile mismatch
  double phase_defect = 0.0;    // worst |n*shift_j - mode*T|
};

// Tests one travelling-wave mode: every pair must satisfy the profile
// mismatch bound and n*shift_j must agree with mode*T.
std::optional<WaveDescriptor> match_wave_mode(const WaveAnalysis& analysis,
                                              int n, int mode,
                                              const DetectConfig& cfg = {});

enum class Outcome { Sync, RotatingWave, None };
const char* to_string(Outcome o);

struct Classification {
  Outcome outcome = Outcome::None;
  int mode = 0;                  // wave mode when outcome is RotatingWave
  double checkpoint_time = 0.0;  // decision time; 0 while undecided
  double sync_error = std::numeric_limits<double>::quiet_NaN();
  std::optional<WaveDescriptor> wave;
  std::string note;
};

// One checkpoint: sync test first, then wave modes k = 1..floor(n/2).
// For the coupled pair of rings only the sync test applies.
Classification classify_at(const ode::Trajectory& traj,
                           const net::Topology& topology, double t_end,
                           double elapsed, const DetectConfig& cfg = {});

// Walks the checkpoints in order; the first decided one wins.
Classification classify(const ode::Trajectory& traj,
                        const net::Topology& topology,
                        std::span<const double> checkpoints,
                        const DetectConfig& cfg = {});

struct ProtocolConfig {
  double t_final = 20000.0;
  double checkpoint_interval = 1000.0;
  DetectConfig detect;
  ode::IntegratorConfig integrator;
  double keep_window = 0.0;  // trailing span retained; 0 picks one
};

// Simulate-and-classify driver with early stop at the first decided
// checkpoint. Only a rolling trailing window of the trajectory is kept.
// Integration blow-ups yield Outcome::None with the failure in note. When
// tail_out is non-null it receives the retained window (final_state holds
// the last integrated state).
Classification run_protocol(const net::FhnParams& params,
                            const net::CouplingConfig& coupling,
                            const net::NetworkState& ic,
                            const ProtocolConfig& cfg = {},
                            ode::Trajectory* tail_out = nullptr);

}  // namespace ringlab::detect
