#include "ringlab/detect.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>

#include "ringlab/errors.hpp"

namespace ringlab::detect {

namespace {

// Catmull-Rom interpolation at fractional sample position u (clamped ends).
double cubic_at(std::span<const double> s, double u) {
  const long m = static_cast<long>(s.size());
  long i = static_cast<long>(std::floor(u));
  i = std::clamp(i, 0L, m - 2);
  const double th = u - static_cast<double>(i);
  const double p0 = s[static_cast<std::size_t>(std::max(i - 1, 0L))];
  const double p1 = s[static_cast<std::size_t>(i)];
  const double p2 = s[static_cast<std::size_t>(i + 1)];
  const double p3 = s[static_cast<std::size_t>(std::min(i + 2, m - 1))];
  return p1 + 0.5 * th *
                  (p2 - p0 +
                   th * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                         th * (3.0 * (p1 - p2) + p3 - p0)));
}

// Golden-section maximizer on [lo, hi].
double maximize(const std::function<double(double)>& f, double lo, double hi,
                double tol) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

PeriodEstimate estimate_period(std::span<const double> signal, double dt) {
  if (signal.size() < 4 || dt <= 0.0)
    throw NotPeriodicError("signal too short for a period estimate");
  double mean = 0.0;
  for (double v : signal) mean += v;
  mean /= static_cast<double>(signal.size());

  std::vector<double> crossings;
  for (std::size_t i = 0; i + 1 < signal.size(); ++i) {
    const double a = signal[i] - mean;
    const double b = signal[i + 1] - mean;
    if (a < 0.0 && b >= 0.0) {
      const double frac = a / (a - b);  // a < 0 <= b so a - b < 0
      crossings.push_back(dt * (static_cast<double>(i) + frac));
    }
  }
  if (crossings.size() < 3)
    throw NotPeriodicError("fewer than three upward mean crossings");

  PeriodEstimate est;
  est.cycles = static_cast<int>(crossings.size()) - 1;
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < crossings.size(); ++i)
    sum += crossings[i + 1] - crossings[i];
  est.period = sum / static_cast<double>(est.cycles);
  for (std::size_t i = 0; i + 1 < crossings.size(); ++i) {
    const double dev =
        std::abs(crossings[i + 1] - crossings[i] - est.period) / est.period;
    est.jitter = std::max(est.jitter, dev);
  }
  return est;
}

SyncCheck measure_sync(const ode::Trajectory& traj,
                       const std::vector<std::pair<int, int>>& pairs,
                       double t_end, double window, double tol) {
  if (traj.size() < 2 || pairs.empty())
    throw DomainError("sync check needs samples and neighbour pairs");
  const double t_start = t_end - window;
  const double slack = 1e-6;
  if (t_start < traj.times.front() - slack)
    throw DomainError("sync window extends before the stored trajectory");

  const std::size_t i1 =
      traj.index_at(std::min(t_end, traj.times.back()) + slack);
  const std::size_t i0 = traj.index_at(t_start + slack);

  double total = 0.0;
  for (std::size_t i = i0; i <= i1; ++i) {
    std::span<const double> x = traj.state(i);
    for (const auto& [up, down] : pairs) {
      total += std::abs(x[2 * down] - x[2 * up]);          // z difference
      total += std::abs(x[2 * down + 1] - x[2 * up + 1]);  // y difference
    }
  }
  const double count =
      static_cast<double>((i1 - i0 + 1) * pairs.size() * 2);
  SyncCheck r;
  r.error = total / count;
  r.sync = r.error < tol;
  return r;
}

std::optional<WaveAnalysis> analyze_wave(
    const ode::Trajectory& traj,
    const std::vector<std::pair<int, int>>& pairs, double t_end,
    double elapsed, const DetectConfig& cfg) {
  const double dt = traj.dt();
  if (dt <= 0.0 || pairs.empty()) return std::nullopt;

  const double avail = t_end - traj.times.front();
  const double tail = std::min(avail, cfg.tail_fraction * elapsed);
  if (tail < 20.0 * dt) return std::nullopt;

  const double slack = 1e-6;
  const long i_end = static_cast<long>(
      traj.index_at(std::min(t_end, traj.times.back()) + slack));
  const long i_tail = static_cast<long>(traj.index_at(t_end - tail + slack));

  // Period of the reference node's y signal over the tail. The reference is
  // the first node of the first pair, so a pair list covering a sub-ring of
  // a larger network is analysed against one of its own nodes.
  const int ref = 2 * pairs.front().first + 1;
  std::vector<double> y0;
  y0.reserve(static_cast<std::size_t>(i_end - i_tail + 1));
  for (long i = i_tail; i <= i_end; ++i)
    y0.push_back(traj.value(static_cast<std::size_t>(i), ref));

  PeriodEstimate pe;
  try {
    pe = estimate_period(y0, dt);
  } catch (const NotPeriodicError&) {
    return std::nullopt;
  }
  if (pe.cycles < 2 || pe.jitter > cfg.jitter_tol) return std::nullopt;

  const double T = pe.period;
  const long L = static_cast<long>(std::floor(T / dt));
  if (L < 8) return std::nullopt;

  // Correlation window: L reference samples plus a full period of slack for
  // the shifted copy and the interpolation stencil.
  const long need = 2 * L + 3;
  const long iw0 = i_end - need;
  if (iw0 < std::max(i_tail, 1L)) return std::nullopt;

  WaveAnalysis out;
  out.period = pe;
  out.shifts.reserve(pairs.size());
  out.mismatches.reserve(pairs.size());

  std::vector<double> va(static_cast<std::size_t>(L));
  std::vector<double> vb(static_cast<std::size_t>(need + 2));
  for (const auto& [up, down] : pairs) {
    const int ca = 2 * up + 1;
    const int cb = 2 * down + 1;
    for (long i = 0; i < L; ++i)
      va[static_cast<std::size_t>(i)] =
          traj.value(static_cast<std::size_t>(iw0 + i), ca);
    // vb[j + 1] holds the downstream sample at index iw0 + j, j >= -1.
    for (long j = -1; j <= need; ++j)
      vb[static_cast<std::size_t>(j + 1)] =
          traj.value(static_cast<std::size_t>(iw0 + j), cb);

    double ma = 0.0, mb = 0.0;
    for (long i = 0; i < L; ++i) ma += va[static_cast<std::size_t>(i)];
    ma /= static_cast<double>(L);
    for (long j = 0; j <= 2 * L; ++j) mb += vb[static_cast<std::size_t>(j + 1)];
    mb /= static_cast<double>(2 * L + 1);

    // Coarse scan over whole-sample lags.
    long best = 0;
    double best_c = -std::numeric_limits<double>::infinity();
    for (long s = 0; s < L; ++s) {
      double c = 0.0;
      for (long i = 0; i < L; ++i)
        c += (va[static_cast<std::size_t>(i)] - ma) *
             (vb[static_cast<std::size_t>(i + s + 1)] - mb);
      if (c > best_c) {
        best_c = c;
        best = s;
      }
    }

    // Continuous refinement around the winning lag by least-squares
    // alignment. The correlation peak location is biased when the window
    // covers a non-integer number of periods; the squared-misfit minimum of
    // a locked pair stays at the exact lock regardless of the window.
    auto fit = [&](double u) {
      double g = 0.0;
      for (long i = 0; i < L; ++i) {
        const double d = cubic_at(vb, static_cast<double>(i) + u + 1.0) -
                         va[static_cast<std::size_t>(i)];
        g += d * d;
      }
      return -g;
    };
    const double lo = std::max(0.0, static_cast<double>(best) - 2.0);
    const double hi = std::min(static_cast<double>(L), best + 2.0);
    const double u = maximize(fit, lo, hi, 1e-7);

    double mismatch = 0.0;
    for (long i = 0; i < L; ++i)
      mismatch += std::abs(cubic_at(vb, static_cast<double>(i) + u + 1.0) -
                           va[static_cast<std::size_t>(i)]);
    mismatch /= static_cast<double>(L);

    out.shifts.push_back(u * dt);
    out.mismatches.push_back(mismatch);
  }
  return out;
}

std::optional<WaveDescriptor> match_wave_mode(const WaveAnalysis& analysis,
                                              int n, int mode,
                                              const DetectConfig& cfg) {
  if (analysis.shifts.empty()) return std::nullopt;
  const double T = analysis.period.period;
  double worst_mismatch = 0.0;
  double worst_defect = 0.0;
  double shift_sum = 0.0;
  for (std::size_t j = 0; j < analysis.shifts.size(); ++j) {
    worst_mismatch = std::max(worst_mismatch, analysis.mismatches[j]);
    const double defect =
        std::abs(n * analysis.shifts[j] - static_cast<double>(mode) * T);
    worst_defect = std::max(worst_defect, defect);
    shift_sum += analysis.shifts[j];
  }
  if (worst_mismatch >= cfg.orbit_tol || worst_defect >= cfg.phase_tol)
    return std::nullopt;
  WaveDescriptor d;
  d.mode = mode;
  d.period = T;
  d.shift = shift_sum / static_cast<double>(analysis.shifts.size());
  d.orbit_mismatch = worst_mismatch;
  d.phase_defect = worst_defect;
  return d;
}

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Sync: return "Sync";
    case Outcome::RotatingWave: return "RotatingWave";
    case Outcome::None: return "None";
  }
  return "None";
}

Classification classify_at(const ode::Trajectory& traj,
                           const net::Topology& topology, double t_end,
                           double elapsed, const DetectConfig& cfg) {
  Classification cls;
  const auto pairs = net::neighbour_pairs(topology);

  if (elapsed >= cfg.sync_window * (1.0 - 1e-9)) {
    SyncCheck sc = measure_sync(traj, pairs, t_end, cfg.sync_window,
                                cfg.sync_tol);
    cls.sync_error = sc.error;
    if (sc.sync) {
      cls.outcome = Outcome::Sync;
      cls.checkpoint_time = t_end;
      return cls;
    }
  }

  if (topology.kind() == net::TopologyKind::TwoRings) return cls;

  const int n = topology.n();
  if (auto analysis = analyze_wave(traj, pairs, t_end, elapsed, cfg)) {
    for (int k = 1; k <= n / 2; ++k) {
      if (auto d = match_wave_mode(*analysis, n, k, cfg)) {
        cls.outcome = Outcome::RotatingWave;
        cls.mode = k;
        cls.checkpoint_time = t_end;
        cls.wave = d;
        return cls;
      }
    }
  }
  return cls;
}

Classification classify(const ode::Trajectory& traj,
                        const net::Topology& topology,
                        std::span<const double> checkpoints,
                        const DetectConfig& cfg) {
  Classification last;
  const double origin = traj.times.empty() ? 0.0 : traj.times.front();
  for (double c : checkpoints) {
    if (traj.times.empty() || c > traj.final_time + 1e-6) continue;
    Classification cls = classify_at(traj, topology, c, c - origin, cfg);
    if (cls.outcome != Outcome::None) return cls;
    last = cls;
  }
  return last;
}

Classification run_protocol(const net::FhnParams& params,
                            const net::CouplingConfig& coupling,
                            const net::NetworkState& ic,
                            const ProtocolConfig& cfg,
                            ode::Trajectory* tail_out) {
  const double interval = cfg.checkpoint_interval;
  if (interval <= 0.0 || cfg.t_final <= 0.0)
    throw DomainError("protocol needs positive horizon and interval");

  std::vector<double> checkpoints;
  for (double c = interval; c < cfg.t_final - 1e-9; c += interval)
    checkpoints.push_back(c);
  checkpoints.push_back(cfg.t_final);

  const double keep =
      cfg.keep_window > 0.0
          ? cfg.keep_window
          : std::max(cfg.detect.sync_window,
                     cfg.detect.tail_fraction * cfg.t_final) +
                100.0;

  ode::VectorField field = net::make_fhn_field(params, coupling);
  std::vector<double> x = ic.flat();
  ode::Trajectory buffer;
  double t = 0.0;

  Classification last;
  for (double c : checkpoints) {
    ode::Trajectory seg;
    try {
      seg = ode::integrate(field, x, t, c, cfg.integrator);
    } catch (const Error& e) {
      last = Classification{};
      last.note = e.what();
      if (tail_out) *tail_out = std::move(buffer);
      return last;
    }
    if (buffer.size() == 0)
      buffer = std::move(seg);
    else
      buffer.append(seg);
    x = buffer.final_state;
    t = c;

    if (buffer.times.front() < t - keep - 1.0) {
      const std::size_t cut = buffer.index_at(t - keep);
      buffer.drop_front(cut);
    }

    last = classify_at(buffer, coupling.topology, c, c, cfg.detect);
    if (last.outcome != Outcome::None) break;
  }
  if (tail_out) *tail_out = std::move(buffer);
  return last;
}

}  // namespace ringlab::detect
