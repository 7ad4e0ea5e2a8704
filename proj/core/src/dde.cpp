#include "ringlab/dde.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ringlab/errors.hpp"

namespace ringlab::ode {

Trajectory integrate_dde(const DelayedField& f, const DelayHistory& history,
                         int dim, double t0, double t1,
                         const IntegratorConfig& cfg) {
  if (dim <= 0) throw DomainError("dde dimension must be positive");
  if (!(history.delay > 0.0)) throw DomainError("delay must be positive");
  if (!history.value) throw DomainError("history initializer is required");
  if (!(t1 > t0)) throw DomainError("integration span must be positive");

  const double tau = history.delay;
  const double dt = cfg.dense_output_dt > 0.0 ? cfg.dense_output_dt : 0.1;
  const double slack = 1e-9 * std::max(1.0, std::abs(t1 - t0));

  Trajectory traj;
  traj.dim = dim;

  std::vector<double> x(dim);
  history.value(t0, x);
  traj.push(t0, x);

  std::vector<double> delayed(dim);
  std::vector<double> sample(dim);
  long next_sample = 1;

  DenseSolution prev;  // dense interpolant over the previous slice
  bool first_slice = true;
  double slice_start = t0;

  while (slice_start < t1 - slack) {
    const double slice_end = std::min(slice_start + tau, t1);
    DenseSolution cur;

    VectorField field = [&](double t, std::span<const double> state,
                            std::span<double> dxdt) {
      double td = t - tau;
      if (first_slice) {
        td = std::clamp(td, t0 - tau, t0);
        history.value(td, delayed);
      } else {
        td = std::clamp(td, prev.t_begin(), prev.t_end());
        prev.eval(td, delayed);
      }
      f(t, state, delayed, dxdt);
    };

    integrate_steps(field, x, slice_start, slice_end, cfg,
                    [&](const DenseSegment& seg) {
                      cur.add(seg);
                      const double seg_end = seg.t0 + seg.h;
                      while (true) {
                        const double ts = t0 + next_sample * dt;
                        if (ts > seg_end + slack || ts > t1 + slack) break;
                        seg.eval(std::min(ts, seg_end), sample);
                        traj.push(std::min(ts, t1), sample);
                        ++next_sample;
                      }
                      if (seg_end >= slice_end - slack)
                        seg.eval(std::min(slice_end, seg_end), x);
                    });

    if (slice_end >= t1 - slack) {
      if (traj.times.back() < t1 - slack) traj.push(t1, x);
      break;
    }
    prev = std::move(cur);
    first_slice = false;
    slice_start = slice_end;
  }

  traj.final_time = t1;
  traj.final_state = x;
  return traj;
}

}  // namespace ringlab::ode
