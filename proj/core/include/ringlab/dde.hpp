#pragma once

#include <functional>
#include <span>

#include "ringlab/integrate.hpp"

namespace ringlab::ode {

// Right-hand side with a single discrete delay: dxdt = f(t, x(t), x(t - tau)).
using DelayedField = std::function<void(double t, std::span<const double> x,
                                        std::span<const double> x_delayed,
                                        std::span<double> dxdt)>;

// Initial data on [t0 - delay, t0]. value must be callable anywhere in that
// closed interval; the state at t0 is taken from it as well.
struct DelayHistory {
  double delay = 0.0;
  std::function<void(double t, std::span<double> out)> value;
};

// Method of steps: the horizon is split at t0 + m*delay, each slice is
// integrated with the adaptive one-step scheme (controller restarted at every
// slice boundary), and the delayed argument is read from the previous slice's
// dense interpolant (or the supplied history on the first slice).
Trajectory integrate_dde(const DelayedField& f, const DelayHistory& history,
                         int dim, double t0, double t1,
                         const IntegratorConfig& cfg = {});

}  // namespace ringlab::ode
