#include "ringlab/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ringlab/errors.hpp"

namespace ringlab::ode {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0,
                 c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                 a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
// b - bhat (embedded 4th order error weights)
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0,
                 e7 = -1.0 / 40.0;
// dense output weights
constexpr double d1 = -12715105075.0 / 11282082432.0,
                 d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0,
                 d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0,
                 d7 = 69997945.0 / 29380423.0;

bool all_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

double initial_step_guess(const VectorField& f, std::span<const double> y0,
                          std::span<const double> f0, double t0, double hmax,
                          double rtol, double atol) {
  const std::size_t n = y0.size();
  double dnf = 0.0, dny = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sk = atol + rtol * std::abs(y0[i]);
    dnf += (f0[i] / sk) * (f0[i] / sk);
    dny += (y0[i] / sk) * (y0[i] / sk);
  }
  double h;
  if (dnf <= 1e-10 || dny <= 1e-10)
    h = 1e-6;
  else
    h = std::sqrt(dny / dnf) * 0.01;
  h = std::min(h, hmax);

  std::vector<double> y1(n), f1(n);
  for (std::size_t i = 0; i < n; ++i) y1[i] = y0[i] + h * f0[i];
  f(t0 + h, y1, f1);

  double der2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sk = atol + rtol * std::abs(y0[i]);
    const double d = (f1[i] - f0[i]) / sk;
    der2 += d * d;
  }
  der2 = std::sqrt(der2) / h;

  const double der12 = std::max(der2, std::sqrt(dnf));
  double h1;
  if (der12 <= 1e-15)
    h1 = std::max(1e-6, h * 1e-3);
  else
    h1 = std::pow(0.01 / der12, 0.2);
  return std::min({100.0 * h, h1, hmax});
}

}  // namespace

void Trajectory::push(double t, std::span<const double> x) {
  if (dim == 0) dim = static_cast<int>(x.size());
  times.push_back(t);
  data.insert(data.end(), x.begin(), x.end());
}

void Trajectory::append(const Trajectory& tail) {
  if (dim == 0) dim = tail.dim;
  std::size_t start = 0;
  if (!times.empty() && !tail.times.empty() &&
      std::abs(tail.times.front() - times.back()) <
          1e-9 * std::max(1.0, std::abs(times.back())))
    start = 1;  // skip the duplicated boundary sample
  for (std::size_t i = start; i < tail.size(); ++i)
    push(tail.times[i], tail.state(i));
  final_time = tail.final_time;
  final_state = tail.final_state;
}

void Trajectory::drop_front(std::size_t samples) {
  if (samples == 0) return;
  samples = std::min(samples, times.size());
  times.erase(times.begin(), times.begin() + samples);
  data.erase(data.begin(), data.begin() + samples * dim);
}

std::size_t Trajectory::index_at(double t) const {
  auto it = std::upper_bound(times.begin(), times.end(),
                             t + 1e-9 * std::max(1.0, std::abs(t)));
  if (it == times.begin())
    throw DomainError("Trajectory::index_at: time before first sample");
  return static_cast<std::size_t>(it - times.begin()) - 1;
}

void DenseSegment::eval(double t, std::span<double> out) const {
  const double theta = (t - t0) / h;
  const double th1 = 1.0 - theta;
  const double* r1 = r.data();
  const double* r2 = r1 + dim;
  const double* r3 = r2 + dim;
  const double* r4 = r3 + dim;
  const double* r5 = r4 + dim;
  for (int i = 0; i < dim; ++i)
    out[i] = r1[i] +
             theta * (r2[i] + th1 * (r3[i] + theta * (r4[i] + th1 * r5[i])));
}

double DenseSolution::t_begin() const {
  if (segments_.empty()) throw DomainError("DenseSolution is empty");
  return segments_.front().t0;
}

double DenseSolution::t_end() const {
  if (segments_.empty()) throw DomainError("DenseSolution is empty");
  return segments_.back().t0 + segments_.back().h;
}

const DenseSegment& DenseSolution::locate(double t) const {
  if (segments_.empty()) throw DomainError("DenseSolution is empty");
  const double slack = 1e-9 * std::max(1.0, std::abs(t));
  if (t < t_begin() - slack || t > t_end() + slack)
    throw DomainError("DenseSolution::eval outside the covered span");
  auto it = std::upper_bound(
      segments_.begin(), segments_.end(), t,
      [](double tv, const DenseSegment& s) { return tv < s.t0; });
  if (it != segments_.begin()) --it;
  return *it;
}

void DenseSolution::eval(double t, std::span<double> out) const {
  locate(t).eval(t, out);
}

void integrate_steps(const VectorField& f, std::span<const double> x0,
                     double t0, double t1, const IntegratorConfig& cfg,
                     const std::function<void(const DenseSegment&)>& on_step) {
  if (!(t1 >= t0)) throw DomainError("integrate: need t1 >= t0");
  if (!(cfg.rtol > 0.0) || !(cfg.atol > 0.0))
    throw DomainError("integrate: tolerances must be positive");
  if (!all_finite(x0))
    throw DomainError("integrate: initial state is not finite");
  const std::size_t n = x0.size();
  if (n == 0) throw DomainError("integrate: empty state");
  if (t1 == t0) return;

  const double span = t1 - t0;
  const double hmax = cfg.max_step > 0.0 ? std::min(cfg.max_step, span) : span;
  const double h_floor = 1e-12 * span;

  // PI controller constants
  const double beta = 0.04;
  const double expo1 = 0.2 - beta * 0.75;
  const double safe = 0.9;
  const double facc1 = 1.0 / 0.2;   // max shrink per step
  const double facc2 = 1.0 / 10.0;  // max growth per step

  std::vector<double> y(x0.begin(), x0.end());
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
  std::vector<double> ytmp(n), ynew(n), err_vec(n);

  double t = t0;
  f(t, y, k1);
  if (!all_finite(k1))
    throw DivergenceError("integrate: vector field not finite at start", t);

  double h = cfg.initial_step > 0.0
                 ? std::min(cfg.initial_step, hmax)
                 : initial_step_guess(f, y, k1, t, hmax, cfg.rtol, cfg.atol);

  double facold = 1e-4;
  bool reject = false;
  bool last = false;
  bool nonfinite_last = false;

  DenseSegment seg;
  seg.dim = static_cast<int>(n);
  seg.r.resize(5 * n);

  while (true) {
    if (h < h_floor) {
      if (nonfinite_last)
        throw DivergenceError("integrate: state diverged (non-finite)", t);
      if (reject)
        throw StiffnessError("integrate: step size underflow", t, h);
      // An undersized h without controller pressure is a degenerate initial
      // guess (near-zero state under a tight atol), not stiffness.
      h = h_floor;
    }
    last = false;
    if (t + 1.01 * h - t1 > 0.0) {
      h = t1 - t;
      last = true;
    }

    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    f(t + c2 * h, ytmp, k2);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    f(t + c3 * h, ytmp, k3);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f(t + c4 * h, ytmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] +
                h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    f(t + c5 * h, ytmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                            a64 * k4[i] + a65 * k5[i]);
    f(t + h, ytmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                            b5 * k5[i] + b6 * k6[i]);
    f(t + h, ynew, k7);

    bool finite = all_finite(ynew) && all_finite(k7);
    double err = 0.0;
    if (finite) {
      for (std::size_t i = 0; i < n; ++i) {
        const double ee = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                               e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double sk =
            cfg.atol + cfg.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
        err += (ee / sk) * (ee / sk);
      }
      err = std::sqrt(err / static_cast<double>(n));
      if (!std::isfinite(err)) finite = false;
    }

    if (!finite) {
      // Blown straight past the representable range: report divergence.
      double mag = 0.0;
      for (double v : y) mag = std::max(mag, std::abs(v));
      if (mag > 1e150)
        throw DivergenceError("integrate: state diverged (non-finite)", t);
      nonfinite_last = true;
      reject = true;
      h *= 0.5;
      continue;
    }
    nonfinite_last = false;

    const double fac11 = std::pow(err, expo1);
    if (err <= 1.0) {
      // accepted
      double fac = fac11 / std::pow(facold, beta);
      fac = std::max(facc2, std::min(facc1, fac / safe));
      double hnew = h / fac;
      facold = std::max(err, 1e-4);

      seg.t0 = t;
      seg.h = h;
      double* r1 = seg.r.data();
      double* r2 = r1 + n;
      double* r3 = r2 + n;
      double* r4 = r3 + n;
      double* r5 = r4 + n;
      for (std::size_t i = 0; i < n; ++i) {
        const double dy = ynew[i] - y[i];
        r1[i] = y[i];
        r2[i] = dy;
        r3[i] = h * k1[i] - dy;
        r4[i] = dy - h * k7[i] - r3[i];
        r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                     d6 * k6[i] + d7 * k7[i]);
      }
      on_step(seg);

      std::swap(y, ynew);
      std::swap(k1, k7);
      t = last ? t1 : t + h;
      if (last || t >= t1) return;

      if (reject) hnew = std::min(hnew, h);
      reject = false;
      h = std::min(hnew, hmax);
    } else {
      h = h / std::min(facc1, fac11 / safe);
      reject = true;
    }
  }
}

Trajectory integrate(const VectorField& f, std::span<const double> x0,
                     double t0, double t1, const IntegratorConfig& cfg) {
  if (!(cfg.dense_output_dt > 0.0))
    throw DomainError("integrate: dense_output_dt must be positive");
  Trajectory traj;
  traj.dim = static_cast<int>(x0.size());
  traj.push(t0, x0);
  traj.final_time = t0;
  traj.final_state.assign(x0.begin(), x0.end());
  if (t1 == t0) return traj;

  const double dt = cfg.dense_output_dt;
  std::vector<double> sample(x0.size());
  long next = 1;
  integrate_steps(f, x0, t0, t1, cfg, [&](const DenseSegment& seg) {
    const double seg_end = seg.t0 + seg.h;
    const double slack = 1e-9 * std::max(1.0, std::abs(seg_end));
    while (true) {
      const double ts = t0 + static_cast<double>(next) * dt;
      if (ts > t1 + slack || ts > seg_end + slack) break;
      seg.eval(std::min(ts, seg_end), sample);
      traj.push(ts, sample);
      ++next;
    }
    if (seg_end >= t1 - slack) {
      traj.final_time = t1;
      seg.eval(std::min(t1, seg_end), sample);
      traj.final_state.assign(sample.begin(), sample.end());
    }
  });
  return traj;
}

DenseSolution integrate_dense(const VectorField& f, std::span<const double> x0,
                              double t0, double t1,
                              const IntegratorConfig& cfg) {
  DenseSolution sol;
  integrate_steps(f, x0, t0, t1, cfg,
                  [&](const DenseSegment& seg) { sol.add(seg); });
  return sol;
}

}  // namespace ringlab::ode
