#include "ringlab/waves.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "ringlab/dde.hpp"
#include "ringlab/errors.hpp"
#include "ringlab/rng.hpp"
#include "ringlab/spectrum.hpp"
#include "ringlab/variational.hpp"

namespace ringlab::waves {

namespace {

constexpr double nan_d = std::numeric_limits<double>::quiet_NaN();

// Catmull-Rom interpolation at fractional index u on a circular buffer.
double circular_cubic(const std::vector<double>& s, double u) {
  const long m = static_cast<long>(s.size());
  double w = std::fmod(u, static_cast<double>(m));
  if (w < 0.0) w += static_cast<double>(m);
  const long i = static_cast<long>(w);
  const double th = w - static_cast<double>(i);
  auto at = [&](long j) { return s[static_cast<std::size_t>(((j % m) + m) % m)]; };
  const double p0 = at(i - 1), p1 = at(i), p2 = at(i + 1), p3 = at(i + 2);
  return p1 + 0.5 * th *
                  (p2 - p0 +
                   th * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                         th * (3.0 * (p1 - p2) + p3 - p0)));
}

double golden_max(const std::function<double(double)>& f, double a, double b,
                  double tol) {
  constexpr double inv_phi = 0.6180339887498949;
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

// Mean neighbour time shift of a ring orbit from circular correlation of
// the y profiles, plus the worst |n*shift_j - period| defect (mode 1).
struct ShiftMeasurement {
  double shift = 0.0;
  double defect = 0.0;
};

ShiftMeasurement measure_ring_shift(const PeriodicOrbit& orbit) {
  const int n = orbit.n;
  const long m = static_cast<long>(orbit.samples());
  const int dim = orbit.dim();
  const double dtc = orbit.period / static_cast<double>(m);

  std::vector<std::vector<double>> y(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    y[static_cast<std::size_t>(j)].resize(static_cast<std::size_t>(m));
    double mean = 0.0;
    for (long i = 0; i < m; ++i) {
      const double v =
          orbit.states[static_cast<std::size_t>(i) * dim + 2 * j + 1];
      y[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = v;
      mean += v;
    }
    mean /= static_cast<double>(m);
    for (long i = 0; i < m; ++i)
      y[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] -= mean;
  }

  ShiftMeasurement out;
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    const auto& ya = y[static_cast<std::size_t>(j)];
    const auto& yb = y[static_cast<std::size_t>((j + 1) % n)];
    long best = 0;
    double best_c = -std::numeric_limits<double>::infinity();
    for (long s = 0; s < m; ++s) {
      double c = 0.0;
      for (long i = 0; i < m; ++i)
        c += ya[static_cast<std::size_t>(i)] *
             yb[static_cast<std::size_t>((i + s) % m)];
      if (c > best_c) {
        best_c = c;
        best = s;
      }
    }
    auto corr = [&](double u) {
      double c = 0.0;
      for (long i = 0; i < m; ++i)
        c += ya[static_cast<std::size_t>(i)] *
             circular_cubic(yb, static_cast<double>(i) + u);
      return c;
    };
    const double u = golden_max(corr, static_cast<double>(best) - 1.0,
                                static_cast<double>(best) + 1.0, 1e-7);
    const double tau = u * dtc;
    sum += tau;
    out.defect =
        std::max(out.defect, std::abs(n * tau - orbit.period));
  }
  out.shift = sum / static_cast<double>(n);
  return out;
}

}  // namespace

std::size_t PeriodicOrbit::samples() const {
  if (n == 0 || states.empty()) return 0;
  return states.size() / static_cast<std::size_t>(dim()) - 1;
}

void PeriodicOrbit::eval(double t, std::span<double> out) const {
  const long m = static_cast<long>(samples());
  if (m < 1) throw DomainError("orbit holds no samples");
  const int d = dim();
  const double dtc = period / static_cast<double>(m);
  double u = std::fmod(t, period);
  if (u < 0.0) u += period;
  long c = static_cast<long>(u / dtc);
  c = std::clamp(c, 0L, m - 1);
  const double th = std::clamp((u - c * dtc) / dtc, 0.0, 1.0);

  const double h00 = (1.0 + 2.0 * th) * (1.0 - th) * (1.0 - th);
  const double h10 = th * (1.0 - th) * (1.0 - th);
  const double h01 = th * th * (3.0 - 2.0 * th);
  const double h11 = th * th * (th - 1.0);

  const double* s0 = states.data() + static_cast<std::size_t>(c) * d;
  const double* s1 = s0 + d;
  const double* f0 = derivs.data() + static_cast<std::size_t>(c) * d;
  const double* f1 = f0 + d;
  for (int i = 0; i < d; ++i)
    out[i] = h00 * s0[i] + h10 * dtc * f0[i] + h01 * s1[i] + h11 * dtc * f1[i];
}

std::vector<double> PeriodicOrbit::state_at(double t) const {
  std::vector<double> out(static_cast<std::size_t>(dim()));
  eval(t, out);
  return out;
}

PeriodicOrbit refine_orbit(
    const ode::VectorField& field,
    const std::function<void(std::span<const double>, Matrix&)>& jac, int dim,
    std::span<const double> x_near, double period_guess,
    const OrbitRefineConfig& cfg) {
  if (dim < 1) throw DomainError("refine_orbit: dimension must be positive");
  if (!(period_guess > 0.0))
    throw DomainError("refine_orbit: period guess must be positive");
  if (static_cast<int>(x_near.size()) != dim)
    throw DomainError("refine_orbit: seed state has the wrong size");

  // Pin the phase on the fastest-moving component of the seed unless the
  // caller chose one.
  int section = cfg.section_component;
  std::vector<double> f0(static_cast<std::size_t>(dim));
  field(0.0, x_near, f0);
  if (section < 0) {
    section = 0;
    for (int i = 1; i < dim; ++i)
      if (std::abs(f0[static_cast<std::size_t>(i)]) >
          std::abs(f0[static_cast<std::size_t>(section)]))
        section = i;
  }
  if (section >= dim)
    throw DomainError("refine_orbit: section component out of range");

  const std::size_t ns =
      static_cast<std::size_t>(dim) + static_cast<std::size_t>(dim) * dim;
  Matrix jmat(dim, dim);
  ode::VectorField augmented = [&](double t, std::span<const double> X,
                                   std::span<double> dX) {
    std::span<const double> x = X.first(static_cast<std::size_t>(dim));
    field(t, x, dX.first(static_cast<std::size_t>(dim)));
    jac(x, jmat);
    for (int c = 0; c < dim; ++c) {
      const double* phi = X.data() + dim + static_cast<std::size_t>(c) * dim;
      double* dphi = dX.data() + dim + static_cast<std::size_t>(c) * dim;
      for (int r = 0; r < dim; ++r) {
        double acc = 0.0;
        for (int k = 0; k < dim; ++k) acc += jmat(r, k) * phi[k];
        dphi[r] = acc;
      }
    }
  };

  std::vector<double> x0(x_near.begin(), x_near.end());
  double period = period_guess;
  std::vector<double> best_x = x0;
  double best_period = period;
  double best_res = std::numeric_limits<double>::infinity();
  long its = 0;

  std::vector<double> X0(ns), XT(ns);
  for (int it = 0; it < cfg.max_iterations; ++it) {
    ++its;
    std::fill(X0.begin(), X0.end(), 0.0);
    std::copy(x0.begin(), x0.end(), X0.begin());
    for (int c = 0; c < dim; ++c)
      X0[static_cast<std::size_t>(dim) + static_cast<std::size_t>(c) * dim +
         static_cast<std::size_t>(c)] = 1.0;
    ode::integrate_steps(augmented, X0, 0.0, period, cfg.integrator,
                         [&](const ode::DenseSegment& seg) {
                           seg.eval(seg.t0 + seg.h, XT);
                         });

    std::vector<double> closure(static_cast<std::size_t>(dim));
    double res = 0.0;
    for (int i = 0; i < dim; ++i) {
      closure[static_cast<std::size_t>(i)] =
          XT[static_cast<std::size_t>(i)] - x0[static_cast<std::size_t>(i)];
      res = std::max(res, std::abs(closure[static_cast<std::size_t>(i)]));
    }
    if (res < best_res) {
      best_res = res;
      best_x = x0;
      best_period = period;
    }
    if (res <= cfg.residual_target) break;

    std::vector<double> fT(static_cast<std::size_t>(dim));
    field(period, std::span<const double>(XT).first(static_cast<std::size_t>(dim)),
          fT);
    Matrix a(dim + 1, dim + 1);
    for (int r = 0; r < dim; ++r) {
      for (int c = 0; c < dim; ++c)
        a(r, c) = XT[static_cast<std::size_t>(dim) +
                     static_cast<std::size_t>(c) * dim + r] -
                  (r == c ? 1.0 : 0.0);
      a(r, dim) = fT[static_cast<std::size_t>(r)];
    }
    a(dim, section) = 1.0;

    std::vector<double> rhs(static_cast<std::size_t>(dim) + 1, 0.0);
    for (int i = 0; i < dim; ++i)
      rhs[static_cast<std::size_t>(i)] = -closure[static_cast<std::size_t>(i)];
    LuDecomposition lu = lu_decompose(a);
    if (lu.singular) break;
    std::vector<double> delta = lu.solve(rhs);

    double dmax = 0.0;
    for (double v : delta) dmax = std::max(dmax, std::abs(v));
    const double scale = dmax > 0.5 ? 0.5 / dmax : 1.0;
    for (int i = 0; i < dim; ++i)
      x0[static_cast<std::size_t>(i)] +=
          scale * delta[static_cast<std::size_t>(i)];
    period += scale * delta[static_cast<std::size_t>(dim)];
    if (!(period > 0.0)) break;
  }

  if (!(best_res <= cfg.residual_target)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", best_res);
    throw ConvergenceError(
        std::string("orbit shooting stalled at residual ") + buf, its);
  }

  // Rebuild the orbit on the phase grid from the best anchor.
  ode::DenseSolution dense =
      ode::integrate_dense(field, best_x, 0.0, best_period, cfg.integrator);
  const int m = cfg.orbit_samples;
  PeriodicOrbit orbit;
  orbit.n = dim / 2;
  orbit.period = best_period;
  orbit.states.resize(static_cast<std::size_t>(m + 1) * dim);
  orbit.derivs.resize(static_cast<std::size_t>(m + 1) * dim);
  std::vector<double> row(static_cast<std::size_t>(dim));
  std::vector<double> drow(static_cast<std::size_t>(dim));
  for (int i = 0; i <= m; ++i) {
    const double ti =
        std::min(best_period * i / static_cast<double>(m), dense.t_end());
    dense.eval(ti, row);
    field(ti, row, drow);
    std::copy(row.begin(), row.end(),
              orbit.states.begin() + static_cast<std::size_t>(i) * dim);
    std::copy(drow.begin(), drow.end(),
              orbit.derivs.begin() + static_cast<std::size_t>(i) * dim);
  }
  double res = 0.0;
  for (int i = 0; i < dim; ++i)
    res = std::max(res, std::abs(orbit.states[static_cast<std::size_t>(m) * dim +
                                              static_cast<std::size_t>(i)] -
                                 best_x[static_cast<std::size_t>(i)]));
  orbit.residual = res;
  return orbit;
}

PeriodicOrbit single_node_cycle(const net::FhnParams& p,
                                const OrbitRefineConfig& cfg) {
  ode::VectorField field = [p](double, std::span<const double> x,
                               std::span<double> d) {
    d[0] = p.alpha * (x[1] - p.beta * x[0]);
    d[1] = x[1] - p.gamma * x[1] * x[1] * x[1] - x[0];
  };
  const Matrix zero_coupling(1, 1);
  auto jac = [p, &zero_coupling](std::span<const double> x, Matrix& j) {
    net::fhn_jacobian(p, zero_coupling, x, j);
  };

  ode::IntegratorConfig settle{1e-8, 1e-10, 0.0, 0.0, 0.5};
  std::vector<double> x{0.0, 1.0};
  ode::Trajectory tr = ode::integrate(field, x, 0.0, 1000.0, settle);

  ode::IntegratorConfig fine{1e-8, 1e-10, 0.0, 0.0, 0.02};
  ode::Trajectory probe =
      ode::integrate(field, tr.final_state, 0.0, 200.0, fine);
  std::vector<double> ysig;
  ysig.reserve(probe.size());
  for (std::size_t i = 0; i < probe.size(); ++i)
    ysig.push_back(probe.value(i, 1));
  detect::PeriodEstimate pe = detect::estimate_period(ysig, probe.dt());

  PeriodicOrbit orbit =
      refine_orbit(field, jac, 2, probe.final_state, pe.period, cfg);
  orbit.n = 1;
  orbit.sigma = 0.0;
  orbit.params = p;
  orbit.shift = 0.0;
  return orbit;
}

Matrix ring_coupling_matrix(int n, double sigma) {
  if (n < 1) throw DomainError("ring_coupling_matrix: need n >= 1");
  if (n == 1) return Matrix(1, 1);
  return sigma * net::laplacian(net::Topology::directed_ring(n));
}

JacobianModel::JacobianModel(const PeriodicOrbit& orbit)
    : orbit_(&orbit),
      sigma_l_(ring_coupling_matrix(orbit.n, orbit.sigma)),
      x_(static_cast<std::size_t>(orbit.dim())) {}

void JacobianModel::operator()(double t, Matrix& jac) const {
  orbit_->eval(t, x_);
  net::fhn_jacobian(orbit_->params, sigma_l_, x_, jac);
}

double JacobianModel::trace(double t) const {
  orbit_->eval(t, x_);
  const net::FhnParams& p = orbit_->params;
  double tr = 0.0;
  for (int j = 0; j < orbit_->n; ++j) {
    const double y = x_[static_cast<std::size_t>(2 * j + 1)];
    tr += -p.alpha * p.beta + 1.0 - 3.0 * p.gamma * y * y;
    tr -= sigma_l_(j, j);
  }
  return tr;
}

std::optional<PeriodicOrbit> find_wave_orbit(int n, double sigma,
                                             std::uint64_t seed,
                                             const net::FhnParams& p,
                                             const WaveSearchConfig& cfg) {
  if (n < 2) throw DomainError("find_wave_orbit: need n >= 2");
  PeriodicOrbit ref = single_node_cycle(p, cfg.refine);
  const double t0 = ref.period;

  net::CouplingConfig coupling{net::Topology::directed_ring(n), sigma};
  Rng rng(mix_seed(seed, static_cast<std::uint64_t>(n)));
  std::vector<double> x0(static_cast<std::size_t>(2 * n));
  std::vector<double> node(2);
  for (int j = 0; j < n; ++j) {
    ref.eval(static_cast<double>((n - j) % n) * t0 / n, node);
    x0[static_cast<std::size_t>(2 * j)] =
        node[0] + rng.uniform(-cfg.ic_jitter, cfg.ic_jitter);
    x0[static_cast<std::size_t>(2 * j + 1)] =
        node[1] + rng.uniform(-cfg.ic_jitter, cfg.ic_jitter);
  }

  detect::ProtocolConfig pc;
  pc.t_final = cfg.t_max;
  pc.checkpoint_interval = cfg.checkpoint_interval;
  pc.detect = cfg.detect;
  pc.integrator = cfg.sim;
  ode::Trajectory tail;
  detect::Classification cls = detect::run_protocol(
      p, coupling, net::NetworkState::from_flat(x0), pc, &tail);
  if (cls.outcome != detect::Outcome::RotatingWave || cls.mode != 1)
    return std::nullopt;

  const Matrix sigma_l = ring_coupling_matrix(n, sigma);
  auto jac = [p, &sigma_l](std::span<const double> x, Matrix& j) {
    net::fhn_jacobian(p, sigma_l, x, j);
  };
  PeriodicOrbit orbit =
      refine_orbit(net::make_fhn_field(p, coupling), jac, 2 * n,
                   tail.final_state, cls.wave->period, cfg.refine);
  orbit.sigma = sigma;
  orbit.params = p;

  ShiftMeasurement sm = measure_ring_shift(orbit);
  if (sm.defect >= cfg.detect.phase_tol) return std::nullopt;
  orbit.shift = sm.shift;
  return orbit;
}

PeriodicOrbit continue_wave_orbit(const PeriodicOrbit& orbit, double sigma,
                                  const OrbitRefineConfig& cfg) {
  if (orbit.n < 2)
    throw DomainError("continue_wave_orbit: needs a ring orbit");
  const int n = orbit.n;
  net::CouplingConfig coupling{net::Topology::directed_ring(n), sigma};
  const Matrix sigma_l = ring_coupling_matrix(n, sigma);
  const net::FhnParams p = orbit.params;
  auto jac = [p, &sigma_l](std::span<const double> x, Matrix& j) {
    net::fhn_jacobian(p, sigma_l, x, j);
  };
  PeriodicOrbit next =
      refine_orbit(net::make_fhn_field(p, coupling), jac, 2 * n,
                   orbit.state_at(0.0), orbit.period, cfg);
  next.sigma = sigma;
  next.params = p;
  next.shift = measure_ring_shift(next).shift;
  return next;
}

double closure_relation_defect(const PeriodicOrbit& orbit) {
  if (orbit.n < 2 || !(orbit.period > 0.0))
    throw DomainError("closure relation needs a ring orbit");
  const double denom = orbit.period - orbit.shift;
  if (denom <= 0.0) throw DomainError("shift not smaller than the period");
  return std::abs((orbit.n - 1) * orbit.period / denom -
                  static_cast<double>(orbit.n));
}

bool check_closure_relation(const PeriodicOrbit& orbit, double eps) {
  return closure_relation_defect(orbit) < eps;
}

FloquetResult floquet_multipliers(const PeriodicOrbit& orbit,
                                  const ode::IntegratorConfig& cfg) {
  if (!(orbit.residual <= 1e-6))
    throw DomainError("orbit closure residual exceeds 1e-6; refine first");
  JacobianModel model(orbit);
  ode::MatrixField jf = [&model](double t, Matrix& j) { model(t, j); };
  Matrix m = ode::integrate_variational(jf, orbit.dim(), 0.0, orbit.period, cfg);
  std::vector<std::complex<double>> eig = spectral::eigenvalues(m);
  std::sort(eig.begin(), eig.end(),
            [](const std::complex<double>& a, const std::complex<double>& b) {
              return std::abs(a) > std::abs(b);
            });

  FloquetResult out;
  out.multipliers = eig;
  std::size_t trivial = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < eig.size(); ++i) {
    const double d = std::abs(eig[i] - std::complex<double>(1.0, 0.0));
    if (d < best) {
      best = d;
      trivial = i;
    }
  }
  out.trivial_defect = best;
  for (std::size_t i = 0; i < eig.size(); ++i)
    if (i != trivial)
      out.max_nontrivial = std::max(out.max_nontrivial, std::abs(eig[i]));
  out.stable = out.max_nontrivial < 1.0 - out.margin;
  return out;
}

double liouville_defect(const PeriodicOrbit& orbit, int segments,
                        const ode::IntegratorConfig& cfg) {
  JacobianModel model(orbit);
  ode::MatrixField jf = [&model](double t, Matrix& j) { model(t, j); };
  const double logdet = ode::monodromy_log_abs_det(jf, orbit.dim(), 0.0,
                                                   orbit.period, segments, cfg);

  // Composite Simpson on the trace over one period.
  const int steps = 4096;
  const double h = orbit.period / steps;
  double integral = model.trace(0.0) + model.trace(orbit.period);
  for (int i = 1; i < steps; ++i)
    integral += (i % 2 == 1 ? 4.0 : 2.0) * model.trace(i * h);
  integral *= h / 3.0;

  return std::abs(logdet - integral);
}

double delay_model_defect(const PeriodicOrbit& orbit,
                          const ode::IntegratorConfig& cfg) {
  if (orbit.n < 2) throw DomainError("delay model needs a ring orbit");
  const int n = orbit.n;
  const double period = orbit.period;
  const double lag = (n - 1) * period / n;
  const net::FhnParams p = orbit.params;
  const double sigma = orbit.sigma;

  ode::DelayedField f = [p, sigma](double, std::span<const double> s,
                                   std::span<const double> sd,
                                   std::span<double> ds) {
    ds[0] = p.alpha * (s[1] - p.beta * s[0]);
    ds[1] = s[1] - p.gamma * s[1] * s[1] * s[1] - s[0] + sigma * (sd[1] - s[1]);
  };
  ode::DelayHistory history;
  history.delay = lag;
  std::vector<double> full(static_cast<std::size_t>(orbit.dim()));
  history.value = [&orbit, &full](double t, std::span<double> out) {
    orbit.eval(t, full);
    out[0] = full[0];
    out[1] = full[1];
  };

  ode::IntegratorConfig run = cfg;
  const int grid = 400;
  run.dense_output_dt = period / grid;
  ode::Trajectory tr = ode::integrate_dde(f, history, 2, 0.0, 2.0 * period, run);

  double defect = 0.0;
  for (int k = 0; k <= grid; ++k) {
    const std::size_t a = static_cast<std::size_t>(k);
    const std::size_t b = static_cast<std::size_t>(k + grid);
    if (b >= tr.size()) break;
    defect = std::max(defect, std::abs(tr.value(b, 0) - tr.value(a, 0)));
    defect = std::max(defect, std::abs(tr.value(b, 1) - tr.value(a, 1)));
  }
  return defect;
}

std::vector<BoundaryPoint> wave_stability_boundary(
    std::span<const int> n_values, double sigma_lo, double sigma_hi,
    double sigma_step, std::uint64_t seed, const net::FhnParams& p,
    const WaveSearchConfig& cfg) {
  if (!(sigma_step > 0.0) || !(sigma_hi > sigma_lo))
    throw DomainError("stability boundary needs an increasing sigma grid");

  struct Probe {
    std::optional<PeriodicOrbit> orbit;
    bool stable = false;
    double maxmult = nan_d;
  };

  std::vector<BoundaryPoint> out;
  for (int n : n_values) {
    auto probe = [&](double s) {
      Probe pr;
      try {
        std::optional<PeriodicOrbit> o = find_wave_orbit(n, s, seed, p, cfg);
        if (!o) return pr;
        FloquetResult fl = floquet_multipliers(*o, cfg.refine.integrator);
        pr.stable = fl.stable;
        pr.maxmult = fl.max_nontrivial;
        pr.orbit = std::move(o);
      } catch (const Error&) {
      }
      return pr;
    };

    // Natural continuation with adaptive sub-stepping. The orbit's period
    // moves quickly along sigma, so a whole grid step can overshoot the
    // shooting basin where the wave still exists; the increment shrinks on
    // failure and only an underflowing increment counts as the orbit
    // genuinely disappearing.
    auto advance = [&](const Probe& from, double from_sigma,
                      double target) -> Probe {
      const PeriodicOrbit* anchor = &*from.orbit;
      PeriodicOrbit held;
      double s = from_sigma;
      double step = target - from_sigma;
      while (s < target - 1e-12) {
        const double trial = (s + step >= target) ? target : s + step;
        try {
          PeriodicOrbit next = continue_wave_orbit(*anchor, trial, cfg.refine);
          held = std::move(next);
          anchor = &held;
          s = trial;
          if (s < target) step = std::min(2.0 * step, target - s);
        } catch (const Error&) {
          step *= 0.5;
          if (step < sigma_step / 64.0) return Probe{};
        }
      }
      Probe pr;
      try {
        FloquetResult fl = floquet_multipliers(held, cfg.refine.integrator);
        pr.stable = fl.stable;
        pr.maxmult = fl.max_nontrivial;
        pr.orbit = std::move(held);
      } catch (const Error&) {
      }
      return pr;
    };

    BoundaryPoint bp;
    bp.n = n;
    bp.sigma_low = nan_d;
    bp.sigma_high = nan_d;
    bp.max_multiplier_low = nan_d;
    bp.max_multiplier_high = nan_d;

    const int count =
        static_cast<int>(std::round((sigma_hi - sigma_lo) / sigma_step)) + 1;
    auto sigma_at = [&](int i) { return sigma_lo + i * sigma_step; };

    // Lock onto the wave by simulation at the lowest grid point possible.
    int base = -1;
    Probe base_probe;
    for (int i = 0; i < count; ++i) {
      base_probe = probe(sigma_at(i));
      if (base_probe.orbit) {
        base = i;
        break;
      }
    }
    if (base < 0) {
      bp.note = "no wave locked on the grid";
      out.push_back(bp);
      continue;
    }
    if (!base_probe.stable) {
      bp.note = "wave already unstable at the first located point";
      bp.sigma_high = sigma_at(base);
      bp.max_multiplier_high = base_probe.maxmult;
      out.push_back(bp);
      continue;
    }

    // Walk the grid upward by continuation until stability is lost.
    Probe low = std::move(base_probe);
    double low_sigma = sigma_at(base);
    bool found = false;
    for (int i = base + 1; i < count; ++i) {
      Probe pr = probe(sigma_at(i), &*low.orbit);
      if (pr.orbit && pr.stable) {
        low = std::move(pr);
        low_sigma = sigma_at(i);
        continue;
      }
      double a = low_sigma;
      double b = sigma_at(i);
      Probe high = std::move(pr);
      while (b - a > sigma_step / 8.0) {
        const double mid = 0.5 * (a + b);
        Probe pm = probe(mid, &*low.orbit);
        if (pm.orbit && pm.stable) {
          a = mid;
          low = std::move(pm);
        } else {
          b = mid;
          high = std::move(pm);
        }
      }
      bp.sigma_low = a;
      bp.sigma_high = b;
      bp.max_multiplier_low = low.maxmult;
      bp.max_multiplier_high = high.maxmult;
      found = true;
      break;
    }
    if (!found) {
      bp.note = "stable through the whole grid";
      bp.sigma_low = low_sigma;
      bp.max_multiplier_low = low.maxmult;
    }
    out.push_back(bp);
  }
  return out;
}

}  // namespace ringlab::waves
