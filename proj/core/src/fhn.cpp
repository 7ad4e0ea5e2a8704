#include "ringlab/fhn.hpp"

#include <cmath>

#include "ringlab/errors.hpp"
#include "ringlab/rng.hpp"

namespace ringlab::net {

std::vector<double> NetworkState::flat() const {
  const int nn = n();
  std::vector<double> x(2 * nn);
  for (int j = 0; j < nn; ++j) {
    x[2 * j] = z[j];
    x[2 * j + 1] = y[j];
  }
  return x;
}

NetworkState NetworkState::from_flat(std::span<const double> x) {
  if (x.size() % 2 != 0)
    throw DomainError("NetworkState::from_flat: odd length");
  const int nn = static_cast<int>(x.size() / 2);
  NetworkState s;
  s.z.resize(nn);
  s.y.resize(nn);
  for (int j = 0; j < nn; ++j) {
    s.z[j] = x[2 * j];
    s.y[j] = x[2 * j + 1];
  }
  return s;
}

void fhn_rhs(const FhnParams& p, const CouplingConfig& c,
             std::span<const double> x, std::span<double> dxdt) {
  const int n = c.topology.n();
  if (static_cast<int>(x.size()) != 2 * n)
    throw DomainError("fhn_rhs: state length does not match topology");
  const double alpha = p.alpha, beta = p.beta, gamma = p.gamma;
  const double sigma = c.sigma;

  for (int j = 0; j < n; ++j) {
    const double z = x[2 * j];
    const double y = x[2 * j + 1];
    dxdt[2 * j] = alpha * (y - beta * z);
    dxdt[2 * j + 1] = y - gamma * y * y * y - z;
  }

  switch (c.topology.kind()) {
    case TopologyKind::DirectedChain:
      for (int j = 1; j < n; ++j)
        dxdt[2 * j + 1] += sigma * (x[2 * (j - 1) + 1] - x[2 * j + 1]);
      break;
    case TopologyKind::DirectedRing:
      for (int j = 0; j < n; ++j) {
        const int l = (j + n - 1) % n;
        dxdt[2 * j + 1] += sigma * (x[2 * l + 1] - x[2 * j + 1]);
      }
      break;
    case TopologyKind::TwoRings: {
      const int k = n / 2;
      for (int j = 0; j < k; ++j) {
        const int l = (j + k - 1) % k;
        dxdt[2 * j + 1] += sigma * (x[2 * l + 1] - x[2 * j + 1]);
        const int jj = k + j;
        const int ll = k + l;
        dxdt[2 * jj + 1] += sigma * (x[2 * ll + 1] - x[2 * jj + 1]);
      }
      dxdt[1] += sigma * (x[2 * k + 1] - x[1]);
      dxdt[2 * k + 1] += sigma * (x[1] - x[2 * k + 1]);
      break;
    }
    case TopologyKind::Custom: {
      const Matrix& q = c.topology.adjacency();
      for (int j = 0; j < n; ++j) {
        double u = 0.0;
        const double yj = x[2 * j + 1];
        for (int l = 0; l < n; ++l) {
          const double w = q(j, l);
          if (w != 0.0) u += w * (x[2 * l + 1] - yj);
        }
        dxdt[2 * j + 1] += sigma * u;
      }
      break;
    }
  }
}

NetworkState fhn_vector_field(const NetworkState& s, const FhnParams& p,
                              const CouplingConfig& c) {
  auto x = s.flat();
  std::vector<double> d(x.size());
  fhn_rhs(p, c, x, d);
  return NetworkState::from_flat(d);
}

ode::VectorField make_fhn_field(const FhnParams& p, const CouplingConfig& c) {
  return [p, c](double, std::span<const double> x, std::span<double> dxdt) {
    fhn_rhs(p, c, x, dxdt);
  };
}

void fhn_jacobian(const FhnParams& p, const Matrix& sigma_l,
                  std::span<const double> x, Matrix& jac) {
  const int n = sigma_l.rows();
  if (static_cast<int>(x.size()) != 2 * n)
    throw DomainError("fhn_jacobian: state size does not match coupling");
  if (jac.rows() != 2 * n || jac.cols() != 2 * n)
    jac = Matrix(2 * n, 2 * n);
  else
    jac *= 0.0;
  for (int j = 0; j < n; ++j) {
    const double y = x[2 * j + 1];
    jac(2 * j, 2 * j) = -p.alpha * p.beta;
    jac(2 * j, 2 * j + 1) = p.alpha;
    jac(2 * j + 1, 2 * j) = -1.0;
    for (int l = 0; l < n; ++l) jac(2 * j + 1, 2 * l + 1) = -sigma_l(j, l);
    jac(2 * j + 1, 2 * j + 1) += 1.0 - 3.0 * p.gamma * y * y;
  }
}

std::vector<NetworkState> sample_initial_conditions(int n, int count,
                                                    std::uint64_t seed) {
  if (n < 1) throw DomainError("sample_initial_conditions: need n >= 1");
  if (count < 1) throw DomainError("sample_initial_conditions: need count >= 1");
  std::vector<NetworkState> draws;
  draws.reserve(count);
  for (int k = 0; k < count; ++k) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(k)));
    NetworkState s;
    s.z.resize(n);
    s.y.resize(n);
    for (int j = 0; j < n; ++j) {
      s.z[j] = rng.uniform(-ic_z_bound, ic_z_bound);
      s.y[j] = rng.uniform(-ic_y_bound, ic_y_bound);
    }
    draws.push_back(std::move(s));
  }
  return draws;
}

EnergyReport energy(const NetworkState& s, const FhnParams& p) {
  EnergyReport rep;
  const int n = s.n();
  rep.storage.resize(n);
  rep.supply.resize(n);
  for (int j = 0; j < n; ++j) {
    const double z = s.z[j], y = s.y[j];
    rep.storage[j] = 0.5 * (z * z / p.alpha + y * y);
    rep.supply[j] = p.beta * z * z + y * y * (p.gamma * y * y - 1.0);
    rep.v += rep.storage[j];
  }
  return rep;
}

double energy_decay_rate(const FhnParams& p) { return p.beta * p.alpha; }

double energy_inflow_per_node(const FhnParams& p) {
  const double c = p.alpha * p.beta + 1.0;
  return c * c / (4.0 * p.gamma);
}

}  // namespace ringlab::net
