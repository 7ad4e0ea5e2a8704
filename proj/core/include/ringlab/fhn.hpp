#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ringlab/integrate.hpp"
#include "ringlab/topology.hpp"

namespace ringlab::net {

struct FhnParams {
  double alpha = 8.0 / 100.0;
  double beta = 8.0 / 10.0;
  double gamma = 1.0 / 3.0;
};

// Bounds of the initial condition box.
inline constexpr double ic_y_bound = 2.598076211353316;  // (3/2)*sqrt(3)
inline constexpr double ic_z_bound = 3.247595264191645;  // (15/8)*sqrt(3)

// Node states. The flat layout interleaves per node: [z0, y0, z1, y1, ...],
// matching the Kronecker structure of the coupled linearization.
struct NetworkState {
  std::vector<double> z;
  std::vector<double> y;

  int n() const { return static_cast<int>(z.size()); }
  std::vector<double> flat() const;
  static NetworkState from_flat(std::span<const double> x);
};

// Right hand side of the coupled system
//   dz_j = alpha*(y_j - beta*z_j)
//   dy_j = y_j - gamma*y_j^3 - z_j + sigma*sum_l q_jl*(y_l - y_j)
// on the flat interleaved layout.
void fhn_rhs(const FhnParams& p, const CouplingConfig& c,
             std::span<const double> x, std::span<double> dxdt);

NetworkState fhn_vector_field(const NetworkState& s, const FhnParams& p,
                              const CouplingConfig& c);

// Closure for the integrator; captures copies of params and coupling.
ode::VectorField make_fhn_field(const FhnParams& p, const CouplingConfig& c);

// State Jacobian of the network field on the flat layout. sigma_l must hold
// sigma * laplacian(topology); jac is resized and overwritten.
void fhn_jacobian(const FhnParams& p, const Matrix& sigma_l,
                  std::span<const double> x, Matrix& jac);

// `count` independent draws from the uniform box |y_j| <= (3/2)sqrt(3),
// |z_j| <= (15/8)sqrt(3); draw k uses the sub-seed mix(seed, k).
std::vector<NetworkState> sample_initial_conditions(int n, int count,
                                                    std::uint64_t seed);

struct EnergyReport {
  double v = 0.0;                // total storage, sum of storage[j]
  std::vector<double> storage;   // S_j = (z^2/alpha + y^2)/2
  std::vector<double> supply;    // H_j = beta*z^2 + y^2*(gamma*y^2 - 1)
};

EnergyReport energy(const NetworkState& s, const FhnParams& p);

// Dissipation constants: dV/dt <= -decay*V + n*inflow along trajectories.
double energy_decay_rate(const FhnParams& p);       // beta*alpha
double energy_inflow_per_node(const FhnParams& p);  // (alpha*beta+1)^2/(4 gamma)

}  // namespace ringlab::net
