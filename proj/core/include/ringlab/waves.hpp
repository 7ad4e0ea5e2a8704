#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ringlab/detect.hpp"
#include "ringlab/fhn.hpp"
#include "ringlab/integrate.hpp"
#include "ringlab/linalg.hpp"

namespace ringlab::waves {

// Periodic solution stored on a uniform phase grid with field values for
// cubic Hermite evaluation in between. Row i is the state at i*period/m,
// row m repeats phase 0 up to the closure residual.
struct PeriodicOrbit {
  int n = 0;  // nodes; coupling is the directed ring for n >= 2
  double sigma = 0.0;
  net::FhnParams params;
  double period = 0.0;
  double shift = 0.0;     // neighbour time shift (0 for a single node)
  double residual = 0.0;  // closure error of the shooting solve
  std::vector<double> states;
  std::vector<double> derivs;

  int dim() const { return 2 * n; }
  std::size_t samples() const;                       // cells per period
  void eval(double t, std::span<double> out) const;  // t taken mod period
  std::vector<double> state_at(double t) const;
};

struct OrbitRefineConfig {
  ode::IntegratorConfig integrator{1e-10, 1e-12, 0.0, 0.0, 0.0};
  int max_iterations = 12;
  double residual_target = 1e-6;
  int orbit_samples = 1024;
  int section_component = -1;  // phase pin; < 0 picks the fastest one
};

// Newton shooting around a near-periodic loop of an autonomous field:
// refines anchor state and period together, with the phase fixed by
// freezing the section component of the anchor. jac fills the state
// Jacobian used for the monodromy. Throws ConvergenceError carrying the
// best residual when the closure error cannot reach the target. The result
// carries only the phase grid; sigma, params and shift stay at their
// defaults, and JacobianModel and the Floquet helpers read them, so callers
// composing those directly must fill the metadata first (find_wave_orbit,
// continue_wave_orbit and single_node_cycle already do).
PeriodicOrbit refine_orbit(
    const ode::VectorField& field,
    const std::function<void(std::span<const double>, Matrix&)>& jac, int dim,
    std::span<const double> x_near, double period_guess,
    const OrbitRefineConfig& cfg = {});

// Limit cycle of one uncoupled oscillator.
PeriodicOrbit single_node_cycle(const net::FhnParams& p = {},
                                const OrbitRefineConfig& cfg = {});

// sigma * laplacian for the directed ring (a 1x1 zero for n == 1), the
// coupling block every orbit in this module is linearized against.
Matrix ring_coupling_matrix(int n, double sigma);

// MatrixField-compatible linearization along an orbit.
class JacobianModel {
public:
  explicit JacobianModel(const PeriodicOrbit& orbit);
  void operator()(double t, Matrix& jac) const;
  double trace(double t) const;
  int dim() const { return orbit_->dim(); }

private:
  const PeriodicOrbit* orbit_;
  Matrix sigma_l_;
  mutable std::vector<double> x_;
};

struct WaveSearchConfig {
  double t_max = 20000.0;
  double checkpoint_interval = 1000.0;
  detect::DetectConfig detect;
  ode::IntegratorConfig sim;  // transient integration settings
  OrbitRefineConfig refine;
  double ic_jitter = 0.01;  // perturbation of the staggered seed
};

// Mode-1 rotating wave on the directed ring: seeds the staggered profile
// from the single-node cycle (node j placed period*j/n behind node 0),
// settles the transient under the classification protocol, polishes the
// orbit by shooting and measures the neighbour shift on the result.
// Returns nothing when the run does not lock onto a mode-1 wave. Shooting
// failures propagate as ConvergenceError.
std::optional<PeriodicOrbit> find_wave_orbit(int n, double sigma,
                                             std::uint64_t seed,
                                             const net::FhnParams& p = {},
                                             const WaveSearchConfig& cfg = {});

// Natural continuation of a ring wave to a new coupling strength, reusing
// the previous anchor and period as the shooting seed. Works on unstable
// branches, where transient simulation cannot settle onto the wave.
PeriodicOrbit continue_wave_orbit(const PeriodicOrbit& orbit, double sigma,
                                  const OrbitRefineConfig& cfg = {});

// Residual of the kinematic closure between period, neighbour shift and
// ring size: |(n-1)*T/(T - shift) - n|.
double closure_relation_defect(const PeriodicOrbit& orbit);
bool check_closure_relation(const PeriodicOrbit& orbit, double eps = 0.01);

struct FloquetResult {
  std::vector<std::complex<double>> multipliers;  // descending modulus
  double trivial_defect = 0.0;  // distance of the closest multiplier to 1
  double max_nontrivial = 0.0;  // largest modulus among the others
  bool stable = false;          // max_nontrivial < 1 - margin
  double margin = 1e-3;
};

FloquetResult floquet_multipliers(
    const PeriodicOrbit& orbit,
    const ode::IntegratorConfig& cfg = {1e-10, 1e-12, 0.0, 0.0, 0.0});

// |log det M - integral of tr J| over one period, the determinant
// accumulated segment-wise so strong contraction stays representable.
double liouville_defect(
    const PeriodicOrbit& orbit, int segments = 16,
    const ode::IntegratorConfig& cfg = {1e-10, 1e-12, 0.0, 0.0, 0.0});

// Replays node 0 of the wave through the scalar delay model with lag
// (n-1)*T/n over two periods and reports the worst deviation from
// T-periodicity.
double delay_model_defect(const PeriodicOrbit& orbit,
                          const ode::IntegratorConfig& cfg = {});

struct BoundaryPoint {
  int n = 0;
  double sigma_low = 0.0;   // last coupling with a stable wave
  double sigma_high = 0.0;  // first coupling without one
  double max_multiplier_low = 0.0;
  double max_multiplier_high = 0.0;  // NaN when no orbit converged there
  std::string note;
};

// Locates, per ring size, the coupling where the mode-1 wave loses
// stability: grid scan with orbit continuation, then bisection of the
// bracketing interval down to sigma_step/8.
std::vector<BoundaryPoint> wave_stability_boundary(
    std::span<const int> n_values, double sigma_lo, double sigma_hi,
    double sigma_step, std::uint64_t seed, const net::FhnParams& p = {},
    const WaveSearchConfig& cfg = {});

}  // namespace ringlab::waves
