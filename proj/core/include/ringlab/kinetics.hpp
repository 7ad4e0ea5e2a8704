#pragma once

#include <cstdint>
#include <vector>

#include "ringlab/integrate.hpp"
#include "ringlab/linalg.hpp"

namespace ringlab::spectral {

// Generator of a first-order mass-action (Markov) system dP/dt = K P:
// off-diagonal entries are nonnegative rate constants k_ij (flow from state
// j into state i) and every column sums to zero.
class KineticMatrix {
public:
  explicit KineticMatrix(Matrix m);

  int n() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

private:
  Matrix m_;
};

// Probability vector on the simplex: entries >= 0 (tiny negative noise up
// to -1e-12 is clamped to zero), sum within 1e-9 of one.
class SimplexState {
public:
  explicit SimplexState(std::vector<double> p);
  static SimplexState vertex(int n, int i);
  static SimplexState uniform(int n);

  int n() const { return static_cast<int>(p_.size()); }
  double operator[](int i) const { return p_[i]; }
  const std::vector<double>& values() const { return p_; }

private:
  std::vector<double> p_;
};

// Uniform unidirectional cycle 1 -> 2 -> ... -> n -> 1 with rate q.
KineticMatrix build_cycle_kinetic(int n, double q);

// General kinetic matrix from a nonnegative rate table with zero diagonal;
// rates(i, j) is the rate from state j into state i.  Diagonal is derived
// so that columns sum to zero.
KineticMatrix build_custom_kinetic(const Matrix& rates);

// Random kinetic matrix: each off-diagonal rate is kept with probability
// `density` and drawn uniformly from [0, 1); resamples until the rate graph
// is strongly connected.
KineticMatrix random_kinetic(int n, double density, std::uint64_t seed);

// Unique stationary distribution (null vector of K scaled onto the
// simplex).  Throws NonUniqueEquilibriumError when the null space is not
// one dimensional.
SimplexState perron_vector(const KineticMatrix& k);

// True when k_ij * p_j == k_ji * p_i within tol for every pair.
bool check_detailed_balance(const KineticMatrix& k, const SimplexState& pstar,
                            double tol = 1e-10);

// max_ij |<K e_i, e_j> - <e_i, K e_j>| in the inner product weighted by
// 1/pstar; zero exactly when detailed balance holds.
double entropic_self_adjoint_defect(const KineticMatrix& k,
                                    const SimplexState& pstar);

// Solve dP/dt = K P from P0 over [0, t_final].  The default tolerances are
// tight because the system is small and linear and the result is promised
// to track the matrix exponential within 1e-6.
ode::Trajectory evolve_master(
    const KineticMatrix& k, const SimplexState& p0, double t_final,
    const ode::IntegratorConfig& cfg = {1e-9, 1e-11, 0.0, 0.0, 0.1});

}  // namespace ringlab::spectral
