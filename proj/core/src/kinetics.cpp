#include "ringlab/kinetics.hpp"

#include <cmath>
#include <string>

#include "ringlab/errors.hpp"
#include "ringlab/rng.hpp"

namespace ringlab::spectral {

namespace {

double max_abs(const Matrix& m) {
  double best = 0.0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      best = std::max(best, std::abs(m(i, j)));
  return best;
}

// Strong connectivity of the directed rate graph (edge j -> i when
// m(i, j) > 0), via forward and backward reachability from node 0.
bool strongly_connected(const Matrix& m) {
  const int n = m.rows();
  auto reachable = [&](bool forward) {
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int w = 0; w < n; ++w) {
        if (seen[w] || w == v) continue;
        const double rate = forward ? m(w, v) : m(v, w);
        if (rate > 0.0) {
          seen[w] = 1;
          ++count;
          stack.push_back(w);
        }
      }
    }
    return count == n;
  };
  return reachable(true) && reachable(false);
}

}  // namespace

KineticMatrix::KineticMatrix(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols())
    throw DomainError("KineticMatrix: matrix must be square");
  if (m_.rows() < 2) throw DomainError("KineticMatrix: need n >= 2");
  const double scale = std::max(1.0, max_abs(m_));
  for (int j = 0; j < m_.cols(); ++j) {
    double col_sum = 0.0;
    for (int i = 0; i < m_.rows(); ++i) {
      if (i != j && m_(i, j) < 0.0)
        throw DomainError("KineticMatrix: negative off-diagonal rate at (" +
                          std::to_string(i) + "," + std::to_string(j) + ")");
      col_sum += m_(i, j);
    }
    if (std::abs(col_sum) > 1e-12 * scale)
      throw DomainError("KineticMatrix: column " + std::to_string(j) +
                        " does not sum to zero");
  }
}

SimplexState::SimplexState(std::vector<double> p) : p_(std::move(p)) {
  if (p_.empty()) throw DomainError("SimplexState: empty vector");
  double sum = 0.0;
  for (double& v : p_) {
    if (v < 0.0) {
      if (v < -1e-12)
        throw DomainError("SimplexState: negative component " +
                          std::to_string(v));
      v = 0.0;
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw DomainError("SimplexState: components sum to " +
                      std::to_string(sum) + ", not 1");
}

SimplexState SimplexState::vertex(int n, int i) {
  if (n < 1 || i < 0 || i >= n) throw DomainError("SimplexState::vertex");
  std::vector<double> p(n, 0.0);
  p[i] = 1.0;
  return SimplexState(std::move(p));
}

SimplexState SimplexState::uniform(int n) {
  if (n < 1) throw DomainError("SimplexState::uniform");
  return SimplexState(std::vector<double>(n, 1.0 / n));
}

KineticMatrix build_cycle_kinetic(int n, double q) {
  if (n < 2) throw DomainError("build_cycle_kinetic: need n >= 2");
  if (!(q > 0.0)) throw DomainError("build_cycle_kinetic: need q > 0");
  Matrix m(n, n);
  for (int j = 0; j < n; ++j) {
    m(j, j) = -q;
    m((j + 1) % n, j) = q;
  }
  return KineticMatrix(std::move(m));
}

KineticMatrix build_custom_kinetic(const Matrix& rates) {
  if (rates.rows() != rates.cols())
    throw DomainError("build_custom_kinetic: rate table must be square");
  const int n = rates.rows();
  Matrix m(n, n);
  for (int j = 0; j < n; ++j) {
    if (rates(j, j) != 0.0)
      throw DomainError("build_custom_kinetic: diagonal must be zero");
    double out = 0.0;
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      const double r = rates(i, j);
      if (r < 0.0)
        throw DomainError("build_custom_kinetic: negative rate at (" +
                          std::to_string(i) + "," + std::to_string(j) + ")");
      m(i, j) = r;
      out += r;
    }
    m(j, j) = -out;
  }
  return KineticMatrix(std::move(m));
}

KineticMatrix random_kinetic(int n, double density, std::uint64_t seed) {
  if (n < 2) throw DomainError("random_kinetic: need n >= 2");
  if (!(density > 0.0) || density > 1.0)
    throw DomainError("random_kinetic: density must be in (0, 1]");
  Rng rng(mix_seed(seed, static_cast<std::uint64_t>(n)));
  constexpr int max_attempts = 10000;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Matrix rates(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const bool keep = rng.next_double() < density;
        const double value = rng.next_double();
        if (keep) rates(i, j) = value;
      }
    if (strongly_connected(rates)) return build_custom_kinetic(rates);
  }
  throw ConvergenceError(
      "random_kinetic: no strongly connected sample after " +
          std::to_string(max_attempts) + " attempts",
      max_attempts);
}

SimplexState perron_vector(const KineticMatrix& k) {
  const int n = k.n();
  auto lu = lu_decompose(k.matrix());
  const double scale = std::max(1.0, k.matrix().inf_norm());
  const double tol = 1e-8 * scale;
  const int null_dim = lu.null_dimension(tol);
  if (null_dim != 1)
    throw NonUniqueEquilibriumError(
        "perron_vector: null space dimension is " + std::to_string(null_dim) +
            ", stationary distribution is not unique",
        null_dim);

  // Solve U x = 0 with the free variable at the (single) tiny pivot.
  int free_idx = 0;
  double smallest = std::abs(lu.lu(0, 0));
  for (int i = 1; i < n; ++i) {
    const double u = std::abs(lu.lu(i, i));
    if (u < smallest) {
      smallest = u;
      free_idx = i;
    }
  }
  std::vector<double> x(n, 0.0);
  x[free_idx] = 1.0;
  for (int i = free_idx - 1; i >= 0; --i) {
    double s = 0.0;
    for (int j = i + 1; j <= free_idx; ++j) s += lu.lu(i, j) * x[j];
    x[i] = -s / lu.lu(i, i);
  }

  double sum = 0.0;
  for (double v : x) sum += v;
  if (std::abs(sum) < 1e-300)
    throw NonUniqueEquilibriumError(
        "perron_vector: null vector has zero mass", 1);
  std::vector<double> p(n);
  for (int i = 0; i < n; ++i) {
    p[i] = x[i] / sum;
    if (p[i] < 0.0 && p[i] > -1e-12) p[i] = 0.0;
  }
  return SimplexState(std::move(p));
}

bool check_detailed_balance(const KineticMatrix& k, const SimplexState& pstar,
                            double tol) {
  const int n = k.n();
  if (pstar.n() != n)
    throw DomainError("check_detailed_balance: size mismatch");
  for (int i = 0; i < n; ++i)
    if (pstar[i] <= 0.0)
      throw DomainError(
          "check_detailed_balance: stationary distribution has a zero "
          "component");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(k(i, j) * pstar[j] - k(j, i) * pstar[i]) > tol)
        return false;
  return true;
}

double entropic_self_adjoint_defect(const KineticMatrix& k,
                                    const SimplexState& pstar) {
  const int n = k.n();
  if (pstar.n() != n)
    throw DomainError("entropic_self_adjoint_defect: size mismatch");
  for (int i = 0; i < n; ++i)
    if (pstar[i] <= 0.0)
      throw DomainError(
          "entropic_self_adjoint_defect: stationary distribution has a zero "
          "component");
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double d = std::abs(k(j, i) / pstar[j] - k(i, j) / pstar[i]);
      worst = std::max(worst, d);
    }
  return worst;
}

ode::Trajectory evolve_master(const KineticMatrix& k, const SimplexState& p0,
                              double t_final,
                              const ode::IntegratorConfig& cfg) {
  if (p0.n() != k.n()) throw DomainError("evolve_master: size mismatch");
  if (!(t_final >= 0.0)) throw DomainError("evolve_master: need t_final >= 0");
  const Matrix& m = k.matrix();
  const int n = k.n();
  ode::VectorField field = [&m, n](double, std::span<const double> p,
                                   std::span<double> dpdt) {
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += m(i, j) * p[j];
      dpdt[i] = s;
    }
  };
  return ode::integrate(field, p0.values(), 0.0, t_final, cfg);
}

}  // namespace ringlab::spectral
