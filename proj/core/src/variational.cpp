#include "ringlab/variational.hpp"

#include <cmath>
#include <vector>

#include "ringlab/errors.hpp"

namespace ringlab::ode {

namespace {

// Integrates one column of the variational system with the exact same
// stepper used for states elsewhere.
std::vector<double> flow_column(const MatrixField& jac, int dim, double t0,
                                double t1, int column,
                                const IntegratorConfig& cfg) {
  Matrix j(dim, dim);
  VectorField field = [&jac, &j, dim](double t, std::span<const double> x,
                                      std::span<double> dxdt) {
    jac(t, j);
    for (int r = 0; r < dim; ++r) {
      double acc = 0.0;
      for (int c = 0; c < dim; ++c) acc += j(r, c) * x[c];
      dxdt[r] = acc;
    }
  };
  std::vector<double> x0(dim, 0.0);
  x0[column] = 1.0;
  std::vector<double> out(dim);
  integrate_steps(field, x0, t0, t1, cfg,
                  [&out](const DenseSegment& seg) {
                    seg.eval(seg.t0 + seg.h, out);
                  });
  return out;
}

}  // namespace

Matrix integrate_variational(const MatrixField& jac, int dim, double t0,
                             double t1, const IntegratorConfig& cfg) {
  if (dim <= 0) throw DomainError("variational dimension must be positive");
  Matrix m(dim, dim);
  for (int col = 0; col < dim; ++col) {
    std::vector<double> phi = flow_column(jac, dim, t0, t1, col, cfg);
    for (int r = 0; r < dim; ++r) m(r, col) = phi[r];
  }
  return m;
}

double monodromy_log_abs_det(const MatrixField& jac, int dim, double t0,
                             double t1, int segments,
                             const IntegratorConfig& cfg) {
  if (segments <= 0) throw DomainError("segment count must be positive");
  double total = 0.0;
  const double h = (t1 - t0) / segments;
  for (int s = 0; s < segments; ++s) {
    const double a = t0 + s * h;
    const double b = (s + 1 == segments) ? t1 : a + h;
    Matrix m = integrate_variational(jac, dim, a, b, cfg);
    LuDecomposition lu = lu_decompose(m);
    if (lu.singular)
      throw DegenerateSpectrumError(
          "segment transition matrix is numerically singular");
    total += lu.log_abs_det();
  }
  return total;
}

}  // namespace ringlab::ode
