#pragma once

#include <functional>

#include "ringlab/integrate.hpp"
#include "ringlab/linalg.hpp"

namespace ringlab::ode {

// Time-dependent system matrix writer: fills jac (dim x dim) at time t.
using MatrixField = std::function<void(double t, Matrix& jac)>;

// Fundamental solution M = Phi(t1) of Phi' = J(t) Phi, Phi(t0) = I,
// integrated column by column under the usual tolerance control.
Matrix integrate_variational(const MatrixField& jac, int dim, double t0,
                             double t1, const IntegratorConfig& cfg = {});

// log|det M| for the monodromy over [t0, t1], accumulated from per-segment
// determinants so that strong contraction cannot underflow the result.
double monodromy_log_abs_det(const MatrixField& jac, int dim, double t0,
                             double t1, int segments,
                             const IntegratorConfig& cfg = {});

}  // namespace ringlab::ode
