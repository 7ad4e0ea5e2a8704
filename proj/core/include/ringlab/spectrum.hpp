#pragma once

#include <complex>
#include <vector>

#include "ringlab/linalg.hpp"

namespace ringlab::spectral {

// Eigenvalues of a general real square matrix, sorted by real part and then
// by imaginary part.  Classic dense real-Schur route: Parlett-Reinsch
// balancing, elimination to upper Hessenberg form, then Francis double-shift
// QR iteration.  Throws ConvergenceError (with the iteration count) if the
// QR sweep has not deflated every eigenvalue after max_iterations; the
// default budget is 100*n.
std::vector<std::complex<double>> eigenvalues(const Matrix& a,
                                              long max_iterations = -1);

// Analytic spectrum of the uniform cyclic kinetic matrix with rate q:
// lambda_k = -q + q*exp(2*pi*i*k/n), k = 0..n-1, in the same sort order
// as eigenvalues().
std::vector<std::complex<double>> circulant_cycle_spectrum(int n, double q);

struct SpectrumReport {
  std::vector<std::complex<double>> eigenvalues;
  double max_ratio = 0.0;        // max |Im|/|Re| over nonzero eigenvalues
  double bound = 0.0;            // cot(pi/n)
  bool bound_satisfied = false;  // max_ratio <= bound + 1e-9 and no
                                 // purely imaginary eigenvalue
  bool purely_imaginary = false; // some eigenvalue with modulus > zero_tol
                                 // has |Re| < zero_tol
  double zero_tol = 0.0;
};

// Extremal |Im|/|Re| ratio over eigenvalues of modulus > zero_tol, compared
// against cot(pi/n) with n = spectrum size.  Throws DegenerateSpectrumError
// when every eigenvalue has modulus <= zero_tol.
SpectrumReport max_im_re_ratio(const std::vector<std::complex<double>>& eigs,
                               double zero_tol = 1e-9);

}  // namespace ringlab::spectral
