#include "ringlab/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ringlab/errors.hpp"

namespace ringlab::spectral {

namespace {

// Work array with 1-based indexing, matching the classic algorithm texts.
class Work {
public:
  explicit Work(const Matrix& m) : n_(m.rows()), a_((n_ + 1) * (n_ + 1), 0.0) {
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) (*this)(i + 1, j + 1) = m(i, j);
  }
  double& operator()(int i, int j) { return a_[i * (n_ + 1) + j]; }
  double operator()(int i, int j) const { return a_[i * (n_ + 1) + j]; }
  int n() const { return n_; }

private:
  int n_;
  std::vector<double> a_;
};

// Parlett-Reinsch balancing: similarity scaling by powers of the radix so
// that row and column norms match.  Eigenvalues are unchanged.
void balance(Work& a) {
  const int n = a.n();
  const double radix = 2.0;
  const double sqrdx = radix * radix;
  bool done = false;
  while (!done) {
    done = true;
    for (int i = 1; i <= n; ++i) {
      double r = 0.0, c = 0.0;
      for (int j = 1; j <= n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        g = 1.0 / f;
        for (int j = 1; j <= n; ++j) a(i, j) *= g;
        for (int j = 1; j <= n; ++j) a(j, i) *= f;
      }
    }
  }
}

// Reduction to upper Hessenberg form by stabilized elementary similarity
// transformations (pivoted Gaussian elimination variant).
void hessenberg(Work& a) {
  const int n = a.n();
  for (int m = 2; m < n; ++m) {
    double x = 0.0;
    int piv = m;
    for (int j = m; j <= n; ++j) {
      if (std::abs(a(j, m - 1)) > std::abs(x)) {
        x = a(j, m - 1);
        piv = j;
      }
    }
    if (piv != m) {
      for (int j = m - 1; j <= n; ++j) std::swap(a(piv, j), a(m, j));
      for (int j = 1; j <= n; ++j) std::swap(a(j, piv), a(j, m));
    }
    if (x == 0.0) continue;
    for (int i = m + 1; i <= n; ++i) {
      double y = a(i, m - 1);
      if (y == 0.0) continue;
      y /= x;
      a(i, m - 1) = 0.0;
      for (int j = m; j <= n; ++j) a(i, j) -= y * a(m, j);
      for (int j = 1; j <= n; ++j) a(j, m) += y * a(j, i);
    }
  }
}

inline double sign_of(double a, double b) {
  return b >= 0.0 ? std::abs(a) : -std::abs(a);
}

// Francis double-shift QR iteration on an upper Hessenberg matrix;
// eigenvalues only.  `budget` is the total sweep budget for the whole
// matrix; the count used is returned through `iterations`.
void hqr(Work& a, std::vector<double>& wr, std::vector<double>& wi,
         long budget, long& iterations) {
  const int n = a.n();
  double p = 0, q = 0, r = 0, z = 0, s = 0, x = 0, y = 0, w = 0, v = 0, u = 0;

  double anorm = 0.0;
  for (int i = 1; i <= n; ++i)
    for (int j = std::max(i - 1, 1); j <= n; ++j) anorm += std::abs(a(i, j));
  if (anorm == 0.0) anorm = 1.0;

  iterations = 0;
  int nn = n;
  double t = 0.0;
  while (nn >= 1) {
    int its = 0;
    int l = 0;
    do {
      for (l = nn; l >= 2; --l) {
        s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(a(l, l - 1)) + s == s) {
          a(l, l - 1) = 0.0;
          break;
        }
      }
      x = a(nn, nn);
      if (l == nn) {
        wr[nn - 1] = x + t;
        wi[nn - 1] = 0.0;
        --nn;
      } else {
        y = a(nn - 1, nn - 1);
        w = a(nn, nn - 1) * a(nn - 1, nn);
        if (l == nn - 1) {
          p = 0.5 * (y - x);
          q = p * p + w;
          z = std::sqrt(std::abs(q));
          x += t;
          if (q >= 0.0) {
            z = p + sign_of(z, p);
            wr[nn - 1] = wr[nn - 2] = x + z;
            if (z != 0.0) wr[nn - 1] = x - w / z;
            wi[nn - 1] = wi[nn - 2] = 0.0;
          } else {
            wr[nn - 1] = wr[nn - 2] = x + p;
            wi[nn - 2] = z;
            wi[nn - 1] = -z;
          }
          nn -= 2;
        } else {
          if (iterations >= budget)
            throw ConvergenceError(
                "QR iteration exceeded its budget of " +
                    std::to_string(budget) + " sweeps after " +
                    std::to_string(iterations) + " iterations",
                iterations);
          if (its != 0 && its % 10 == 0) {
            t += x;
            for (int i = 1; i <= nn; ++i) a(i, i) -= x;
            s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
            y = x = 0.75 * s;
            w = -0.4375 * s * s;
          }
          ++its;
          ++iterations;
          int m;
          for (m = nn - 2; m >= l; --m) {
            z = a(m, m);
            r = x - z;
            s = y - z;
            p = (r * s - w) / a(m + 1, m) + a(m, m + 1);
            q = a(m + 1, m + 1) - z - r - s;
            r = a(m + 2, m + 1);
            s = std::abs(p) + std::abs(q) + std::abs(r);
            p /= s;
            q /= s;
            r /= s;
            if (m == l) break;
            u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
            v = std::abs(p) *
                (std::abs(a(m - 1, m - 1)) + std::abs(z) +
                 std::abs(a(m + 1, m + 1)));
            if (u + v == v) break;
          }
          for (int i = m + 2; i <= nn; ++i) {
            a(i, i - 2) = 0.0;
            if (i != m + 2) a(i, i - 3) = 0.0;
          }
          for (int k = m; k <= nn - 1; ++k) {
            if (k != m) {
              p = a(k, k - 1);
              q = a(k + 1, k - 1);
              r = 0.0;
              if (k != nn - 1) r = a(k + 2, k - 1);
              x = std::abs(p) + std::abs(q) + std::abs(r);
              if (x != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            s = sign_of(std::sqrt(p * p + q * q + r * r), p);
            if (s == 0.0) continue;
            if (k == m) {
              if (l != m) a(k, k - 1) = -a(k, k - 1);
            } else {
              a(k, k - 1) = -s * x;
            }
            p += s;
            x = p / s;
            y = q / s;
            z = r / s;
            q /= p;
            r /= p;
            for (int j = k; j <= nn; ++j) {
              p = a(k, j) + q * a(k + 1, j);
              if (k != nn - 1) {
                p += r * a(k + 2, j);
                a(k + 2, j) -= p * z;
              }
              a(k + 1, j) -= p * y;
              a(k, j) -= p * x;
            }
            const int mmin = nn < k + 3 ? nn : k + 3;
            for (int i = l; i <= mmin; ++i) {
              p = x * a(i, k) + y * a(i, k + 1);
              if (k != nn - 1) {
                p += z * a(i, k + 2);
                a(i, k + 2) -= p * r;
              }
              a(i, k + 1) -= p * q;
              a(i, k) -= p;
            }
          }
        }
      }
    } while (l < nn - 1);
  }
}

void sort_spectrum(std::vector<std::complex<double>>& eigs) {
  std::sort(eigs.begin(), eigs.end(),
            [](const std::complex<double>& a, const std::complex<double>& b) {
              if (a.real() != b.real()) return a.real() < b.real();
              return a.imag() < b.imag();
            });
}

}  // namespace

std::vector<std::complex<double>> eigenvalues(const Matrix& m,
                                              long max_iterations) {
  if (m.rows() != m.cols())
    throw DomainError("eigenvalues: matrix must be square");
  const int n = m.rows();
  if (n == 0) return {};
  if (max_iterations < 0) max_iterations = 100L * n;

  Work a(m);
  balance(a);
  hessenberg(a);
  std::vector<double> wr(n, 0.0), wi(n, 0.0);
  long used = 0;
  hqr(a, wr, wi, max_iterations, used);

  std::vector<std::complex<double>> eigs(n);
  for (int i = 0; i < n; ++i) eigs[i] = {wr[i], wi[i]};
  sort_spectrum(eigs);
  return eigs;
}

std::vector<std::complex<double>> circulant_cycle_spectrum(int n, double q) {
  if (n < 2) throw DomainError("circulant_cycle_spectrum: need n >= 2");
  if (q <= 0.0) throw DomainError("circulant_cycle_spectrum: need q > 0");
  std::vector<std::complex<double>> eigs(n);
  for (int k = 0; k < n; ++k) {
    const double phi = 2.0 * std::numbers::pi * k / n;
    eigs[k] = {q * (std::cos(phi) - 1.0), q * std::sin(phi)};
  }
  sort_spectrum(eigs);
  return eigs;
}

SpectrumReport max_im_re_ratio(const std::vector<std::complex<double>>& eigs,
                               double zero_tol) {
  if (eigs.empty()) throw DomainError("max_im_re_ratio: empty spectrum");
  SpectrumReport rep;
  rep.eigenvalues = eigs;
  rep.zero_tol = zero_tol;
  const int n = static_cast<int>(eigs.size());
  rep.bound = 1.0 / std::tan(std::numbers::pi / n);

  bool any_nonzero = false;
  double worst = 0.0;
  for (const auto& ev : eigs) {
    if (std::abs(ev) <= zero_tol) continue;
    any_nonzero = true;
    const double re = std::abs(ev.real());
    const double im = std::abs(ev.imag());
    if (re < zero_tol) rep.purely_imaginary = true;
    const double ratio =
        re == 0.0 ? std::numeric_limits<double>::infinity() : im / re;
    if (ratio > worst) worst = ratio;
  }
  if (!any_nonzero)
    throw DegenerateSpectrumError(
        "max_im_re_ratio: every eigenvalue is below zero_tol");
  rep.max_ratio = worst;
  rep.bound_satisfied =
      !rep.purely_imaginary && worst <= rep.bound + 1e-9;
  return rep;
}

}  // namespace ringlab::spectral
