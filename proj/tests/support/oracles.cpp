#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oracles {

using ringlab::Matrix;

std::vector<double> charpoly(const Matrix& a) {
  const int n = a.rows();
  if (n != a.cols()) throw std::invalid_argument("charpoly: square only");
  // Faddeev-LeVerrier: M_1 = A, c_{n-1} = -tr M_1,
  // M_{k+1} = A (M_k + c_{n-k} I), c_{n-k-1} = -tr(M_{k+1}) / (k+1).
  std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
  c[static_cast<std::size_t>(n)] = 1.0;
  Matrix m = a;
  for (int k = 1; k <= n; ++k) {
    double tr = 0.0;
    for (int i = 0; i < n; ++i) tr += m(i, i);
    const double ck = -tr / k;
    c[static_cast<std::size_t>(n - k)] = ck;
    if (k == n) break;
    for (int i = 0; i < n; ++i) m(i, i) += ck;
    m = a * m;
  }
  return c;
}

std::vector<std::complex<double>> poly_roots(std::span<const double> coeffs) {
  const int n = static_cast<int>(coeffs.size()) - 1;
  if (n < 1) return {};
  if (coeffs[static_cast<std::size_t>(n)] != 1.0)
    throw std::invalid_argument("poly_roots: monic coefficients expected");

  auto eval = [&](std::complex<double> z) {
    std::complex<double> p = 1.0;
    for (int k = n - 1; k >= 0; --k)
      p = p * z + coeffs[static_cast<std::size_t>(k)];
    return p;
  };

  // Roots lie within 1 + max|c_k|; start on a spiral inside that disc.
  double radius = 0.0;
  for (int k = 0; k < n; ++k)
    radius = std::max(radius, std::abs(coeffs[static_cast<std::size_t>(k)]));
  radius = 1.0 + radius;

  std::vector<std::complex<double>> z(static_cast<std::size_t>(n));
  const std::complex<double> seed(0.4, 0.9);
  std::complex<double> p = 1.0;
  for (int i = 0; i < n; ++i) {
    p *= seed;
    z[static_cast<std::size_t>(i)] = radius * p / std::abs(p) *
                                     (0.3 + 0.6 * (i + 1.0) / n);
  }

  for (int it = 0; it < 2000; ++it) {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      std::complex<double> denom = 1.0;
      for (int j = 0; j < n; ++j)
        if (j != i)
          denom *= z[static_cast<std::size_t>(i)] -
                   z[static_cast<std::size_t>(j)];
      if (std::abs(denom) == 0.0) {
        z[static_cast<std::size_t>(i)] += 1e-8 * seed;
        worst = 1.0;
        continue;
      }
      const std::complex<double> step =
          eval(z[static_cast<std::size_t>(i)]) / denom;
      z[static_cast<std::size_t>(i)] -= step;
      worst = std::max(worst, std::abs(step));
    }
    if (worst < 1e-14 * std::max(1.0, radius)) break;
  }
  return z;
}

std::vector<std::complex<double>> eigenvalues_charpoly(const Matrix& a) {
  auto roots = poly_roots(charpoly(a));
  std::sort(roots.begin(), roots.end(),
            [](const std::complex<double>& x, const std::complex<double>& y) {
              if (x.real() != y.real()) return x.real() < y.real();
              return x.imag() < y.imag();
            });
  return roots;
}

namespace {

Matrix solve_matrix(const Matrix& a, const Matrix& b) {
  const auto lu = ringlab::lu_decompose(a);
  Matrix x(b.rows(), b.cols());
  std::vector<double> col(static_cast<std::size_t>(b.rows()));
  for (int j = 0; j < b.cols(); ++j) {
    for (int i = 0; i < b.rows(); ++i)
      col[static_cast<std::size_t>(i)] = b(i, j);
    const auto sol = lu.solve(col);
    for (int i = 0; i < b.rows(); ++i)
      x(i, j) = sol[static_cast<std::size_t>(i)];
  }
  return x;
}

}  // namespace

Matrix expm(const Matrix& a) {
  const int n = a.rows();
  // Scaling and squaring with the [13/13] Pade approximant.
  const double theta13 = 5.371920351148152;
  double norm = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += std::abs(a(i, j));
    norm = std::max(norm, row);
  }
  int squarings = 0;
  if (norm > theta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));
  }
  Matrix as = a;
  as *= std::pow(2.0, -squarings);

  static const double b[] = {64764752532480000.0, 32382376266240000.0,
                             7771770303897600.0,  1187353796428800.0,
                             129060195264000.0,   10559470521600.0,
                             670442572800.0,      33522128640.0,
                             1323241920.0,        40840800.0,
                             960960.0,            16380.0,
                             182.0,               1.0};

  const Matrix id = Matrix::identity(n);
  const Matrix a2 = as * as;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a2 * a4;

  Matrix u_inner = b[13] * a6 + b[11] * a4 + b[9] * a2;
  u_inner = a6 * u_inner;
  u_inner += b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id;
  const Matrix u = as * u_inner;

  Matrix v = b[12] * a6 + b[10] * a4 + b[8] * a2;
  v = a6 * v;
  v += b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;

  Matrix r = solve_matrix(v - u, (v + u));
  for (int s = 0; s < squarings; ++s) r = r * r;
  return r;
}

std::vector<double> rk4(const ringlab::ode::VectorField& f,
                        std::span<const double> x0, double t0, double t1,
                        int steps) {
  const std::size_t dim = x0.size();
  std::vector<double> x(x0.begin(), x0.end());
  std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
  const double h = (t1 - t0) / steps;
  for (int s = 0; s < steps; ++s) {
    const double t = t0 + s * h;
    f(t, x, k1);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
    f(t + 0.5 * h, tmp, k2);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
    f(t + 0.5 * h, tmp, k3);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = x[i] + h * k3[i];
    f(t + h, tmp, k4);
    for (std::size_t i = 0; i < dim; ++i)
      x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return x;
}

double delayed_exponential(double t) {
  if (t <= 0.0) return 1.0;
  const int m = static_cast<int>(std::floor(t)) + 1;
  double sum = 0.0;
  double factorial = 1.0;
  for (int k = 0; k <= m; ++k) {
    if (k > 0) factorial *= k;
    const double base = t - k + 1.0;
    if (base < 0.0) break;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    sum += sign * std::pow(base, k) / factorial;
  }
  return sum;
}

double simpson(const std::function<double(double)>& f, double a, double b,
               int n) {
  if (n % 2 != 0) throw std::invalid_argument("simpson: even n required");
  const double h = (b - a) / n;
  double sum = f(a) + f(b);
  for (int i = 1; i < n; ++i)
    sum += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

}  // namespace oracles
