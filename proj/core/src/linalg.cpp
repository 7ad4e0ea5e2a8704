#include "ringlab/linalg.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#include "ringlab/errors.hpp"

namespace ringlab {

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = static_cast<int>(rows.size());
  cols_ = rows_ > 0 ? static_cast<int>(rows.begin()->size()) : 0;
  data_.reserve(static_cast<std::size_t>(rows_) * cols_);
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != cols_)
      throw DomainError("Matrix initializer rows have unequal lengths");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Matrix::inf_norm() const {
  double best = 0.0;
  for (int i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (int j = 0; j < cols_; ++j) s += std::abs((*this)(i, j));
    if (s > best) best = s;
  }
  return best;
}

Matrix& Matrix::operator+=(const Matrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw DomainError("Matrix size mismatch in +=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw DomainError("Matrix size mismatch in -=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DomainError("Matrix size mismatch in *");
  Matrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

std::vector<double> matvec(const Matrix& a, const std::vector<double>& x) {
  if (a.cols() != static_cast<int>(x.size()))
    throw DomainError("Matrix/vector size mismatch");
  std::vector<double> y(a.rows(), 0.0);
  for (int i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

LuDecomposition lu_decompose(Matrix a) {
  if (a.rows() != a.cols()) throw DomainError("LU needs a square matrix");
  const int n = a.rows();
  LuDecomposition d;
  d.perm.resize(n);
  for (int i = 0; i < n; ++i) d.perm[i] = i;

  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(a(k, k));
    for (int i = k + 1; i < n; ++i) {
      const double v = std::abs(a(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(d.perm[k], d.perm[piv]);
      d.sign = -d.sign;
    }
    const double pivot = a(k, k);
    if (pivot == 0.0) {
      d.singular = true;
      continue;
    }
    for (int i = k + 1; i < n; ++i) {
      const double m = a(i, k) / pivot;
      a(i, k) = m;
      if (m == 0.0) continue;
      for (int j = k + 1; j < n; ++j) a(i, j) -= m * a(k, j);
    }
  }
  d.lu = std::move(a);
  return d;
}

std::vector<double> LuDecomposition::solve(const std::vector<double>& b) const {
  const int n = lu.rows();
  if (static_cast<int>(b.size()) != n)
    throw DomainError("LU solve: right hand side has wrong length");
  if (singular) throw DomainError("LU solve: matrix is singular");
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = b[perm[i]];
  for (int i = 1; i < n; ++i) {
    double s = x[i];
    for (int j = 0; j < i; ++j) s -= lu(i, j) * x[j];
    x[i] = s;
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = x[i];
    for (int j = i + 1; j < n; ++j) s -= lu(i, j) * x[j];
    x[i] = s / lu(i, i);
  }
  return x;
}

double LuDecomposition::det() const {
  double d = static_cast<double>(sign);
  for (int i = 0; i < lu.rows(); ++i) d *= lu(i, i);
  return d;
}

double LuDecomposition::log_abs_det() const {
  double s = 0.0;
  for (int i = 0; i < lu.rows(); ++i) {
    const double u = std::abs(lu(i, i));
    if (u == 0.0) return -std::numeric_limits<double>::infinity();
    s += std::log(u);
  }
  return s;
}

int LuDecomposition::det_sign() const {
  int s = sign;
  for (int i = 0; i < lu.rows(); ++i) {
    const double u = lu(i, i);
    if (u == 0.0) return 0;
    if (u < 0.0) s = -s;
  }
  return s;
}

int LuDecomposition::null_dimension(double tol) const {
  int d = 0;
  for (int i = 0; i < lu.rows(); ++i)
    if (std::abs(lu(i, i)) <= tol) ++d;
  return d;
}

std::vector<double> solve(const Matrix& a, const std::vector<double>& b) {
  auto d = lu_decompose(a);
  if (d.singular) throw DomainError("solve: matrix is singular");
  return d.solve(b);
}

}  // namespace ringlab
