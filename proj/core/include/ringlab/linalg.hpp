#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace ringlab {

// Dense row-major matrix of doubles.  Just enough linear algebra for the
// solvers in this library; not a general purpose BLAS replacement.
class Matrix {
public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols),
        data_(static_cast<std::size_t>(rows) * cols, fill) {}

  // Row-major nested initializer, e.g. Matrix({{1,2},{3,4}}).
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) {
    return data_[static_cast<std::size_t>(i) * cols_ + j];
  }
  double operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(i) * cols_ + j];
  }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  Matrix transposed() const;
  double inf_norm() const;  // max absolute row sum

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s);

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, double s) { return a *= s; }
  friend Matrix operator*(double s, Matrix a) { return a *= s; }
  friend Matrix operator*(const Matrix& a, const Matrix& b);

  bool operator==(const Matrix& other) const = default;

private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// y = A x
std::vector<double> matvec(const Matrix& a, const std::vector<double>& x);

// LU decomposition with partial pivoting (PA = LU), stored compactly.
struct LuDecomposition {
  Matrix lu;               // L below the diagonal (unit), U on and above
  std::vector<int> perm;   // row permutation
  int sign = 1;            // permutation parity
  bool singular = false;   // an exactly zero pivot was hit

  std::vector<double> solve(const std::vector<double>& b) const;
  double det() const;
  double log_abs_det() const;  // -inf when singular
  int det_sign() const;        // 0 when singular

  // Number of pivots with |u_ii| <= tol (numerical rank deficiency).
  int null_dimension(double tol) const;
};

LuDecomposition lu_decompose(Matrix a);

// Solve A x = b; throws DomainError when A is singular to working precision.
std::vector<double> solve(const Matrix& a, const std::vector<double>& b);

}  // namespace ringlab
