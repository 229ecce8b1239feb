#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace textcat {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::vector<double> column(std::size_t c) const;

  std::vector<double>& data() noexcept { return data_; }
  const std::vector<double>& data() const noexcept { return data_; }

  Matrix transposed() const;
  /// Leading `n` columns.
  Matrix left_columns(std::size_t n) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
/// aᵀ·b without forming the transpose.
Matrix transpose_times(const Matrix& a, const Matrix& b);
/// a·aᵀ.
Matrix gram_rows(const Matrix& a);
std::vector<double> operator*(const Matrix& a, std::span<const double> x);
/// aᵀ·x.
std::vector<double> transpose_times(const Matrix& a, std::span<const double> x);

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
/// Largest absolute entry.
double max_abs(const Matrix& a);
double frobenius_norm(const Matrix& a);

/// Eigen decomposition of a symmetric matrix.
struct SymmetricEigen {
  /// Descending.
  std::vector<double> values;
  /// Column j is the unit eigenvector for values[j].
  Matrix vectors;
};

/// Householder tridiagonalization followed by implicit QL iterations.
/// Only the lower triangle of `a` is read. Throws NumericalError if QL fails
/// to converge.
SymmetricEigen symmetric_eigen(const Matrix& a);

/// Cholesky factor L (lower) with a = L·Lᵀ, or nullopt when `a` is not
/// numerically positive definite.
std::optional<Matrix> cholesky(const Matrix& a);

/// Solves L·Lᵀ·X = B.
Matrix cholesky_solve(const Matrix& l, const Matrix& b);

/// Moore-Penrose inverse of a symmetric positive semi-definite matrix.
/// Eigenvalues at or below `rel_tol`·λ_max count as zero.
Matrix psd_pseudo_inverse(const Matrix& a, double rel_tol = 1e-12);

}  // namespace textcat
