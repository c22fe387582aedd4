#pragma once

#include <cstddef>
#include <vector>

namespace strav {

using Vector = std::vector<double>;

double dot(const Vector& a, const Vector& b);
double norm(const Vector& a);
double norm_inf(const Vector& a);
bool all_finite(const Vector& a);

/// a + s * d
Vector add_scaled(const Vector& a, double s, const Vector& d);
/// a - b
Vector subtract(const Vector& a, const Vector& b);

/// Dense real matrix, row-major storage.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(const Vector& d);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) {
    return entries_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }

  const std::vector<double>& entries() const noexcept { return entries_; }

  /// A x
  Vector multiply(const Vector& x) const;
  /// A^T y
  Vector multiply_transpose(const Vector& y) const;
  /// A^T W A for a square weight W with W.rows() == rows().
  Matrix weighted_gram(const Matrix& w) const;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

/// Largest eigenvalue of a symmetric positive-semidefinite matrix, estimated
/// by power iteration with an all-ones start vector (re-randomized when the
/// iterate is annihilated). Returns 0 for the zero matrix. Throws
/// std::invalid_argument for non-square or asymmetric input and
/// ConvergenceError (carrying the last estimate) when the Rayleigh quotient
/// has not stabilized to `tol` within `max_iter` products.
double spectral_radius_psd(const Matrix& b, double tol = 1e-10,
                           std::size_t max_iter = 10000);

} // namespace strav
