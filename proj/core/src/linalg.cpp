#include "strav/linalg.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "strav/errors.hpp"

namespace strav {

namespace {

void require_same_dim(const Vector& a, const Vector& b, const char* where) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(std::string(where) + ": dimension mismatch");
  }
}

} // namespace

double dot(const Vector& a, const Vector& b) {
  require_same_dim(a, b, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Vector& a) { return std::sqrt(dot(a, a)); }

double norm_inf(const Vector& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

bool all_finite(const Vector& a) {
  for (double v : a) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

Vector add_scaled(const Vector& a, double s, const Vector& d) {
  require_same_dim(a, d, "add_scaled");
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + s * d[i];
  return out;
}

Vector subtract(const Vector& a, const Vector& b) {
  require_same_dim(a, b, "subtract");
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {
  if (rows == 0 || cols == 0) {
    throw std::invalid_argument("Matrix: zero dimension");
  }
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows == 0 || cols == 0) {
    throw std::invalid_argument("Matrix: zero dimension");
  }
  if (entries_.size() != rows * cols) {
    throw std::invalid_argument("Matrix: entry count does not match shape");
  }
  for (double v : entries_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("Matrix: non-finite entry");
    }
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(const Vector& d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Vector Matrix::multiply(const Vector& x) const {
  if (x.size() != cols_) {
    throw std::invalid_argument("Matrix::multiply: dimension mismatch");
  }
  Vector y(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    const double* row = entries_.data() + i * cols_;
    double s = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) s += row[j] * x[j];
    y[i] = s;
  }
  return y;
}

Vector Matrix::multiply_transpose(const Vector& y) const {
  if (y.size() != rows_) {
    throw std::invalid_argument(
        "Matrix::multiply_transpose: dimension mismatch");
  }
  Vector x(cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    const double* row = entries_.data() + i * cols_;
    const double yi = y[i];
    for (std::size_t j = 0; j < cols_; ++j) x[j] += row[j] * yi;
  }
  return x;
}

Matrix Matrix::weighted_gram(const Matrix& w) const {
  if (w.rows() != rows_ || w.cols() != rows_) {
    throw std::invalid_argument("weighted_gram: weight shape mismatch");
  }
  // T = W A, then G = A^T T.
  Matrix t(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < rows_; ++k) {
      const double wik = w(i, k);
      if (wik == 0.0) continue;
      for (std::size_t j = 0; j < cols_; ++j) t(i, j) += wik * (*this)(k, j);
    }
  }
  Matrix g(cols_, cols_);
  for (std::size_t k = 0; k < rows_; ++k) {
    for (std::size_t i = 0; i < cols_; ++i) {
      const double aki = (*this)(k, i);
      if (aki == 0.0) continue;
      for (std::size_t j = 0; j < cols_; ++j) g(i, j) += aki * t(k, j);
    }
  }
  return g;
}

namespace {

// Deterministic fallback start vectors when the current iterate is
// annihilated by the matrix.
std::uint64_t mix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

Vector unit_ones(std::size_t n) {
  Vector v(n, 1.0 / std::sqrt(static_cast<double>(n)));
  return v;
}

} // namespace

double spectral_radius_psd(const Matrix& b, double tol, std::size_t max_iter) {
  if (b.rows() != b.cols()) {
    throw std::invalid_argument("spectral_radius_psd: matrix is not square");
  }
  if (tol <= 0.0 || max_iter == 0) {
    throw std::invalid_argument("spectral_radius_psd: bad tolerance or budget");
  }
  const std::size_t n = b.rows();
  double amax = 0.0;
  double asym = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      amax = std::max(amax, std::abs(b(i, j)));
      asym = std::max(asym, std::abs(b(i, j) - b(j, i)));
    }
  }
  if (amax == 0.0) return 0.0;
  if (asym > 1e-12 * amax) {
    throw std::invalid_argument("spectral_radius_psd: matrix is not symmetric");
  }

  Vector v = unit_ones(n);
  std::uint64_t restart_state = 0x853C49E6748FEA9Bull;
  int restarts = 0;
  double estimate = 0.0;
  bool have_estimate = false;

  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    Vector w = b.multiply(v);
    const double wn = norm(w);
    if (wn <= amax * n * 1e-300) {
      // v lies (numerically) in the kernel; try a fresh direction.
      if (++restarts > 3) return 0.0;
      double vn = 0.0;
      while (vn == 0.0) {
        for (double& vi : v) {
          vi = (static_cast<double>(mix64(restart_state) >> 11) * 0x1.0p-53) -
               0.5;
        }
        vn = norm(v);
      }
      for (double& vi : v) vi /= vn;
      have_estimate = false;
      continue;
    }
    const double rayleigh = dot(v, w);
    if (have_estimate &&
        std::abs(rayleigh - estimate) <= tol * std::max(std::abs(rayleigh), 1.0)) {
      return rayleigh;
    }
    estimate = rayleigh;
    have_estimate = true;
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / wn;
  }
  throw ConvergenceError("spectral_radius_psd: power iteration did not settle",
                         estimate);
}

} // namespace strav
