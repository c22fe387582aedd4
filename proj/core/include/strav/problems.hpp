#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "strav/operators.hpp"

namespace strav {

/// System of convex quadratic inequalities g_i(x) <= 0 with
/// g_i(x) = x^T G_i^T G_i x + c_i^T x + d_i. The offsets d_i are calibrated
/// so that the all-ones anchor satisfies g_i(anchor) = -margin.
struct QuadraticSystem {
  std::size_t dim = 0;
  std::vector<Matrix> curvature; // G_i
  std::vector<Vector> linear;    // c_i
  std::vector<double> offset;    // d_i
  std::uint64_t seed = 0;
  double margin = 0.0;

  std::size_t count() const noexcept { return curvature.size(); }
  Vector anchor() const { return Vector(dim, 1.0); }

  double function_value(std::size_t i, const Vector& x) const;
  Vector subgradient(std::size_t i, const Vector& x) const;
  /// max_i max(0, g_i(x))
  double max_violation(const Vector& x) const;
};

/// Consistent partitioned linear system A x = b with a stored solution
/// certificate and the per-block weighting rule.
struct LinearFeasibility {
  enum class WeightMode { Identity, RowInverseNormSq };

  Matrix coeffs; // A
  Vector rhs;    // b
  std::vector<std::pair<std::size_t, std::size_t>> blocks; // [begin, end)
  WeightMode weight_mode = WeightMode::Identity;
  Vector certificate; // x* with A x* = b
  std::uint64_t seed = 0;

  /// || A x - b ||_inf
  double max_violation(const Vector& x) const;
};

/// Contiguous near-even split of m rows into p blocks, the leading blocks
/// one row longer when the split is uneven. Throws for p outside [1, m].
std::vector<std::pair<std::size_t, std::size_t>>
partition_rows(std::size_t m, std::size_t p);

/// Random quadratic system: entries of G_i and c_i uniform in [-1, 1],
/// drawn per function as G_i (row-major) then c_i; d_i is computed, not
/// drawn. Pure function of its arguments.
QuadraticSystem gen_quadratic(std::uint64_t seed, std::size_t n,
                              std::size_t count, double margin = 0.0);

/// Random start point with components uniform in [-10, 10].
Vector gen_start(std::uint64_t seed, std::size_t n);

/// Consistent linear system: A and x* uniform in [-1, 1] (A row-major
/// first, then x*), b = A x*.
LinearFeasibility gen_consistent_linear(
    std::uint64_t seed, std::size_t m, std::size_t n, std::size_t p = 1,
    LinearFeasibility::WeightMode mode = LinearFeasibility::WeightMode::Identity);

/// One subgradient projection per function. The operators share the
/// system's storage.
std::vector<RelaxedCutter>
build_operators(std::shared_ptr<const QuadraticSystem> system,
                std::span<const double> alphas);

/// One block-linear operator per row block, spectral radii precomputed.
/// With singleton blocks and RowInverseNormSq weights the operators are
/// plain hyperplane-projection steps.
std::vector<RelaxedCutter> build_operators(const LinearFeasibility& problem,
                                           std::span<const double> alphas);

/// Plain-text serialization (header with kind/dims/seed, then
/// whitespace-separated rows at full precision). See the README for the
/// exact layout.
std::string to_text(const QuadraticSystem& q);
std::string to_text(const LinearFeasibility& l);
QuadraticSystem quadratic_from_text(std::istream& in);
LinearFeasibility linear_from_text(std::istream& in);

} // namespace strav
