#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <variant>

#include "strav/linalg.hpp"

namespace strav {

/// A convex function g together with a selection of one subgradient per
/// point. For differentiable g the subgradient is the gradient.
struct ConvexFunctionHandle {
  std::function<double(const Vector&)> eval;
  std::function<Vector(const Vector&)> subgrad;
  std::size_t dim = 0;
};

struct HyperplaneProjection {
  Vector normal;
  double offset = 0.0;
};

struct HalfspaceProjection {
  Vector normal;
  double offset = 0.0;
};

struct BlockLinear {
  Matrix block;        // A_t, rows of the system owned by this operator
  Matrix weight;       // symmetric positive-definite weight
  Vector rhs;          // matching right-hand-side slice
  double spectral = 0; // cached spectral radius of block^T weight block
};

struct SubgradientProjection {
  ConvexFunctionHandle fn;
};

/// One strictly relaxed cutter operator: a cutter (orthogonal projection,
/// weighted block step, or subgradient projection) relaxed by a factor
/// alpha in (0, 2). Immutable after construction; apply() is pure.
class RelaxedCutter {
public:
  using Kind = std::variant<HyperplaneProjection, HalfspaceProjection,
                            BlockLinear, SubgradientProjection>;

  RelaxedCutter(Kind kind, double alpha);

  Vector apply(const Vector& x) const;

  /// Image of the underlying unrelaxed cutter, x + (apply(x) - x) / alpha.
  /// Exposed for the inequality checks in the test suites.
  Vector cutter_image(const Vector& x) const;

  double alpha() const noexcept { return alpha_; }
  std::size_t dim() const noexcept { return dim_; }
  const Kind& kind() const noexcept { return kind_; }

  bool is_block_linear() const noexcept {
    return std::holds_alternative<BlockLinear>(kind_);
  }
  bool is_subgradient() const noexcept {
    return std::holds_alternative<SubgradientProjection>(kind_);
  }

private:
  Kind kind_;
  double alpha_;
  std::size_t dim_;
};

RelaxedCutter make_hyperplane(Vector normal, double offset, double alpha);
RelaxedCutter make_halfspace(Vector normal, double offset, double alpha);
/// Computes and caches the spectral radius of block^T weight block.
/// Throws std::invalid_argument for an all-zero block.
RelaxedCutter make_block_linear(Matrix block, Matrix weight, Vector rhs,
                                double alpha);
RelaxedCutter make_subgradient(ConvexFunctionHandle fn, double alpha);

/// Relaxation carried by the composition of relaxed cutters,
/// 2 / ((sum_i alpha_i / (2 - alpha_i))^-1 + 1). Lies in (0, 2).
double composition_relaxation(std::span<const double> alphas);

/// Relaxation carried by a convex combination of relaxed cutters,
/// sum_i w_i alpha_i for nonnegative weights summing to one.
double combination_relaxation(std::span<const double> alphas,
                              std::span<const double> weights);

/// Slack of the relaxed-cutter inequality
///   alpha <apply(x) - x, z - x> >= ||apply(x) - x||^2
/// at a point x and a fixed point z of the operator. Nonnegative up to
/// roundoff for every valid relaxed cutter.
double cutter_inequality_slack(const RelaxedCutter& op, const Vector& x,
                               const Vector& z);

} // namespace strav
