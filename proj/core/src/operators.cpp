#include "strav/operators.hpp"

#include <cmath>
#include <stdexcept>

#include "strav/errors.hpp"

namespace strav {

namespace {

std::size_t kind_dim(const RelaxedCutter::Kind& kind) {
  return std::visit(
      [](const auto& k) -> std::size_t {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, HyperplaneProjection> ||
                      std::is_same_v<T, HalfspaceProjection>) {
          return k.normal.size();
        } else if constexpr (std::is_same_v<T, BlockLinear>) {
          return k.block.cols();
        } else {
          return k.fn.dim;
        }
      },
      kind);
}

void check_normal(const Vector& a) {
  if (a.empty() || !all_finite(a)) {
    throw std::invalid_argument("relaxed cutter: bad normal vector");
  }
  if (norm(a) == 0.0) {
    throw std::invalid_argument("relaxed cutter: zero normal vector");
  }
}

Vector halfspace_step(const Vector& normal, double offset, double alpha,
                      const Vector& x) {
  const double g = dot(normal, x) - offset;
  if (g <= 0.0) return x;
  return add_scaled(x, -alpha * g / dot(normal, normal), normal);
}

} // namespace

RelaxedCutter::RelaxedCutter(Kind kind, double alpha)
    : kind_(std::move(kind)), alpha_(alpha), dim_(kind_dim(kind_)) {
  if (!(alpha > 0.0 && alpha < 2.0)) {
    throw std::invalid_argument("relaxed cutter: alpha must lie in (0, 2)");
  }
  if (dim_ == 0) {
    throw std::invalid_argument("relaxed cutter: zero ambient dimension");
  }
}

Vector RelaxedCutter::apply(const Vector& x) const {
  if (x.size() != dim_) {
    throw std::invalid_argument("relaxed cutter: point dimension mismatch");
  }
  return std::visit(
      [&](const auto& k) -> Vector {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, HyperplaneProjection>) {
          const double r = k.offset - dot(k.normal, x);
          return add_scaled(x, alpha_ * r / dot(k.normal, k.normal), k.normal);
        } else if constexpr (std::is_same_v<T, HalfspaceProjection>) {
          return halfspace_step(k.normal, k.offset, alpha_, x);
        } else if constexpr (std::is_same_v<T, BlockLinear>) {
          Vector r = subtract(k.rhs, k.block.multiply(x));
          Vector step = k.block.multiply_transpose(k.weight.multiply(r));
          return add_scaled(x, alpha_ / k.spectral, step);
        } else {
          const double g = k.fn.eval(x);
          if (g <= 0.0) return x;
          Vector sub = k.fn.subgrad(x);
          const double n2 = dot(sub, sub);
          if (n2 == 0.0) {
            throw InfeasibleError(
                "subgradient projection: positive value with zero "
                "subgradient; the inequality system is infeasible");
          }
          return add_scaled(x, -alpha_ * g / n2, sub);
        }
      },
      kind_);
}

Vector RelaxedCutter::cutter_image(const Vector& x) const {
  Vector image = apply(x);
  for (std::size_t i = 0; i < image.size(); ++i) {
    image[i] = x[i] + (image[i] - x[i]) / alpha_;
  }
  return image;
}

RelaxedCutter make_hyperplane(Vector normal, double offset, double alpha) {
  check_normal(normal);
  return RelaxedCutter(HyperplaneProjection{std::move(normal), offset}, alpha);
}

RelaxedCutter make_halfspace(Vector normal, double offset, double alpha) {
  check_normal(normal);
  return RelaxedCutter(HalfspaceProjection{std::move(normal), offset}, alpha);
}

RelaxedCutter make_block_linear(Matrix block, Matrix weight, Vector rhs,
                                double alpha) {
  if (rhs.size() != block.rows()) {
    throw std::invalid_argument("block operator: rhs dimension mismatch");
  }
  // The relaxed-cutter property holds up to the accuracy of the cached
  // spectral radius, so settle it to roundoff rather than the loose default.
  const double rho = spectral_radius_psd(block.weighted_gram(weight), 1e-15,
                                         100000);
  if (rho <= 0.0) {
    throw std::invalid_argument("block operator: all-zero block");
  }
  return RelaxedCutter(
      BlockLinear{std::move(block), std::move(weight), std::move(rhs), rho},
      alpha);
}

RelaxedCutter make_subgradient(ConvexFunctionHandle fn, double alpha) {
  if (!fn.eval || !fn.subgrad) {
    throw std::invalid_argument("subgradient operator: missing callbacks");
  }
  return RelaxedCutter(SubgradientProjection{std::move(fn)}, alpha);
}

double composition_relaxation(std::span<const double> alphas) {
  if (alphas.empty()) {
    throw std::invalid_argument("composition_relaxation: empty list");
  }
  double s = 0.0;
  for (double a : alphas) {
    if (!(a > 0.0 && a < 2.0)) {
      throw std::invalid_argument(
          "composition_relaxation: alpha outside (0, 2)");
    }
    s += a / (2.0 - a);
  }
  return 2.0 / (1.0 / s + 1.0);
}

double combination_relaxation(std::span<const double> alphas,
                              std::span<const double> weights) {
  if (alphas.empty() || alphas.size() != weights.size()) {
    throw std::invalid_argument("combination_relaxation: length mismatch");
  }
  double wsum = 0.0;
  double mu = 0.0;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] > 0.0 && alphas[i] < 2.0)) {
      throw std::invalid_argument(
          "combination_relaxation: alpha outside (0, 2)");
    }
    if (weights[i] < 0.0) {
      throw std::invalid_argument("combination_relaxation: negative weight");
    }
    wsum += weights[i];
    mu += weights[i] * alphas[i];
  }
  if (std::abs(wsum - 1.0) > 1e-12) {
    throw std::invalid_argument(
        "combination_relaxation: weights do not sum to one");
  }
  return mu;
}

double cutter_inequality_slack(const RelaxedCutter& op, const Vector& x,
                               const Vector& z) {
  Vector step = subtract(op.apply(x), x);
  return op.alpha() * dot(step, subtract(z, x)) - dot(step, step);
}

} // namespace strav
