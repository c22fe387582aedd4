#include "strav/step_size.hpp"

#include <cmath>
#include <stdexcept>

namespace strav {

namespace {

double denominator(const StringTrace& trace) {
  const double r = residual(trace);
  if (r == 0.0) {
    throw std::logic_error(
        "step size: zero residual; caller must take the fixed-point branch");
  }
  return r * r;
}

} // namespace

double step_size_inner(const StringTrace& trace, const StringPlan& plan,
                       std::span<const RelaxedCutter> ops) {
  const double denom = denominator(trace);
  double num = 0.0;
  for (std::size_t t = 0; t < plan.count(); ++t) {
    const auto& per = trace.strings[t];
    const Vector& endpoint = per.endpoint();
    double s = 0.0;
    for (std::size_t i = 0; i < per.increments.size(); ++i) {
      const double alpha = ops[plan.strings[t][i]].alpha();
      const Vector& y = per.increments[i];
      // U_t(x) - S_i(x) + (1/alpha_i) y^i, against y^i.
      const Vector& si = per.points[i + 1];
      double term = 0.0;
      for (std::size_t j = 0; j < y.size(); ++j) {
        term += (endpoint[j] - si[j] + y[j] / alpha) * y[j];
      }
      s += term;
    }
    num += plan.weights[t] * s;
  }
  return num / denom;
}

double step_size_sum(const StringTrace& trace, const StringPlan& plan,
                     std::span<const RelaxedCutter> ops) {
  const double denom = denominator(trace);
  double num = 0.0;
  for (std::size_t t = 0; t < plan.count(); ++t) {
    const auto& per = trace.strings[t];
    double s = 0.0;
    for (std::size_t i = 0; i < per.increments.size(); ++i) {
      const double alpha = ops[plan.strings[t][i]].alpha();
      s += (1.0 / alpha - 0.5) * dot(per.increments[i], per.increments[i]);
    }
    Vector total = subtract(per.endpoint(), trace.start);
    s += 0.5 * dot(total, total);
    num += plan.weights[t] * s;
  }
  return num / denom;
}

double step_size_block_closed(const StringTrace& trace, const StringPlan& plan,
                              std::span<const RelaxedCutter> ops) {
  const double denom = denominator(trace);
  double num = 0.0;
  for (std::size_t t = 0; t < plan.count(); ++t) {
    const auto& per = trace.strings[t];
    double s = 0.0;
    for (std::size_t i = 0; i < per.increments.size(); ++i) {
      const RelaxedCutter& op = ops[plan.strings[t][i]];
      const auto* blk = std::get_if<BlockLinear>(&op.kind());
      if (blk == nullptr) {
        throw std::invalid_argument(
            "step_size_block_closed: plan uses a non-block operator");
      }
      const Vector& u_prev = per.points[i];
      Vector r = subtract(blk->rhs, blk->block.multiply(u_prev));
      Vector step = blk->block.multiply_transpose(blk->weight.multiply(r));
      const double a = op.alpha();
      s += a * (2.0 - a) / (blk->spectral * blk->spectral) * dot(step, step);
    }
    Vector total = subtract(per.endpoint(), trace.start);
    s += dot(total, total);
    num += plan.weights[t] * s;
  }
  return num / (2.0 * denom);
}

double step_size_subgradient_closed(const StringTrace& trace,
                                    const StringPlan& plan,
                                    std::span<const RelaxedCutter> ops) {
  const double denom = denominator(trace);
  double num = 0.0;
  for (std::size_t t = 0; t < plan.count(); ++t) {
    const auto& per = trace.strings[t];
    double s = 0.0;
    for (std::size_t i = 0; i < per.increments.size(); ++i) {
      const RelaxedCutter& op = ops[plan.strings[t][i]];
      const auto* sg = std::get_if<SubgradientProjection>(&op.kind());
      if (sg == nullptr) {
        throw std::invalid_argument(
            "step_size_subgradient_closed: plan uses a non-subgradient "
            "operator");
      }
      const Vector& u_prev = per.points[i];
      const double g = sg->fn.eval(u_prev);
      if (g <= 0.0) continue; // inactive constraint contributes nothing
      Vector sub = sg->fn.subgrad(u_prev);
      const double a = op.alpha();
      s += a * (2.0 - a) * (g * g) / dot(sub, sub);
    }
    Vector total = subtract(per.endpoint(), trace.start);
    s += dot(total, total);
    num += plan.weights[t] * s;
  }
  return num / (2.0 * denom);
}

double step_size_lower_bound(const StringPlan& plan,
                             std::span<const RelaxedCutter> ops) {
  const double gamma = plan.max_alpha(ops);
  return (1.0 / gamma - 0.5) / static_cast<double>(plan.max_string_length());
}

double step_size_gamma_form(const StringTrace& trace, const StringPlan& plan,
                            std::span<const RelaxedCutter> ops) {
  const double denom = denominator(trace);
  double num = 0.0;
  for (std::size_t t = 0; t < plan.count(); ++t) {
    std::vector<double> alphas;
    alphas.reserve(plan.strings[t].size());
    for (std::size_t idx : plan.strings[t]) alphas.push_back(ops[idx].alpha());
    Vector total = subtract(trace.strings[t].endpoint(), trace.start);
    num += plan.weights[t] / composition_relaxation(alphas) * dot(total, total);
  }
  return num / denom;
}

double step_size(const StepSizeMode& mode, const StringTrace& trace,
                 const StringPlan& plan, std::span<const RelaxedCutter> ops) {
  if (mode.variant == StepSizeVariant::Unit) return 1.0;
  if (residual(trace) <= mode.fix_tol) return 1.0;
  switch (mode.variant) {
  case StepSizeVariant::Inner:
    return step_size_inner(trace, plan, ops);
  case StepSizeVariant::Sum:
    return step_size_sum(trace, plan, ops);
  case StepSizeVariant::BlockClosed:
    return step_size_block_closed(trace, plan, ops);
  case StepSizeVariant::SubgradientClosed:
    return step_size_subgradient_closed(trace, plan, ops);
  case StepSizeVariant::Unit:
    break;
  }
  return 1.0;
}

} // namespace strav
