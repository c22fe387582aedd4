#pragma once

#include <span>

#include "strav/string_averaging.hpp"

namespace strav {

enum class StepSizeVariant {
  Unit,              // sigma = 1, plain relaxation
  Inner,             // inner-product form over the trace
  Sum,               // increment-norm form, algebraically equal to Inner
  BlockClosed,       // closed form for plans of block-linear operators
  SubgradientClosed, // closed form for plans of subgradient projections
};

struct StepSizeMode {
  StepSizeVariant variant = StepSizeVariant::Inner;
  /// Residuals at or below this threshold take the fixed-point branch,
  /// where the step size is defined as 1.
  double fix_tol = 1e-16;
};

/// Largest admissible extrapolation step size, inner-product form:
///   sum_t w_t sum_i <U_t(x) - S_i(x) + (1/alpha_i) y^i, y^i>  /  ||T(x)-x||^2.
/// Requires residual(trace) > 0; throws std::logic_error on a vanishing
/// denominator.
double step_size_inner(const StringTrace& trace, const StringPlan& plan,
                       std::span<const RelaxedCutter> ops);

/// Same value written through increment norms:
///   sum_t w_t [ sum_i (1/alpha_i - 1/2) ||y^i||^2 + 1/2 ||U_t(x)-x||^2 ]
///   / ||T(x)-x||^2.
double step_size_sum(const StringTrace& trace, const StringPlan& plan,
                     std::span<const RelaxedCutter> ops);

/// Closed form for block-linear operators, evaluated from the block data at
/// the stored intermediate points. Throws std::invalid_argument if the plan
/// uses any other operator kind.
double step_size_block_closed(const StringTrace& trace, const StringPlan& plan,
                              std::span<const RelaxedCutter> ops);

/// Closed form for subgradient projections, evaluated from the function
/// handles at the stored intermediate points. Throws std::invalid_argument
/// if the plan uses any other operator kind.
double step_size_subgradient_closed(const StringTrace& trace,
                                    const StringPlan& plan,
                                    std::span<const RelaxedCutter> ops);

/// (1/gamma - 1/2) / max string length, with gamma the largest relaxation
/// used by the plan. Every step size above is bounded below by this value.
double step_size_lower_bound(const StringPlan& plan,
                             std::span<const RelaxedCutter> ops);

/// Diagnostic variant built from per-string composition relaxations:
///   sum_t (w_t / gamma_t) ||U_t(x)-x||^2 / ||T(x)-x||^2.
/// Reported by the solver but not offered as a solve mode.
double step_size_gamma_form(const StringTrace& trace, const StringPlan& plan,
                            std::span<const RelaxedCutter> ops);

/// Piecewise step size for a solve iteration: 1 when residual(trace) is at
/// or below mode.fix_tol (and always for Unit), otherwise the selected form.
double step_size(const StepSizeMode& mode, const StringTrace& trace,
                 const StringPlan& plan, std::span<const RelaxedCutter> ops);

} // namespace strav
