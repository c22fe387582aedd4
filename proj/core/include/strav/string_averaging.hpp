#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "strav/operators.hpp"

namespace strav {

/// Ordered strings over an operator index set (0-based) together with
/// positive string weights summing to one. Strings hold indices, not
/// operator copies, so an operator may appear in several strings; every
/// operator must appear in at least one.
struct StringPlan {
  std::vector<std::vector<std::size_t>> strings;
  std::vector<double> weights;

  /// One string listing all operators in order, weight 1.
  static StringPlan single(std::size_t op_count);
  /// `string_count` contiguous strings of near-equal length (the leading
  /// ones one longer when the split is uneven), equal weights.
  static StringPlan contiguous(std::size_t op_count, std::size_t string_count);

  std::size_t count() const noexcept { return strings.size(); }
  std::size_t max_string_length() const;
  /// Largest relaxation among the operators the plan uses.
  double max_alpha(std::span<const RelaxedCutter> ops) const;

  /// Throws std::invalid_argument unless strings and weights are valid for
  /// `op_count` operators.
  void validate(std::size_t op_count) const;
};

/// One evaluation of every string at a point: the full intermediate
/// trajectory, the per-step increments, and the weighted average of the
/// string endpoints.
struct StringTrace {
  struct PerString {
    std::vector<Vector> points;     // u^0 .. u^{m_t}, u^0 = x
    std::vector<Vector> increments; // y^i = u^i - u^{i-1}

    const Vector& endpoint() const { return points.back(); }
  };

  Vector start;
  std::vector<PerString> strings;
  Vector averaged; // sum_t w_t U_t(x)
};

/// Applies every string of the plan to x. Pure; strings are independent of
/// each other. Infeasibility raised by an operator propagates with the
/// string/step position attached.
StringTrace evaluate_strings(std::span<const RelaxedCutter> ops,
                             const StringPlan& plan, const Vector& x);

/// || averaged image - x ||
double residual(const StringTrace& trace);

} // namespace strav
