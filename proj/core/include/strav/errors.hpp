#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace strav {

/// An iterative estimate failed to reach its tolerance within the iteration
/// budget. Carries the last estimate so callers can decide whether it is
/// still usable.
class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string& message, double last_estimate)
      : std::runtime_error(message), last_estimate_(last_estimate) {}

  double last_estimate() const noexcept { return last_estimate_; }

private:
  double last_estimate_;
};

/// A constraint certified that no feasible point exists (for example a
/// strictly positive convex function with a zero subgradient). When raised
/// during string evaluation, the failing string/step position is attached.
class InfeasibleError : public std::runtime_error {
public:
  explicit InfeasibleError(const std::string& message)
      : std::runtime_error(message) {}

  InfeasibleError(const std::string& message, std::size_t string_index,
                  std::size_t step_index)
      : std::runtime_error(message), string_index_(string_index),
        step_index_(step_index) {}

  std::optional<std::size_t> string_index() const noexcept {
    return string_index_;
  }
  std::optional<std::size_t> step_index() const noexcept {
    return step_index_;
  }

private:
  std::optional<std::size_t> string_index_;
  std::optional<std::size_t> step_index_;
};

} // namespace strav
