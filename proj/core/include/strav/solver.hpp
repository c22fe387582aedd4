#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "strav/step_size.hpp"
#include "strav/string_averaging.hpp"

namespace strav {

/// Relaxation parameters lambda_k, either a constant or an explicit
/// sequence (clamped to its last entry once exhausted). Every value must
/// lie in [epsilon, 2 - epsilon] for the configured epsilon in (0, 1).
class RelaxationSchedule {
public:
  static RelaxationSchedule constant(double lambda, double epsilon = 0.001);
  static RelaxationSchedule sequence(std::vector<double> lambdas,
                                     double epsilon = 0.001);

  double at(std::size_t k) const {
    return values_.size() == 1 ? values_.front()
                               : values_[std::min(k, values_.size() - 1)];
  }
  bool is_constant() const noexcept { return values_.size() == 1; }
  double epsilon() const noexcept { return epsilon_; }

private:
  RelaxationSchedule(std::vector<double> values, double epsilon);

  std::vector<double> values_;
  double epsilon_;
};

struct StoppingRule {
  double feas_tol = 1e-6;
  double fix_tol = 1e-16;
  std::size_t max_iter = 1000;
};

/// Closed convex set with an exact Euclidean projection.
class ConstraintSet {
public:
  static ConstraintSet none();
  static ConstraintSet box(Vector lo, Vector hi);
  static ConstraintSet ball(Vector center, double radius);
  static ConstraintSet halfspace(Vector normal, double offset);
  static ConstraintSet nonnegative_orthant();

  bool is_none() const noexcept { return which_ == Which::None; }
  bool contains(const Vector& x, double tol = 0.0) const;

  friend Vector project_onto(const ConstraintSet& omega, const Vector& x);

private:
  enum class Which { None, Box, Ball, Halfspace, NonnegativeOrthant };

  ConstraintSet() = default;

  Which which_ = Which::None;
  Vector lo_, hi_;     // box
  Vector center_;      // ball
  double radius_ = 0;  // ball
  Vector normal_;      // halfspace
  double offset_ = 0;  // halfspace
};

/// Exact Euclidean projection onto the set (identity for None).
Vector project_onto(const ConstraintSet& omega, const Vector& x);

enum class SolveStatus { Feasible, FixedPoint, MaxIterations, Infeasible };

const char* to_string(SolveStatus s);

/// Diagnostics recorded before each performed update.
struct IterationRow {
  std::size_t k = 0;
  double sigma = 1.0;          // step size used in the update
  double lambda = 1.0;         // relaxation used in the update
  double residual = 0.0;       // ||T(x^k) - x^k||
  double violation = 0.0;      // max feasibility violation (NaN if unchecked)
  std::optional<double> error_to_reference; // ||x^k - z|| when z supplied
  double decrease_bound = 0.0; // lambda(2-lambda) sigma^2 residual^2
  double sigma_gamma = 0.0;    // diagnostic gamma-form step size
};

struct IterationReport {
  SolveStatus status = SolveStatus::MaxIterations;
  std::size_t iterations = 0; // number of performed updates (= rows.size())
  Vector final_point;
  double final_violation = 0.0; // NaN when no feasibility check was supplied
  std::vector<IterationRow> rows;
};

/// Maximum feasibility violation of the underlying problem at a point;
/// feasible when the returned value is at or below StoppingRule::feas_tol.
using ViolationFn = std::function<double(const Vector&)>;

/// Free iteration x^{k+1} = x^k + lambda_k sigma(x^k) (T(x^k) - x^k) with T
/// the string averaging operator of the plan. Termination: Feasible when the
/// violation check passes (checked first, skipped when no check is given),
/// FixedPoint when the residual drops to fix_tol, MaxIterations otherwise;
/// Infeasible when an operator certifies infeasibility.
IterationReport solve(std::span<const RelaxedCutter> ops,
                      const StringPlan& plan,
                      const RelaxationSchedule& schedule,
                      const StepSizeMode& mode, const StoppingRule& stop,
                      const Vector& x0, const ViolationFn& violation = {},
                      const std::optional<Vector>& reference = {});

/// Projected iteration x^{k+1} = P_Omega(x^k + lambda sigma(x^k)(T(x^k)-x^k))
/// with a constant relaxation parameter. Every iterate after the start lies
/// in Omega exactly.
IterationReport solve_projected(std::span<const RelaxedCutter> ops,
                                const StringPlan& plan, double lambda,
                                const StepSizeMode& mode,
                                const StoppingRule& stop, const Vector& x0,
                                const ConstraintSet& omega,
                                const ViolationFn& violation = {},
                                const std::optional<Vector>& reference = {});

/// Checks the per-iteration decrease of the squared distance to a feasible
/// reference point:
///   e_{k+1}^2 <= e_k^2 - lambda_k (2 - lambda_k) sigma_k^2 ||T(x^k)-x^k||^2
/// up to tol * max(1, e_k^2). Requires a run recorded with a reference
/// point; throws std::invalid_argument otherwise.
bool fejer_audit(const IterationReport& report, const Vector& reference,
                 double tol = 1e-9);

} // namespace strav
