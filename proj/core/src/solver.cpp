#include "strav/solver.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "strav/errors.hpp"

namespace strav {

RelaxationSchedule::RelaxationSchedule(std::vector<double> values,
                                       double epsilon)
    : values_(std::move(values)), epsilon_(epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("RelaxationSchedule: epsilon outside (0, 1)");
  }
  if (values_.empty()) {
    throw std::invalid_argument("RelaxationSchedule: empty sequence");
  }
  for (double v : values_) {
    if (!(v >= epsilon && v <= 2.0 - epsilon)) {
      throw std::invalid_argument(
          "RelaxationSchedule: lambda outside [epsilon, 2 - epsilon]");
    }
  }
}

RelaxationSchedule RelaxationSchedule::constant(double lambda,
                                                double epsilon) {
  return RelaxationSchedule({lambda}, epsilon);
}

RelaxationSchedule RelaxationSchedule::sequence(std::vector<double> lambdas,
                                                double epsilon) {
  return RelaxationSchedule(std::move(lambdas), epsilon);
}

ConstraintSet ConstraintSet::none() { return ConstraintSet(); }

ConstraintSet ConstraintSet::box(Vector lo, Vector hi) {
  if (lo.size() != hi.size() || lo.empty()) {
    throw std::invalid_argument("ConstraintSet::box: bad bounds");
  }
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (!(lo[i] <= hi[i])) {
      throw std::invalid_argument("ConstraintSet::box: lo > hi");
    }
  }
  ConstraintSet c;
  c.which_ = Which::Box;
  c.lo_ = std::move(lo);
  c.hi_ = std::move(hi);
  return c;
}

ConstraintSet ConstraintSet::ball(Vector center, double radius) {
  if (center.empty() || !(radius > 0.0)) {
    throw std::invalid_argument("ConstraintSet::ball: bad center or radius");
  }
  ConstraintSet c;
  c.which_ = Which::Ball;
  c.center_ = std::move(center);
  c.radius_ = radius;
  return c;
}

ConstraintSet ConstraintSet::halfspace(Vector normal, double offset) {
  if (normal.empty() || norm(normal) == 0.0) {
    throw std::invalid_argument("ConstraintSet::halfspace: zero normal");
  }
  ConstraintSet c;
  c.which_ = Which::Halfspace;
  c.normal_ = std::move(normal);
  c.offset_ = offset;
  return c;
}

ConstraintSet ConstraintSet::nonnegative_orthant() {
  ConstraintSet c;
  c.which_ = Which::NonnegativeOrthant;
  return c;
}

Vector project_onto(const ConstraintSet& omega, const Vector& x) {
  switch (omega.which_) {
  case ConstraintSet::Which::None:
    return x;
  case ConstraintSet::Which::Box: {
    if (x.size() != omega.lo_.size()) {
      throw std::invalid_argument("project_onto: dimension mismatch");
    }
    Vector y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      y[i] = std::min(std::max(x[i], omega.lo_[i]), omega.hi_[i]);
    }
    return y;
  }
  case ConstraintSet::Which::Ball: {
    Vector d = subtract(x, omega.center_);
    const double dn = norm(d);
    if (dn <= omega.radius_) return x;
    return add_scaled(omega.center_, omega.radius_ / dn, d);
  }
  case ConstraintSet::Which::Halfspace: {
    const double g = dot(omega.normal_, x) - omega.offset_;
    if (g <= 0.0) return x;
    return add_scaled(x, -g / dot(omega.normal_, omega.normal_),
                      omega.normal_);
  }
  case ConstraintSet::Which::NonnegativeOrthant: {
    Vector y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::max(x[i], 0.0);
    return y;
  }
  }
  return x;
}

bool ConstraintSet::contains(const Vector& x, double tol) const {
  Vector p = project_onto(*this, x);
  return norm_inf(subtract(p, x)) <= tol;
}

const char* to_string(SolveStatus s) {
  switch (s) {
  case SolveStatus::Feasible:
    return "Feasible";
  case SolveStatus::FixedPoint:
    return "FixedPoint";
  case SolveStatus::MaxIterations:
    return "MaxIterations";
  case SolveStatus::Infeasible:
    return "Infeasible";
  }
  return "Unknown";
}

namespace {

IterationReport run_iteration(std::span<const RelaxedCutter> ops,
                              const StringPlan& plan,
                              const RelaxationSchedule& schedule,
                              const StepSizeMode& mode,
                              const StoppingRule& stop, const Vector& x0,
                              const ConstraintSet* omega,
                              const ViolationFn& violation,
                              const std::optional<Vector>& reference) {
  plan.validate(ops.size());
  if (!all_finite(x0) || x0.empty()) {
    throw std::invalid_argument("solve: bad start point");
  }
  if (reference && reference->size() != x0.size()) {
    throw std::invalid_argument("solve: reference dimension mismatch");
  }

  IterationReport report;
  Vector x = x0;
  double viol = std::numeric_limits<double>::quiet_NaN();

  for (std::size_t k = 0;; ++k) {
    if (violation) {
      viol = violation(x);
      if (viol <= stop.feas_tol) {
        report.status = SolveStatus::Feasible;
        break;
      }
    }
    if (k >= stop.max_iter) {
      report.status = SolveStatus::MaxIterations;
      break;
    }

    StringTrace trace;
    try {
      trace = evaluate_strings(ops, plan, x);
    } catch (const InfeasibleError&) {
      report.status = SolveStatus::Infeasible;
      break;
    }
    const double res = residual(trace);
    if (res <= mode.fix_tol) {
      report.status = SolveStatus::FixedPoint;
      break;
    }

    IterationRow row;
    row.k = k;
    row.lambda = schedule.at(k);
    row.sigma = step_size(mode, trace, plan, ops);
    row.residual = res;
    row.violation = viol;
    if (reference) row.error_to_reference = norm(subtract(x, *reference));
    row.decrease_bound =
        row.lambda * (2.0 - row.lambda) * row.sigma * row.sigma * res * res;
    row.sigma_gamma = step_size_gamma_form(trace, plan, ops);
    report.rows.push_back(row);

    x = add_scaled(x, row.lambda * row.sigma,
                   subtract(trace.averaged, trace.start));
    if (omega != nullptr) x = project_onto(*omega, x);
  }

  report.iterations = report.rows.size();
  report.final_point = std::move(x);
  report.final_violation = viol;
  return report;
}

} // namespace

IterationReport solve(std::span<const RelaxedCutter> ops,
                      const StringPlan& plan,
                      const RelaxationSchedule& schedule,
                      const StepSizeMode& mode, const StoppingRule& stop,
                      const Vector& x0, const ViolationFn& violation,
                      const std::optional<Vector>& reference) {
  return run_iteration(ops, plan, schedule, mode, stop, x0, nullptr, violation,
                       reference);
}

IterationReport solve_projected(std::span<const RelaxedCutter> ops,
                                const StringPlan& plan, double lambda,
                                const StepSizeMode& mode,
                                const StoppingRule& stop, const Vector& x0,
                                const ConstraintSet& omega,
                                const ViolationFn& violation,
                                const std::optional<Vector>& reference) {
  return run_iteration(ops, plan, RelaxationSchedule::constant(lambda), mode,
                       stop, x0, &omega, violation, reference);
}

bool fejer_audit(const IterationReport& report, const Vector& reference,
                 double tol) {
  const double e_final = norm(subtract(report.final_point, reference));
  for (std::size_t k = 0; k < report.rows.size(); ++k) {
    const IterationRow& row = report.rows[k];
    if (!row.error_to_reference) {
      throw std::invalid_argument(
          "fejer_audit: run was not recorded with a reference point");
    }
    const double e_k = *row.error_to_reference;
    const double e_next = (k + 1 < report.rows.size())
                              ? *report.rows[k + 1].error_to_reference
                              : e_final;
    if (e_next * e_next >
        e_k * e_k - row.decrease_bound + tol * std::max(1.0, e_k * e_k)) {
      return false;
    }
  }
  return true;
}

} // namespace strav
