#include "doctest.h"

#include <cmath>
#include <memory>

#include "strav/step_size.hpp"

#include "helpers.hpp"

using namespace strav;
using namespace strav::test;

namespace {

struct Setup {
  std::vector<RelaxedCutter> ops;
  StringPlan plan;
  StringTrace trace;
};

Setup single_hyperplane(double alpha) {
  Setup s;
  s.ops.push_back(make_hyperplane({1.0, 0.0}, 1.0, alpha));
  s.plan = StringPlan::single(1);
  s.trace = evaluate_strings(s.ops, s.plan, {3.0, 4.0});
  return s;
}

Setup single_block(double alpha) {
  Setup s;
  s.ops.push_back(make_block_linear(Matrix(1, 1, {2.0}), Matrix::identity(1),
                                    {4.0}, alpha));
  s.plan = StringPlan::single(1);
  s.trace = evaluate_strings(s.ops, s.plan, {0.0});
  return s;
}

Setup single_parabola(double alpha) {
  Setup s;
  s.ops.push_back(make_subgradient(parabola_minus_one(), alpha));
  s.plan = StringPlan::single(1);
  s.trace = evaluate_strings(s.ops, s.plan, {2.0});
  return s;
}

} // namespace

TEST_SUITE("step_size") {

TEST_CASE("single operator extrapolates by the inverse relaxation") {
  for (double alpha : {0.5, 1.0, 1.5}) {
    CAPTURE(alpha);
    Setup s = single_hyperplane(alpha);
    CHECK(std::abs(step_size_inner(s.trace, s.plan, s.ops) - 1.0 / alpha) <=
          1e-12);
    CHECK(std::abs(step_size_sum(s.trace, s.plan, s.ops) - 1.0 / alpha) <=
          1e-12);

    Setup b = single_block(alpha);
    CHECK(std::abs(step_size_block_closed(b.trace, b.plan, b.ops) -
                   1.0 / alpha) <= 1e-12);

    Setup p = single_parabola(alpha);
    CHECK(std::abs(step_size_subgradient_closed(p.trace, p.plan, p.ops) -
                   1.0 / alpha) <= 1e-12);
  }
}

TEST_CASE("two orthogonal projection steps give a unit step size") {
  std::vector<RelaxedCutter> ops;
  ops.push_back(make_hyperplane({1.0, 0.0}, 0.0, 1.0));
  ops.push_back(make_hyperplane({0.0, 1.0}, 0.0, 1.0));
  StringPlan plan = StringPlan::single(2);
  StringTrace trace = evaluate_strings(ops, plan, {2.0, 3.0});
  // numerator 4 + 9 against denominator 13
  CHECK(step_size_inner(trace, plan, ops) == doctest::Approx(1.0));
  CHECK(step_size_sum(trace, plan, ops) == doctest::Approx(1.0));
}

TEST_CASE("closed block form frozen values") {
  Setup unit = single_block(1.0);
  CHECK(step_size_block_closed(unit.trace, unit.plan, unit.ops) ==
        doctest::Approx(1.0));
  Setup half = single_block(0.5);
  CHECK(step_size_block_closed(half.trace, half.plan, half.ops) ==
        doctest::Approx(2.0));
  Setup hyper = single_hyperplane(1.0);
  CHECK_THROWS_AS(step_size_block_closed(hyper.trace, hyper.plan, hyper.ops),
                  std::invalid_argument);
}

TEST_CASE("closed subgradient form frozen values") {
  Setup unit = single_parabola(1.0);
  CHECK(step_size_subgradient_closed(unit.trace, unit.plan, unit.ops) ==
        doctest::Approx(1.0));
  // alpha = 1.5 at x = 2: numerator 1.6875, denominator 2.53125
  Setup wide = single_parabola(1.5);
  CHECK(step_size_subgradient_closed(wide.trace, wide.plan, wide.ops) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  Setup hyper = single_hyperplane(1.0);
  CHECK_THROWS_AS(
      step_size_subgradient_closed(hyper.trace, hyper.plan, hyper.ops),
      std::invalid_argument);
}

TEST_CASE("all forms agree on random block plans") {
  SplitMix64 rng(41);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 3 + rng.next() % 5;
    auto problem = gen_consistent_linear(rng.next(), n + 2, n, 3,
                                         rng.next() % 2 == 0
                                             ? LinearFeasibility::WeightMode::Identity
                                             : LinearFeasibility::WeightMode::RowInverseNormSq);
    std::vector<double> alphas{random_alpha(rng), random_alpha(rng),
                               random_alpha(rng)};
    auto ops = build_operators(problem, alphas);
    StringPlan plan = StringPlan::contiguous(3, 1 + rng.next() % 3);
    StringTrace trace = evaluate_strings(ops, plan, random_vector(rng, n));
    if (residual(trace) <= 1e-12) continue;

    const double inner = step_size_inner(trace, plan, ops);
    const double sum = step_size_sum(trace, plan, ops);
    const double closed = step_size_block_closed(trace, plan, ops);
    CHECK(std::abs(sum - inner) <= 1e-9 * std::max(1.0, std::abs(inner)));
    CHECK(std::abs(closed - inner) <= 1e-9 * std::max(1.0, std::abs(inner)));
    CHECK(inner >= step_size_lower_bound(plan, ops) - 1e-12);
  }
}

TEST_CASE("all forms agree on random subgradient plans") {
  SplitMix64 rng(43);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 3 + rng.next() % 5;
    auto system = std::make_shared<const QuadraticSystem>(
        gen_quadratic(rng.next(), n, 4, 0.0));
    std::vector<double> alphas;
    for (int i = 0; i < 4; ++i) alphas.push_back(random_alpha(rng));
    auto ops = build_operators(system, alphas);
    StringPlan plan = StringPlan::contiguous(4, 1 + rng.next() % 4);
    StringTrace trace = evaluate_strings(ops, plan, random_vector(rng, n));
    if (residual(trace) <= 1e-12) continue;

    const double inner = step_size_inner(trace, plan, ops);
    const double sum = step_size_sum(trace, plan, ops);
    const double closed = step_size_subgradient_closed(trace, plan, ops);
    CHECK(std::abs(sum - inner) <= 1e-9 * std::max(1.0, std::abs(inner)));
    CHECK(std::abs(closed - inner) <= 1e-9 * std::max(1.0, std::abs(inner)));
    CHECK(inner >= step_size_lower_bound(plan, ops) - 1e-12);
  }
}

TEST_CASE("lower bound frozen values") {
  std::vector<RelaxedCutter> ops;
  for (int i = 0; i < 4; ++i) {
    ops.push_back(make_hyperplane({1.0, 0.0}, double(i), 1.0));
  }
  StringPlan plan = StringPlan::contiguous(4, 2); // strings of length 2
  CHECK(step_size_lower_bound(plan, ops) == doctest::Approx(0.25));

  std::vector<RelaxedCutter> one;
  one.push_back(make_hyperplane({1.0}, 0.0, 1.0));
  CHECK(step_size_lower_bound(StringPlan::single(1), one) ==
        doctest::Approx(0.5));

  std::vector<RelaxedCutter> four;
  four.push_back(make_hyperplane({1.0}, 0.0, 1.5));
  four.push_back(make_hyperplane({1.0}, 1.0, 1.0));
  four.push_back(make_hyperplane({1.0}, 2.0, 0.5));
  four.push_back(make_hyperplane({1.0}, 3.0, 1.0));
  CHECK(step_size_lower_bound(StringPlan::single(4), four) ==
        doctest::Approx(1.0 / 24.0).epsilon(1e-12));
}

TEST_CASE("fixed-point branch and zero-denominator contract") {
  std::vector<RelaxedCutter> ops;
  ops.push_back(make_hyperplane({1.0, 0.0}, 1.0, 1.0));
  StringPlan plan = StringPlan::single(1);
  StringTrace fixed = evaluate_strings(ops, plan, {1.0, 0.0});
  CHECK(step_size(StepSizeMode{}, fixed, plan, ops) == 1.0);
  CHECK(step_size(StepSizeMode{StepSizeVariant::Unit, 1e-16}, fixed, plan,
                  ops) == 1.0);
  CHECK_THROWS_AS(step_size_inner(fixed, plan, ops), std::logic_error);
}

} // TEST_SUITE
