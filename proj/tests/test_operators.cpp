#include "doctest.h"

#include <array>
#include <cmath>

#include "strav/errors.hpp"
#include "strav/operators.hpp"

#include "helpers.hpp"

using namespace strav;
using namespace strav::test;

namespace {

// Thm-style strong quasi-nonexpansiveness slack for a relaxed cutter:
//   ||x-z||^2 - ((2-a)/a) ||Tx-x||^2 - ||Tx-z||^2  >= 0.
double sqne_slack(const RelaxedCutter& op, const Vector& x, const Vector& z) {
  Vector tx = op.apply(x);
  Vector step = subtract(tx, x);
  Vector ex = subtract(x, z);
  Vector et = subtract(tx, z);
  const double a = op.alpha();
  return dot(ex, ex) - (2.0 - a) / a * dot(step, step) - dot(et, et);
}

FamilyCase make_case(int family, SplitMix64& rng) {
  const std::size_t n = 2 + rng.next() % 8;
  const double alpha = random_alpha(rng);
  switch (family) {
  case 0:
    return hyperplane_case(rng, n, alpha);
  case 1:
    return halfspace_case(rng, n, alpha);
  case 2:
    return block_case(rng, n, alpha);
  default:
    return subgradient_case(rng, n, alpha);
  }
}

} // namespace

TEST_SUITE("operators") {

TEST_CASE("hyperplane projection closed form") {
  auto op = make_hyperplane({1.0, 0.0}, 1.0, 1.0);
  CHECK(op.apply({3.0, 4.0}) == Vector{1.0, 4.0});
  // point already on the hyperplane is fixed
  CHECK(op.apply({1.0, -2.0}) == Vector{1.0, -2.0});
}

TEST_CASE("halfspace projection only acts on violated points") {
  auto op = make_halfspace({1.0, 0.0}, 1.0, 1.5);
  CHECK(op.apply({0.5, 7.0}) == Vector{0.5, 7.0});
  Vector moved = op.apply({3.0, 0.0});
  CHECK(moved[0] == doctest::Approx(3.0 - 1.5 * 2.0));
}

TEST_CASE("subgradient projection on a scalar parabola") {
  auto op = make_subgradient(parabola_minus_one(), 1.0);
  Vector out = op.apply({2.0});
  CHECK(out[0] == doctest::Approx(1.25).epsilon(1e-15));
  // inside the zero-sublevel set nothing moves
  CHECK(op.apply({0.5}) == Vector{0.5});
}

TEST_CASE("one-by-one block operator solves its equation in one unit step") {
  auto op = make_block_linear(Matrix(1, 1, {2.0}), Matrix::identity(1),
                              {4.0}, 1.0);
  const auto& blk = std::get<BlockLinear>(op.kind());
  CHECK(blk.spectral == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(op.apply({0.0})[0] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("construction rejects bad inputs") {
  CHECK_THROWS_AS(make_hyperplane({1.0, 0.0}, 0.0, 2.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_hyperplane({1.0, 0.0}, 0.0, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_hyperplane({0.0, 0.0}, 1.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_block_linear(Matrix(2, 2), Matrix::identity(2),
                                    {0.0, 0.0}, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_subgradient(ConvexFunctionHandle{}, 1.0),
                  std::invalid_argument);
}

TEST_CASE("positive value with zero subgradient certifies infeasibility") {
  ConvexFunctionHandle fn;
  fn.dim = 1;
  fn.eval = [](const Vector& x) { return x[0] * x[0] + 1.0; };
  fn.subgrad = [](const Vector& x) { return Vector{2.0 * x[0]}; };
  auto op = make_subgradient(fn, 1.0);
  CHECK_THROWS_AS(op.apply({0.0}), InfeasibleError);
}

TEST_CASE("dimension mismatch is rejected") {
  auto op = make_hyperplane({1.0, 0.0}, 1.0, 1.0);
  CHECK_THROWS_AS(op.apply({1.0, 2.0, 3.0}), std::invalid_argument);
}

TEST_CASE("composition relaxation") {
  const double single[] = {0.7};
  CHECK(composition_relaxation(single) == doctest::Approx(0.7).epsilon(1e-15));
  const double pair[] = {1.0, 1.0};
  CHECK(composition_relaxation(pair) ==
        doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  const double mixed[] = {0.5, 1.5};
  CHECK(composition_relaxation(mixed) ==
        doctest::Approx(20.0 / 13.0).epsilon(1e-15));
  const std::vector<double> empty;
  CHECK_THROWS_AS(composition_relaxation(empty), std::invalid_argument);
  const double bad[] = {2.0};
  CHECK_THROWS_AS(composition_relaxation(bad), std::invalid_argument);
}

TEST_CASE("composition relaxation is monotone in each entry") {
  SplitMix64 rng(23);
  for (int rep = 0; rep < 200; ++rep) {
    std::array<double, 3> alphas{random_alpha(rng), random_alpha(rng),
                                 random_alpha(rng)};
    const double base = composition_relaxation(alphas);
    CHECK(base > 0.0);
    CHECK(base < 2.0);
    const std::size_t i = rng.next() % alphas.size();
    const double bumped_value =
        alphas[i] + 0.5 * (1.95 - alphas[i]) * rng.uniform();
    auto bumped = alphas;
    bumped[i] = bumped_value;
    CHECK(composition_relaxation(bumped) >= base - 1e-12);
  }
}

TEST_CASE("combination relaxation") {
  const double a1[] = {1.5};
  const double w1[] = {1.0};
  CHECK(combination_relaxation(a1, w1) == 1.5);
  const double a2[] = {1.0, 1.0};
  const double w2[] = {0.5, 0.5};
  CHECK(combination_relaxation(a2, w2) == 1.0);
  const double a3[] = {0.5, 1.5};
  const double w3[] = {0.25, 0.75};
  CHECK(combination_relaxation(a3, w3) == doctest::Approx(1.25).epsilon(1e-15));
  const double short_w[] = {1.0};
  CHECK_THROWS_AS(combination_relaxation(a3, short_w), std::invalid_argument);
  const double bad_w[] = {0.5, 0.4};
  CHECK_THROWS_AS(combination_relaxation(a3, bad_w), std::invalid_argument);
}

TEST_CASE("cutter inequality slack: frozen cases") {
  auto op = make_hyperplane({1.0, 0.0}, 0.0, 1.5);
  Vector x{2.0, 0.0};
  Vector z{0.0, 5.0};
  CHECK(op.cutter_image(x) == Vector{0.0, 0.0});
  CHECK(cutter_inequality_slack(op, x, z) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(cutter_inequality_slack(op, z, z) == 0.0);

  auto sub = make_subgradient(parabola_minus_one(), 1.0);
  CHECK(cutter_inequality_slack(sub, {2.0}, {0.0}) >= 0.0);
}

TEST_CASE("relaxed cutter and strong quasi-nonexpansiveness inequalities "
          "hold on sampled pairs") {
  SplitMix64 rng(101);
  for (int family = 0; family < 4; ++family) {
    CAPTURE(family);
    for (int rep = 0; rep < 1000; ++rep) {
      FamilyCase c = make_case(family, rng);
      CHECK(cutter_inequality_slack(c.op, c.x, c.z) >= -1e-10);
      CHECK(sqne_slack(c.op, c.x, c.z) >= -1e-9);
    }
  }
}

TEST_CASE("singleton row block with inverse-norm weight is the hyperplane "
          "projection") {
  SplitMix64 rng(7);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 2 + rng.next() % 6;
    Vector a = nonzero_vector(rng, n);
    const double b = rng.uniform(-5.0, 5.0);
    const double alpha = random_alpha(rng);
    auto hyper = make_hyperplane(a, b, alpha);
    Matrix row(1, n, a);
    auto block = make_block_linear(
        std::move(row), Matrix(1, 1, {1.0 / dot(a, a)}), {b}, alpha);
    Vector x = random_vector(rng, n);
    CHECK(norm_inf(subtract(hyper.apply(x), block.apply(x))) <= 1e-12);
  }
}

TEST_CASE("affine subgradient projection is the halfspace projection") {
  SplitMix64 rng(8);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 2 + rng.next() % 6;
    Vector a = nonzero_vector(rng, n);
    const double b = rng.uniform(-5.0, 5.0);
    const double alpha = random_alpha(rng);
    auto half = make_halfspace(a, b, alpha);
    ConvexFunctionHandle fn;
    fn.dim = n;
    fn.eval = [a, b](const Vector& x) { return dot(a, x) - b; };
    fn.subgrad = [a](const Vector&) { return a; };
    auto sub = make_subgradient(std::move(fn), alpha);
    Vector x = random_vector(rng, n);
    CHECK(norm_inf(subtract(half.apply(x), sub.apply(x))) <= 1e-12);
  }
}

TEST_CASE("quadratic handles satisfy the subgradient inequality on sampled "
          "pairs") {
  SplitMix64 rng(9);
  auto system = std::make_shared<const QuadraticSystem>(
      gen_quadratic(3, 6, 4, 0.0));
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t i = rng.next() % system->count();
    Vector x = random_vector(rng, 6, -3.0, 3.0);
    Vector y = random_vector(rng, 6, -3.0, 3.0);
    Vector sub = system->subgradient(i, y);
    const double lhs = dot(sub, subtract(x, y));
    const double rhs =
        system->function_value(i, x) - system->function_value(i, y);
    CHECK(lhs <= rhs + 1e-9 * std::max(1.0, std::abs(rhs)));
  }
}

} // TEST_SUITE
