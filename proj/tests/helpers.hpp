#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "strav/operators.hpp"
#include "strav/problems.hpp"
#include "strav/rng.hpp"

namespace strav::test {

inline Vector random_vector(SplitMix64& rng, std::size_t n, double lo = -10.0,
                            double hi = 10.0) {
  Vector v(n);
  for (double& e : v) e = rng.uniform(lo, hi);
  return v;
}

inline Vector nonzero_vector(SplitMix64& rng, std::size_t n) {
  for (;;) {
    Vector v = random_vector(rng, n, -1.0, 1.0);
    if (norm(v) > 1e-3) return v;
  }
}

inline double random_alpha(SplitMix64& rng) {
  return rng.uniform(0.05, 1.95);
}

/// Point on the hyperplane <a, z> = b.
inline Vector on_hyperplane(SplitMix64& rng, const Vector& a, double b) {
  Vector v = random_vector(rng, a.size());
  return add_scaled(v, (b - dot(a, v)) / dot(a, a), a);
}

/// Point with <a, z> <= b.
inline Vector in_halfspace(SplitMix64& rng, const Vector& a, double b) {
  Vector v = random_vector(rng, a.size());
  const double g = dot(a, v) - b;
  return g > 0.0 ? add_scaled(v, -g / dot(a, a), a) : v;
}

/// g(x) = x^2 - 1 on the line, subgradient 2x.
inline ConvexFunctionHandle parabola_minus_one() {
  ConvexFunctionHandle fn;
  fn.dim = 1;
  fn.eval = [](const Vector& x) { return x[0] * x[0] - 1.0; };
  fn.subgrad = [](const Vector& x) { return Vector{2.0 * x[0]}; };
  return fn;
}

/// One operator of each implemented kind plus a feasible fixed point and a
/// probe point, for the inequality property suites.
struct FamilyCase {
  RelaxedCutter op;
  Vector x;
  Vector z;
};

inline FamilyCase hyperplane_case(SplitMix64& rng, std::size_t n,
                                  double alpha) {
  Vector a = nonzero_vector(rng, n);
  const double b = rng.uniform(-5.0, 5.0);
  Vector z = on_hyperplane(rng, a, b);
  Vector x = random_vector(rng, n);
  return {make_hyperplane(std::move(a), b, alpha), std::move(x), std::move(z)};
}

inline FamilyCase halfspace_case(SplitMix64& rng, std::size_t n,
                                 double alpha) {
  Vector a = nonzero_vector(rng, n);
  const double b = rng.uniform(-5.0, 5.0);
  Vector z = in_halfspace(rng, a, b);
  Vector x = random_vector(rng, n);
  return {make_halfspace(std::move(a), b, alpha), std::move(x), std::move(z)};
}

inline FamilyCase block_case(SplitMix64& rng, std::size_t n, double alpha) {
  const std::size_t rows = 1 + static_cast<std::size_t>(rng.next() % 4);
  std::vector<double> entries(rows * n);
  for (double& e : entries) e = rng.uniform(-1.0, 1.0);
  Matrix a(rows, n, std::move(entries));
  Vector certificate = random_vector(rng, n, -2.0, 2.0);
  Vector b = a.multiply(certificate);
  Matrix w = Matrix::identity(rows);
  if (rng.next() % 2 == 0) {
    for (std::size_t i = 0; i < rows; ++i) {
      double rn2 = 0.0;
      for (std::size_t j = 0; j < n; ++j) rn2 += a(i, j) * a(i, j);
      w(i, i) = 1.0 / rn2;
    }
  }
  Vector x = random_vector(rng, n);
  return {make_block_linear(std::move(a), std::move(w), std::move(b), alpha),
          std::move(x), std::move(certificate)};
}

inline FamilyCase subgradient_case(SplitMix64& rng, std::size_t n,
                                   double alpha) {
  auto system = std::make_shared<const QuadraticSystem>(
      gen_quadratic(rng.next(), n, 1, 0.0));
  const double alphas[] = {alpha};
  auto ops = build_operators(system, alphas);
  Vector x = random_vector(rng, n);
  return {std::move(ops.front()), std::move(x), system->anchor()};
}

} // namespace strav::test
