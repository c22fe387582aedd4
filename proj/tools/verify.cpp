#include "verify.hpp"

#include <cmath>
#include <functional>
#include <iostream>
#include <limits>
#include <memory>

#include "strav/errors.hpp"
#include "strav/problems.hpp"
#include "strav/rng.hpp"
#include "strav/solver.hpp"

namespace strav::bench {

namespace {

struct Checker {
  PropertyResult result;

  explicit Checker(std::string name) { result.name = std::move(name); }

  void check(bool ok) {
    ++result.checks;
    if (!ok) ++result.failures;
  }

  void check_throws(const std::function<void()>& body) {
    ++result.checks;
    try {
      body();
      ++result.failures;
    } catch (const std::exception&) {
    }
  }
};

Vector random_vector(SplitMix64& rng, std::size_t n, double lo = -10.0,
                     double hi = 10.0) {
  Vector v(n);
  for (double& e : v) e = rng.uniform(lo, hi);
  return v;
}

Vector nonzero_vector(SplitMix64& rng, std::size_t n) {
  for (;;) {
    Vector v = random_vector(rng, n, -1.0, 1.0);
    if (norm(v) > 1e-3) return v;
  }
}

double random_alpha(SplitMix64& rng) { return rng.uniform(0.05, 1.95); }

struct SampledOperator {
  RelaxedCutter op;
  Vector x;
  Vector z; // feasible fixed point
};

SampledOperator sample_operator(int family, SplitMix64& rng) {
  const std::size_t n = 2 + rng.next() % 8;
  const double alpha = random_alpha(rng);
  switch (family) {
  case 0: {
    Vector a = nonzero_vector(rng, n);
    const double b = rng.uniform(-5.0, 5.0);
    Vector z = random_vector(rng, n);
    z = add_scaled(z, (b - dot(a, z)) / dot(a, a), a);
    return {make_hyperplane(a, b, alpha), random_vector(rng, n), std::move(z)};
  }
  case 1: {
    Vector a = nonzero_vector(rng, n);
    const double b = rng.uniform(-5.0, 5.0);
    Vector z = random_vector(rng, n);
    const double g = dot(a, z) - b;
    if (g > 0.0) z = add_scaled(z, -g / dot(a, a), a);
    return {make_halfspace(a, b, alpha), random_vector(rng, n), std::move(z)};
  }
  case 2: {
    const std::size_t rows = 1 + rng.next() % 4;
    std::vector<double> entries(rows * n);
    for (double& e : entries) e = rng.uniform(-1.0, 1.0);
    Matrix a(rows, n, std::move(entries));
    Vector z = random_vector(rng, n, -2.0, 2.0);
    Vector b = a.multiply(z);
    Matrix w = Matrix::identity(rows);
    if (rng.next() % 2 == 0) {
      for (std::size_t i = 0; i < rows; ++i) {
        double rn2 = 0.0;
        for (std::size_t j = 0; j < n; ++j) rn2 += a(i, j) * a(i, j);
        w(i, i) = 1.0 / rn2;
      }
    }
    return {make_block_linear(std::move(a), std::move(w), std::move(b), alpha),
            random_vector(rng, n), std::move(z)};
  }
  default: {
    auto system = std::make_shared<const QuadraticSystem>(
        gen_quadratic(rng.next(), n, 1, 0.0));
    const double alphas[] = {alpha};
    auto ops = build_operators(system, alphas);
    return {std::move(ops.front()), random_vector(rng, n), system->anchor()};
  }
  }
}

PropertyResult relaxed_cutter_inequality() {
  Checker c("relaxed-cutter-inequality");
  SplitMix64 rng(2001);
  for (int family = 0; family < 4; ++family) {
    for (int rep = 0; rep < 1000; ++rep) {
      SampledOperator s = sample_operator(family, rng);
      c.check(cutter_inequality_slack(s.op, s.x, s.z) >= -1e-10);
    }
  }
  return c.result;
}

PropertyResult sqne_equivalence() {
  Checker c("sqne-equivalence");
  SplitMix64 rng(2002);
  for (int family = 0; family < 4; ++family) {
    for (int rep = 0; rep < 1000; ++rep) {
      SampledOperator s = sample_operator(family, rng);
      Vector tx = s.op.apply(s.x);
      Vector step = subtract(tx, s.x);
      Vector ex = subtract(s.x, s.z);
      Vector et = subtract(tx, s.z);
      const double a = s.op.alpha();
      c.check(dot(et, et) <=
              dot(ex, ex) - (2.0 - a) / a * dot(step, step) + 1e-9);
    }
  }
  return c.result;
}

PropertyResult constructor_rejection() {
  Checker c("constructor-rejection");
  c.check_throws([] { make_hyperplane({1.0, 0.0}, 0.0, 2.5); });
  c.check_throws([] { make_hyperplane({1.0, 0.0}, 0.0, 2.0); });
  c.check_throws([] { make_hyperplane({1.0, 0.0}, 0.0, 0.0); });
  c.check_throws([] { make_halfspace({0.0, 0.0}, 1.0, 1.0); });
  c.check_throws([] {
    make_block_linear(Matrix(2, 3), Matrix::identity(2), {0.0, 0.0}, 1.0);
  });
  c.check_throws([] { make_subgradient(ConvexFunctionHandle{}, 1.0); });
  c.check_throws([] { RelaxationSchedule::constant(2.0); });
  c.check_throws([] { ConstraintSet::box({1.0}, {0.0}); });
  c.check_throws([] { partition_rows(3, 5); });
  c.check_throws([] {
    StringPlan plan;
    plan.strings = {{0}};
    plan.weights = {0.5};
    plan.validate(1);
  });
  return c.result;
}

PropertyResult relaxation_algebra() {
  Checker c("relaxation-algebra");
  SplitMix64 rng(2003);
  const double pair[] = {1.0, 1.0};
  c.check(std::abs(composition_relaxation(pair) - 4.0 / 3.0) <= 1e-14);
  const double mixed[] = {0.5, 1.5};
  c.check(std::abs(composition_relaxation(mixed) - 20.0 / 13.0) <= 1e-14);
  for (int rep = 0; rep < 100; ++rep) {
    const double single[] = {random_alpha(rng)};
    c.check(std::abs(composition_relaxation(single) - single[0]) <= 1e-14);
    double alphas[3] = {random_alpha(rng), random_alpha(rng),
                        random_alpha(rng)};
    const double base = composition_relaxation(alphas);
    c.check(base > 0.0 && base < 2.0);
    const std::size_t i = rng.next() % 3;
    alphas[i] += 0.5 * (1.95 - alphas[i]) * rng.uniform();
    c.check(composition_relaxation(alphas) >= base - 1e-12);
  }
  const double a3[] = {0.5, 1.5};
  const double w3[] = {0.25, 0.75};
  c.check(std::abs(combination_relaxation(a3, w3) - 1.25) <= 1e-14);
  const double bad_w[] = {0.5, 0.4};
  c.check_throws([&] { combination_relaxation(a3, bad_w); });
  return c.result;
}

std::vector<RelaxedCutter> hyperplanes_through(SplitMix64& rng, std::size_t m,
                                               std::size_t n,
                                               const Vector& z) {
  std::vector<RelaxedCutter> ops;
  for (std::size_t i = 0; i < m; ++i) {
    Vector a = nonzero_vector(rng, n);
    ops.push_back(make_hyperplane(a, dot(a, z), random_alpha(rng)));
  }
  return ops;
}

PropertyResult trace_telescoping() {
  Checker c("trace-telescoping");
  SplitMix64 rng(2004);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 2 + rng.next() % 5;
    const std::size_t m = 2 + rng.next() % 5;
    Vector z = random_vector(rng, n);
    auto ops = hyperplanes_through(rng, m, n, z);
    StringPlan plan = StringPlan::contiguous(m, 1 + rng.next() % m);
    Vector x = random_vector(rng, n);
    StringTrace trace = evaluate_strings(ops, plan, x);
    Vector avg(n, 0.0);
    for (std::size_t t = 0; t < plan.count(); ++t) {
      Vector sum(n, 0.0);
      for (const auto& y : trace.strings[t].increments) {
        for (std::size_t j = 0; j < n; ++j) sum[j] += y[j];
      }
      c.check(norm_inf(subtract(
                  sum, subtract(trace.strings[t].endpoint(), x))) <= 1e-10);
      for (std::size_t j = 0; j < n; ++j) {
        avg[j] += plan.weights[t] * trace.strings[t].endpoint()[j];
      }
    }
    c.check(norm_inf(subtract(avg, trace.averaged)) <= 1e-12);
  }
  return c.result;
}

PropertyResult string_chain_bounds() {
  Checker c("string-chain-bounds");
  SplitMix64 rng(2005);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 2 + rng.next() % 5;
    const std::size_t m = 2 + rng.next() % 5;
    Vector z = random_vector(rng, n);
    auto ops = hyperplanes_through(rng, m, n, z);
    StringPlan plan = StringPlan::contiguous(m, 1 + rng.next() % m);
    Vector x = random_vector(rng, n);
    StringTrace trace = evaluate_strings(ops, plan, x);
    const double lhs = dot(subtract(z, x), subtract(trace.averaged, x));
    double mid = 0.0;
    for (std::size_t t = 0; t < plan.count(); ++t) {
      double s = 0.0;
      for (std::size_t i = 0; i < trace.strings[t].increments.size(); ++i) {
        const double a = ops[plan.strings[t][i]].alpha();
        const Vector& y = trace.strings[t].increments[i];
        s += (1.0 / a - 0.5) * dot(y, y);
      }
      mid += plan.weights[t] * s;
    }
    const double r = residual(trace);
    const double low = step_size_lower_bound(plan, ops) * r * r;
    c.check(lhs >= mid - 1e-9);
    c.check(mid >= low - 1e-9);
  }
  return c.result;
}

PropertyResult sigma_cross_forms() {
  Checker c("sigma-cross-forms");
  SplitMix64 rng(2006);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 3 + rng.next() % 5;
    // block-linear family
    auto blocks = gen_consistent_linear(
        rng.next(), n + 2, n, 3,
        rng.next() % 2 == 0 ? LinearFeasibility::WeightMode::Identity
                            : LinearFeasibility::WeightMode::RowInverseNormSq);
    const std::vector<double> alphas{random_alpha(rng), random_alpha(rng),
                                     random_alpha(rng)};
    auto bops = build_operators(blocks, alphas);
    StringPlan bplan = StringPlan::contiguous(3, 1 + rng.next() % 3);
    StringTrace btrace = evaluate_strings(bops, bplan, random_vector(rng, n));
    if (residual(btrace) > 1e-12) {
      const double inner = step_size_inner(btrace, bplan, bops);
      const double tol = 1e-9 * std::max(1.0, std::abs(inner));
      c.check(std::abs(step_size_sum(btrace, bplan, bops) - inner) <= tol);
      c.check(std::abs(step_size_block_closed(btrace, bplan, bops) - inner) <=
              tol);
      c.check(inner >= step_size_lower_bound(bplan, bops) - 1e-12);
    }

    // subgradient family
    auto system = std::make_shared<const QuadraticSystem>(
        gen_quadratic(rng.next(), n, 4, 0.0));
    std::vector<double> qalphas;
    for (int i = 0; i < 4; ++i) qalphas.push_back(random_alpha(rng));
    auto qops = build_operators(system, qalphas);
    StringPlan qplan = StringPlan::contiguous(4, 1 + rng.next() % 4);
    StringTrace qtrace = evaluate_strings(qops, qplan, random_vector(rng, n));
    if (residual(qtrace) > 1e-12) {
      const double inner = step_size_inner(qtrace, qplan, qops);
      const double tol = 1e-9 * std::max(1.0, std::abs(inner));
      c.check(std::abs(step_size_sum(qtrace, qplan, qops) - inner) <= tol);
      c.check(std::abs(step_size_subgradient_closed(qtrace, qplan, qops) -
                       inner) <= tol);
      c.check(inner >= step_size_lower_bound(qplan, qops) - 1e-12);
    }
  }
  return c.result;
}

PropertyResult sigma_single_operator() {
  Checker c("sigma-single-operator");
  for (double alpha : {0.5, 1.0, 1.5}) {
    std::vector<RelaxedCutter> hyper;
    hyper.push_back(make_hyperplane({1.0, 0.0}, 1.0, alpha));
    StringPlan plan = StringPlan::single(1);
    StringTrace trace = evaluate_strings(hyper, plan, {3.0, 4.0});
    c.check(std::abs(step_size_inner(trace, plan, hyper) - 1.0 / alpha) <=
            1e-12);
    c.check(std::abs(step_size_sum(trace, plan, hyper) - 1.0 / alpha) <=
            1e-12);
  }
  return c.result;
}

PropertyResult kaczmarz_reduction() {
  Checker c("kaczmarz-reduction");
  SplitMix64 rng(2007);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 2 + rng.next() % 6;
    Vector a = nonzero_vector(rng, n);
    const double b = rng.uniform(-5.0, 5.0);
    const double alpha = random_alpha(rng);
    auto hyper = make_hyperplane(a, b, alpha);
    auto block = make_block_linear(Matrix(1, n, a),
                                   Matrix(1, 1, {1.0 / dot(a, a)}), {b}, alpha);
    Vector x = random_vector(rng, n);
    c.check(norm_inf(subtract(hyper.apply(x), block.apply(x))) <= 1e-12);
  }
  return c.result;
}

PropertyResult affine_reduction() {
  Checker c("affine-reduction");
  SplitMix64 rng(2008);
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
    c.check(norm_inf(subtract(half.apply(x), sub.apply(x))) <= 1e-12);
  }
  return c.result;
}

PropertyResult subgradient_inequality() {
  Checker c("subgradient-inequality");
  SplitMix64 rng(2009);
  auto system =
      std::make_shared<const QuadraticSystem>(gen_quadratic(5, 6, 4, 0.0));
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t i = rng.next() % system->count();
    Vector x = random_vector(rng, 6, -3.0, 3.0);
    Vector y = random_vector(rng, 6, -3.0, 3.0);
    const double lhs = dot(system->subgradient(i, y), subtract(x, y));
    const double rhs =
        system->function_value(i, x) - system->function_value(i, y);
    c.check(lhs <= rhs + 1e-9 * std::max(1.0, std::abs(rhs)));
  }
  return c.result;
}

PropertyResult projection_exactness() {
  Checker c("projection-exactness");
  SplitMix64 rng(2010);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 2 + rng.next() % 5;
    std::vector<ConstraintSet> sets;
    sets.push_back(ConstraintSet::box(Vector(n, -1.0), Vector(n, 1.0)));
    sets.push_back(ConstraintSet::ball(random_vector(rng, n, -2.0, 2.0),
                                       rng.uniform(0.5, 3.0)));
    sets.push_back(ConstraintSet::halfspace(nonzero_vector(rng, n),
                                            rng.uniform(-2.0, 2.0)));
    sets.push_back(ConstraintSet::nonnegative_orthant());
    Vector x = random_vector(rng, n);
    for (const auto& set : sets) {
      Vector p = project_onto(set, x);
      // idempotence and the variational inequality against a feasible point
      c.check(norm_inf(subtract(project_onto(set, p), p)) <= 1e-12);
      Vector feasible = project_onto(set, random_vector(rng, n));
      c.check(dot(subtract(x, p), subtract(feasible, p)) <= 1e-9);
    }
  }
  return c.result;
}

PropertyResult generator_determinism() {
  Checker c("generator-determinism");
  c.check(to_text(gen_quadratic(42, 3, 2, 0.0)) ==
          to_text(gen_quadratic(42, 3, 2, 0.0)));
  c.check(to_text(gen_consistent_linear(7, 6, 4, 2)) ==
          to_text(gen_consistent_linear(7, 6, 4, 2)));
  c.check(gen_start(3, 20) == gen_start(3, 20));
  c.check(gen_start(3, 20) != gen_start(4, 20));
  Vector x = gen_start(11, 100);
  bool in_range = true;
  for (double v : x) in_range = in_range && v >= -10.0 && v <= 10.0;
  c.check(in_range);
  auto q = gen_quadratic(9, 5, 3, 0.25);
  for (std::size_t i = 0; i < q.count(); ++i) {
    c.check(std::abs(q.function_value(i, q.anchor()) + 0.25) <= 1e-10);
  }
  return c.result;
}

PropertyResult fejer_monotonicity() {
  Checker c("fejer-monotonicity");
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    auto system = std::make_shared<const QuadraticSystem>(
        gen_quadratic(seed, 12, 8, 0.0));
    std::vector<double> alphas(8, 1.0);
    auto ops = build_operators(system, alphas);
    StringPlan plan = StringPlan::contiguous(8, 4);
    auto report = solve(
        ops, plan, RelaxationSchedule::constant(1.0), StepSizeMode{},
        StoppingRule{}, gen_start(seed + 100, 12),
        [&](const Vector& x) { return system->max_violation(x); },
        std::optional<Vector>(system->anchor()));
    c.check(report.status == SolveStatus::Feasible);
    double prev = std::numeric_limits<double>::infinity();
    bool monotone = true;
    for (const auto& row : report.rows) {
      monotone = monotone && *row.error_to_reference <= prev + 1e-12;
      prev = *row.error_to_reference;
    }
    c.check(monotone);
    c.check(fejer_audit(report, system->anchor()));
  }
  return c.result;
}

PropertyResult spectral_radius_properties() {
  Checker c("spectral-radius");
  SplitMix64 rng(2011);
  c.check(std::abs(spectral_radius_psd(Matrix::identity(3)) - 1.0) <= 1e-9);
  c.check(std::abs(spectral_radius_psd(Matrix::diagonal({1.0, 4.0})) - 4.0) <=
          4e-9);
  c.check(spectral_radius_psd(Matrix(4, 4)) == 0.0);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 2 + rng.next() % 8;
    std::vector<double> entries(n * n);
    for (double& e : entries) e = rng.uniform(-1.0, 1.0);
    Matrix b = Matrix(n, n, std::move(entries))
                   .weighted_gram(Matrix::identity(n));
    const double lam = spectral_radius_psd(b);
    c.check(lam >= 0.0);
    const double scale = rng.uniform(0.1, 10.0);
    Matrix sb = b;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) sb(i, j) = scale * b(i, j);
    }
    c.check(std::abs(spectral_radius_psd(sb) - scale * lam) <=
            1e-8 * std::max(scale * lam, 1.0));
  }
  return c.result;
}

} // namespace

std::vector<PropertyResult> run_verification() {
  std::vector<PropertyResult> results;
  results.push_back(relaxed_cutter_inequality());
  results.push_back(sqne_equivalence());
  results.push_back(constructor_rejection());
  results.push_back(relaxation_algebra());
  results.push_back(trace_telescoping());
  results.push_back(string_chain_bounds());
  results.push_back(sigma_cross_forms());
  results.push_back(sigma_single_operator());
  results.push_back(kaczmarz_reduction());
  results.push_back(affine_reduction());
  results.push_back(subgradient_inequality());
  results.push_back(projection_exactness());
  results.push_back(generator_determinism());
  results.push_back(fejer_monotonicity());
  results.push_back(spectral_radius_properties());
  return results;
}

int cmd_verify() {
  bool ok = true;
  for (const auto& r : run_verification()) {
    std::cout << r.name << ": " << r.checks << " checks, " << r.failures
              << " failures " << (r.failures == 0 ? "[ok]" : "[FAIL]")
              << "\n";
    ok = ok && r.failures == 0;
  }
  std::cout << (ok ? "verification passed" : "verification FAILED") << "\n";
  return ok ? 0 : 1;
}

} // namespace strav::bench
