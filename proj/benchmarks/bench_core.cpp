#include <benchmark/benchmark.h>

#include <memory>

#include "strav/problems.hpp"
#include "strav/rng.hpp"
#include "strav/solver.hpp"

using namespace strav;

namespace {

struct QuadraticFixture {
  std::shared_ptr<const QuadraticSystem> system;
  std::vector<RelaxedCutter> ops;
  StringPlan plan;
  Vector x0;

  QuadraticFixture(std::size_t n, std::size_t count, std::size_t strings)
      : system(std::make_shared<const QuadraticSystem>(
            gen_quadratic(1, n, count, 0.0))),
        plan(StringPlan::contiguous(count, strings)),
        x0(gen_start(1001, n)) {
    const std::vector<double> alphas(count, 1.0);
    ops = build_operators(system, alphas);
  }
};

void BM_string_evaluation(benchmark::State& state) {
  QuadraticFixture fx(static_cast<std::size_t>(state.range(0)), 20, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_strings(fx.ops, fx.plan, fx.x0));
  }
}
BENCHMARK(BM_string_evaluation)->Arg(50)->Arg(200);

void BM_step_size_forms(benchmark::State& state) {
  QuadraticFixture fx(100, 20, 5);
  StringTrace trace = evaluate_strings(fx.ops, fx.plan, fx.x0);
  const int form = static_cast<int>(state.range(0));
  for (auto _ : state) {
    double sigma = 0.0;
    switch (form) {
    case 0:
      sigma = step_size_inner(trace, fx.plan, fx.ops);
      break;
    case 1:
      sigma = step_size_sum(trace, fx.plan, fx.ops);
      break;
    default:
      sigma = step_size_subgradient_closed(trace, fx.plan, fx.ops);
      break;
    }
    benchmark::DoNotOptimize(sigma);
  }
}
BENCHMARK(BM_step_size_forms)->Arg(0)->Arg(1)->Arg(2);

void BM_solve_quadratic(benchmark::State& state) {
  QuadraticFixture fx(50, 20, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto report = solve(
        fx.ops, fx.plan, RelaxationSchedule::constant(1.0), StepSizeMode{},
        StoppingRule{}, fx.x0,
        [&](const Vector& x) { return fx.system->max_violation(x); });
    benchmark::DoNotOptimize(report);
  }
}
BENCHMARK(BM_solve_quadratic)->Arg(1)->Arg(10);

void BM_spectral_radius(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  SplitMix64 rng(3);
  std::vector<double> entries(n * n);
  for (double& e : entries) e = rng.uniform(-1.0, 1.0);
  Matrix b =
      Matrix(n, n, std::move(entries)).weighted_gram(Matrix::identity(n));
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectral_radius_psd(b));
  }
}
BENCHMARK(BM_spectral_radius)->Arg(20)->Arg(100);

} // namespace

BENCHMARK_MAIN();
