#include "experiments.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <thread>

namespace strav::bench {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_seconds(Clock::time_point begin, Clock::time_point end) {
  return std::chrono::duration<double>(end - begin).count();
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open output file " + path);
  }
  return out;
}

void parallel_for(std::size_t items, std::size_t jobs,
                  const std::function<void(std::size_t)>& body) {
  if (jobs <= 1 || items <= 1) {
    for (std::size_t i = 0; i < items; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  const std::size_t worker_count = std::min(jobs, items);
  workers.reserve(worker_count);
  for (std::size_t w = 0; w < worker_count; ++w) {
    workers.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= items) return;
        body(i);
      }
    });
  }
  for (auto& t : workers) t.join();
}

StepSizeVariant parse_sigma_form(const std::string& name) {
  if (name == "inner") return StepSizeVariant::Inner;
  if (name == "sum") return StepSizeVariant::Sum;
  if (name == "block-closed") return StepSizeVariant::BlockClosed;
  if (name == "subgradient-closed") return StepSizeVariant::SubgradientClosed;
  throw ConfigError("config: unknown sigma form '" + name + "'");
}

struct CellStats {
  double mean_iters = 0.0;
  double mean_seconds = 0.0;
  std::size_t failed = 0;
  bool any_success = false;
};

CellStats summarize(const std::vector<RunOutcome>& outcomes) {
  CellStats stats;
  double iters = 0.0;
  double seconds = 0.0;
  std::size_t successes = 0;
  for (const auto& outcome : outcomes) {
    if (outcome.status == SolveStatus::Feasible) {
      ++successes;
      iters += static_cast<double>(outcome.iterations);
      seconds += outcome.seconds;
    } else {
      ++stats.failed;
    }
  }
  if (successes > 0) {
    stats.any_success = true;
    stats.mean_iters = iters / static_cast<double>(successes);
    stats.mean_seconds = seconds / static_cast<double>(successes);
  }
  return stats;
}

void write_cell(std::ostream& out, const CellStats& stats) {
  if (stats.any_success) {
    out << format_double(stats.mean_iters) << ','
        << format_double(stats.mean_seconds);
  } else {
    out << "*,*";
  }
  out << ',' << stats.failed << '\n';
}

std::vector<std::uint64_t> effective_seeds(const Config& cfg,
                                           const std::string& seeds_override) {
  if (!seeds_override.empty()) {
    cfg.get_string("seeds", ""); // the override shadows the config key
    return Config::from_string("seeds = " + seeds_override)
        .require_u64_list("seeds");
  }
  return cfg.require_u64_list("seeds");
}

} // namespace

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

ProblemConfig parse_problem(const Config& cfg) {
  ProblemConfig p;
  const std::string kind = cfg.require_string("problem");
  if (kind == "quadratic") {
    p.kind = ProblemConfig::Kind::Quadratic;
    p.n = cfg.require_size("n");
    p.count = cfg.require_size("count");
    p.margin = cfg.get_double("margin", 0.0);
  } else if (kind == "linear") {
    p.kind = ProblemConfig::Kind::Linear;
    p.n = cfg.require_size("n");
    p.rows = cfg.require_size("rows");
    p.blocks = cfg.get_size("blocks", 1);
    const std::string weights = cfg.get_string("weights", "identity");
    if (weights == "identity") {
      p.weights = LinearFeasibility::WeightMode::Identity;
    } else if (weights == "row-inverse-normsq") {
      p.weights = LinearFeasibility::WeightMode::RowInverseNormSq;
    } else {
      throw ConfigError("config: unknown weights '" + weights + "'");
    }
    if (p.blocks == 0 || p.blocks > p.rows) {
      throw ConfigError("config: blocks outside [1, rows]");
    }
  } else {
    throw ConfigError("config: unknown problem kind '" + kind + "'");
  }
  if (p.n == 0 || p.operator_count() == 0) {
    throw ConfigError("config: empty problem shape");
  }
  return p;
}

RunSettings parse_settings(const Config& cfg) {
  RunSettings s;
  s.strings = cfg.get_size("strings", 1);
  s.alpha = cfg.get_double("alpha", 1.0);
  s.lambda = cfg.get_double("lambda", 1.0);
  s.sigma_form = parse_sigma_form(cfg.get_string("sigma", "inner"));
  s.stop.feas_tol = cfg.get_double("feas_tol", 1e-6);
  s.stop.fix_tol = cfg.get_double("fix_tol", 1e-16);
  s.stop.max_iter = cfg.get_size("max_iter", 1000);
  s.start_seed = cfg.get_u64("start_seed", 1001);
  if (!(s.alpha > 0.0 && s.alpha < 2.0)) {
    throw ConfigError("config: alpha outside (0, 2)");
  }
  return s;
}

BuiltProblem build_problem(const ProblemConfig& cfg, std::uint64_t seed,
                           double alpha) {
  BuiltProblem built;
  const std::vector<double> alphas(cfg.operator_count(), alpha);
  if (cfg.kind == ProblemConfig::Kind::Quadratic) {
    auto system = std::make_shared<const QuadraticSystem>(
        gen_quadratic(seed, cfg.n, cfg.count, cfg.margin));
    built.ops = build_operators(system, alphas);
    built.violation = [system](const Vector& x) {
      return system->max_violation(x);
    };
    built.feasible_point = system->anchor();
  } else {
    auto problem = std::make_shared<const LinearFeasibility>(
        gen_consistent_linear(seed, cfg.rows, cfg.n, cfg.blocks, cfg.weights));
    built.ops = build_operators(*problem, alphas);
    built.violation = [problem](const Vector& x) {
      return problem->max_violation(x);
    };
    built.feasible_point = problem->certificate;
  }
  return built;
}

RunOutcome run_single(const ProblemConfig& problem, std::uint64_t seed,
                      const RunSettings& settings) {
  BuiltProblem built = build_problem(problem, seed, settings.alpha);
  StringPlan plan =
      StringPlan::contiguous(built.ops.size(), settings.strings);
  Vector x0 = gen_start(settings.start_seed, problem.n);
  StepSizeMode mode{settings.extrapolated ? settings.sigma_form
                                          : StepSizeVariant::Unit,
                    settings.stop.fix_tol};
  std::optional<Vector> reference;
  if (settings.with_reference) reference = built.feasible_point;

  const auto begin = Clock::now();
  IterationReport report =
      solve(built.ops, plan, RelaxationSchedule::constant(settings.lambda),
            mode, settings.stop, x0, built.violation, reference);
  const auto end = Clock::now();

  return RunOutcome{report.status, report.iterations,
                    elapsed_seconds(begin, end)};
}

namespace {

void check_string_count(std::size_t strings, const ProblemConfig& problem) {
  if (strings == 0 || strings > problem.operator_count()) {
    throw ConfigError("config: strings outside [1, operator count]");
  }
}

} // namespace

int cmd_grid(const Config& cfg, const std::string& out_override,
             const std::string& seeds_override, std::size_t jobs) {
  ProblemConfig problem = parse_problem(cfg);
  RunSettings base = parse_settings(cfg);
  check_string_count(base.strings, problem);
  const auto alpha_grid = cfg.require_double_list("alpha_grid");
  const auto lambda_grid = cfg.require_double_list("lambda_grid");
  const auto seeds = effective_seeds(cfg, seeds_override);
  const std::string mode = cfg.get_string("mode", "grt");
  if (mode != "grt" && mode != "no-grt") {
    throw ConfigError("config: grid mode must be grt or no-grt");
  }
  const std::string configured_out = cfg.get_string("out", "grid.csv");
  const std::string out_path =
      out_override.empty() ? configured_out : out_override;
  cfg.finish();

  struct Cell {
    double alpha;
    double lambda;
    CellStats stats;
    std::string error;
  };
  std::vector<Cell> cells;
  for (double alpha : alpha_grid) {
    for (double lambda : lambda_grid) {
      cells.push_back({alpha, lambda, {}, {}});
    }
  }

  parallel_for(cells.size(), jobs, [&](std::size_t i) {
    RunSettings settings = base;
    settings.alpha = cells[i].alpha;
    settings.lambda = cells[i].lambda;
    settings.extrapolated = mode == "grt";
    try {
      std::vector<RunOutcome> outcomes;
      outcomes.reserve(seeds.size());
      for (std::uint64_t seed : seeds) {
        outcomes.push_back(run_single(problem, seed, settings));
      }
      cells[i].stats = summarize(outcomes);
    } catch (const std::exception& e) {
      cells[i].error = e.what();
    }
  });

  for (const auto& cell : cells) {
    if (!cell.error.empty()) throw std::runtime_error(cell.error);
  }

  auto out = open_output(out_path);
  out << "# mean_iters/mean_seconds average over seeds reaching feasibility; "
         "'*' marks cells where no seed did; n_failed counts the rest\n";
  out << "alpha,lambda,mean_iters,mean_seconds,n_failed\n";
  for (const auto& cell : cells) {
    out << format_double(cell.alpha) << ',' << format_double(cell.lambda)
        << ',';
    write_cell(out, cell.stats);
  }
  std::cout << "grid: " << cells.size() << " cells x " << seeds.size()
            << " seeds -> " << out_path << "\n";
  return 0;
}

int cmd_strings(const Config& cfg, const std::string& out_override,
                const std::string& seeds_override, std::size_t jobs) {
  ProblemConfig problem = parse_problem(cfg);
  RunSettings base = parse_settings(cfg);
  const auto string_grid = cfg.require_size_list("string_grid");
  for (std::size_t e : string_grid) check_string_count(e, problem);
  const auto seeds = effective_seeds(cfg, seeds_override);
  const std::string mode = cfg.get_string("mode", "both");
  const bool run_grt = mode == "grt" || mode == "both";
  const bool run_plain = mode == "no-grt" || mode == "both";
  if (!run_grt && !run_plain) {
    throw ConfigError("config: strings mode must be grt, no-grt or both");
  }
  const std::string configured_out = cfg.get_string("out", "strings.csv");
  const std::string out_path =
      out_override.empty() ? configured_out : out_override;
  cfg.finish();

  struct Row {
    std::size_t strings;
    bool extrapolated;
    CellStats stats;
    std::string error;
  };
  std::vector<Row> table;
  for (std::size_t e : string_grid) {
    if (run_grt) table.push_back({e, true, {}, {}});
    if (run_plain) table.push_back({e, false, {}, {}});
  }

  parallel_for(table.size(), jobs, [&](std::size_t i) {
    RunSettings settings = base;
    settings.strings = table[i].strings;
    settings.extrapolated = table[i].extrapolated;
    try {
      std::vector<RunOutcome> outcomes;
      outcomes.reserve(seeds.size());
      for (std::uint64_t seed : seeds) {
        outcomes.push_back(run_single(problem, seed, settings));
      }
      table[i].stats = summarize(outcomes);
    } catch (const std::exception& e) {
      table[i].error = e.what();
    }
  });

  for (const auto& row : table) {
    if (!row.error.empty()) throw std::runtime_error(row.error);
  }

  auto out = open_output(out_path);
  out << "# mean_iters/mean_seconds average over seeds reaching feasibility; "
         "'*' marks rows where no seed did; n_failed counts the rest\n";
  out << "E,mode,mean_iters,mean_seconds,n_failed\n";
  for (const auto& row : table) {
    out << row.strings << ',' << (row.extrapolated ? "grt" : "no-grt") << ',';
    write_cell(out, row.stats);
  }
  std::cout << "strings: " << table.size() << " rows x " << seeds.size()
            << " seeds -> " << out_path << "\n";
  return 0;
}

namespace {

ConstraintSet parse_constraint(const Config& cfg, std::size_t n) {
  const std::string kind = cfg.get_string("constraint", "none");
  if (kind == "none") return ConstraintSet::none();
  if (kind == "box") {
    const double lo = cfg.get_double("box_lo", 0.0);
    const double hi = cfg.get_double("box_hi", 2.0);
    return ConstraintSet::box(Vector(n, lo), Vector(n, hi));
  }
  if (kind == "ball") {
    const double center = cfg.get_double("ball_center", 1.0);
    const double radius = cfg.get_double("ball_radius", 10.0);
    return ConstraintSet::ball(Vector(n, center), radius);
  }
  if (kind == "nonneg") return ConstraintSet::nonnegative_orthant();
  if (kind == "halfspace") {
    Vector a = cfg.require_double_list("halfspace_a");
    const double b = cfg.get_double("halfspace_b", 0.0);
    if (a.size() != n) {
      throw ConfigError("config: halfspace_a length must equal n");
    }
    return ConstraintSet::halfspace(std::move(a), b);
  }
  throw ConfigError("config: unknown constraint '" + kind + "'");
}

} // namespace

int cmd_solve(const Config& cfg, const std::string& out_override) {
  ProblemConfig problem = parse_problem(cfg);
  RunSettings settings = parse_settings(cfg);
  check_string_count(settings.strings, problem);
  const std::uint64_t seed = cfg.get_u64("seed", 1);
  const std::string mode = cfg.get_string("mode", "grt");
  if (mode != "grt" && mode != "no-grt") {
    throw ConfigError("config: solve mode must be grt or no-grt");
  }
  settings.extrapolated = mode == "grt";
  const std::string reference_kind = cfg.get_string("reference", "auto");
  const ConstraintSet omega = parse_constraint(cfg, problem.n);
  const std::string configured_out = cfg.get_string("out", "solve.csv");
  const std::string out_path =
      out_override.empty() ? configured_out : out_override;
  cfg.finish();

  BuiltProblem built = build_problem(problem, seed, settings.alpha);
  StringPlan plan = StringPlan::contiguous(built.ops.size(), settings.strings);
  Vector x0 = gen_start(settings.start_seed, problem.n);
  StepSizeMode step_mode{settings.extrapolated ? settings.sigma_form
                                               : StepSizeVariant::Unit,
                         settings.stop.fix_tol};
  std::optional<Vector> reference;
  if (reference_kind == "auto") {
    reference = built.feasible_point;
  } else if (reference_kind != "none") {
    throw ConfigError("config: reference must be auto or none");
  }

  const auto begin = Clock::now();
  IterationReport report;
  if (omega.is_none()) {
    report = solve(built.ops, plan,
                   RelaxationSchedule::constant(settings.lambda), step_mode,
                   settings.stop, x0, built.violation, reference);
  } else {
    report = solve_projected(built.ops, plan, settings.lambda, step_mode,
                             settings.stop, x0, omega, built.violation,
                             reference);
  }
  const double seconds = elapsed_seconds(begin, Clock::now());

  auto out = open_output(out_path);
  out << "k,sigma,lambda,residual,violation,ref_error,decrease_bound,"
         "sigma_gamma\n";
  for (const auto& row : report.rows) {
    out << row.k << ',' << format_double(row.sigma) << ','
        << format_double(row.lambda) << ',' << format_double(row.residual)
        << ',' << format_double(row.violation) << ',';
    if (row.error_to_reference) out << format_double(*row.error_to_reference);
    out << ',' << format_double(row.decrease_bound) << ','
        << format_double(row.sigma_gamma) << '\n';
  }
  out << "# status=" << to_string(report.status)
      << " iterations=" << report.iterations
      << " final_violation=" << format_double(report.final_violation) << '\n';

  std::cout << "solve: status=" << to_string(report.status)
            << " iterations=" << report.iterations << " seconds="
            << format_double(seconds) << " -> " << out_path << "\n";
  return 0;
}

} // namespace strav::bench
