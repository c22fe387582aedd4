#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "strav/problems.hpp"
#include "strav/solver.hpp"

#include "config.hpp"

namespace strav::bench {

struct ProblemConfig {
  enum class Kind { Quadratic, Linear };

  Kind kind = Kind::Quadratic;
  std::size_t n = 0;       // variables
  std::size_t count = 0;   // quadratic: functions
  double margin = 0.0;     // quadratic: anchor slack
  std::size_t rows = 0;    // linear: equations
  std::size_t blocks = 1;  // linear: row blocks
  LinearFeasibility::WeightMode weights =
      LinearFeasibility::WeightMode::Identity;

  /// Number of operators a built instance will carry.
  std::size_t operator_count() const {
    return kind == Kind::Quadratic ? count : blocks;
  }
};

/// One instantiated problem: its operators, the feasibility measure driving
/// the stopping rule, and a known feasible point for error diagnostics.
struct BuiltProblem {
  std::vector<RelaxedCutter> ops;
  ViolationFn violation;
  Vector feasible_point;
};

BuiltProblem build_problem(const ProblemConfig& cfg, std::uint64_t seed,
                           double alpha);

struct RunSettings {
  std::size_t strings = 1;
  double alpha = 1.0;
  double lambda = 1.0;
  bool extrapolated = true; // false: sigma fixed to 1
  StepSizeVariant sigma_form = StepSizeVariant::Inner;
  StoppingRule stop;
  std::uint64_t start_seed = 1001;
  bool with_reference = true;
};

struct RunOutcome {
  SolveStatus status = SolveStatus::MaxIterations;
  std::size_t iterations = 0;
  double seconds = 0.0;
};

/// Builds the seeded instance and start point, runs one solve, and times
/// the iteration loop only.
RunOutcome run_single(const ProblemConfig& problem, std::uint64_t seed,
                      const RunSettings& settings);

struct ExperimentConfig {
  ProblemConfig problem;
  std::vector<std::uint64_t> seeds;
  RunSettings settings;
  std::vector<double> alpha_grid;   // grid command
  std::vector<double> lambda_grid;  // grid command
  std::vector<std::size_t> string_grid; // strings command
  bool run_extrapolated = true;  // mode = grt | both
  bool run_plain = false;        // mode = no-grt | both
  std::string out;
};

ProblemConfig parse_problem(const Config& cfg);
RunSettings parse_settings(const Config& cfg);

/// Number formatting shared by all CSV output (shortest round-trip form).
std::string format_double(double v);

int cmd_grid(const Config& cfg, const std::string& out_override,
             const std::string& seeds_override, std::size_t jobs);
int cmd_strings(const Config& cfg, const std::string& out_override,
                const std::string& seeds_override, std::size_t jobs);
int cmd_solve(const Config& cfg, const std::string& out_override);

} // namespace strav::bench
