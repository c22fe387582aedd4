#include "strav/string_averaging.hpp"

#include <cmath>
#include <stdexcept>

#include "strav/errors.hpp"

namespace strav {

StringPlan StringPlan::single(std::size_t op_count) {
  return contiguous(op_count, 1);
}

StringPlan StringPlan::contiguous(std::size_t op_count,
                                  std::size_t string_count) {
  if (string_count == 0 || string_count > op_count) {
    throw std::invalid_argument("StringPlan: string count outside [1, m]");
  }
  StringPlan plan;
  const std::size_t base = op_count / string_count;
  const std::size_t extra = op_count % string_count;
  std::size_t next = 0;
  for (std::size_t t = 0; t < string_count; ++t) {
    const std::size_t len = base + (t < extra ? 1 : 0);
    std::vector<std::size_t> s(len);
    for (std::size_t i = 0; i < len; ++i) s[i] = next + i;
    next += len;
    plan.strings.push_back(std::move(s));
    plan.weights.push_back(1.0 / static_cast<double>(string_count));
  }
  return plan;
}

std::size_t StringPlan::max_string_length() const {
  std::size_t m = 0;
  for (const auto& s : strings) m = std::max(m, s.size());
  return m;
}

double StringPlan::max_alpha(std::span<const RelaxedCutter> ops) const {
  double a = 0.0;
  for (const auto& s : strings) {
    for (std::size_t idx : s) a = std::max(a, ops[idx].alpha());
  }
  return a;
}

void StringPlan::validate(std::size_t op_count) const {
  if (strings.empty() || strings.size() != weights.size()) {
    throw std::invalid_argument("StringPlan: strings/weights shape mismatch");
  }
  std::vector<bool> used(op_count, false);
  for (const auto& s : strings) {
    if (s.empty()) {
      throw std::invalid_argument("StringPlan: empty string");
    }
    for (std::size_t idx : s) {
      if (idx >= op_count) {
        throw std::invalid_argument("StringPlan: operator index out of range");
      }
      used[idx] = true;
    }
  }
  for (bool u : used) {
    if (!u) {
      throw std::invalid_argument(
          "StringPlan: strings do not cover every operator");
    }
  }
  double wsum = 0.0;
  for (double w : weights) {
    if (w <= 0.0) {
      throw std::invalid_argument("StringPlan: weights must be positive");
    }
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-12) {
    throw std::invalid_argument("StringPlan: weights do not sum to one");
  }
}

StringTrace evaluate_strings(std::span<const RelaxedCutter> ops,
                             const StringPlan& plan, const Vector& x) {
  plan.validate(ops.size());
  for (const auto& op : ops) {
    if (op.dim() != x.size()) {
      throw std::invalid_argument(
          "evaluate_strings: point dimension does not match the operators");
    }
  }

  StringTrace trace;
  trace.start = x;
  trace.strings.resize(plan.count());
  trace.averaged.assign(x.size(), 0.0);

  for (std::size_t t = 0; t < plan.count(); ++t) {
    auto& per = trace.strings[t];
    per.points.reserve(plan.strings[t].size() + 1);
    per.increments.reserve(plan.strings[t].size());
    per.points.push_back(x);
    for (std::size_t i = 0; i < plan.strings[t].size(); ++i) {
      Vector next;
      try {
        next = ops[plan.strings[t][i]].apply(per.points.back());
      } catch (const InfeasibleError& e) {
        throw InfeasibleError(e.what(), t, i);
      }
      per.increments.push_back(subtract(next, per.points.back()));
      per.points.push_back(std::move(next));
    }
    const Vector& endpoint = per.endpoint();
    for (std::size_t j = 0; j < x.size(); ++j) {
      trace.averaged[j] += plan.weights[t] * endpoint[j];
    }
  }
  return trace;
}

double residual(const StringTrace& trace) {
  return norm(subtract(trace.averaged, trace.start));
}

} // namespace strav
