#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace strav::bench {

struct PropertyResult {
  std::string name;
  std::size_t checks = 0;
  std::size_t failures = 0;
};

/// Runs the runtime invariant suites of every library module and returns
/// one result per property.
std::vector<PropertyResult> run_verification();

/// Prints per-property counts; returns 1 if any property failed.
int cmd_verify();

} // namespace strav::bench
