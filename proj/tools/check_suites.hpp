#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace fairalloc::cli {

struct suite_outcome {
  int checks = 0;
  int failures = 0;
};

// Names accepted by `check --suite`, including the meta-suite "all".
const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);

// Run one suite (or all of them), printing one line per property to out.
// trials scales the randomized property loops; seed makes them reproducible.
suite_outcome run_suites(const std::string& name, int trials, std::uint64_t seed,
                         std::ostream& out);

}  // namespace fairalloc::cli
