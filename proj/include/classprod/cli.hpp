#pragma once

#include <string>
#include <vector>

namespace classprod {

// Exit code families:
//   0 success, 2 bad spec/usage, 3 verification failure,
//   4 resource overflow/budget, 5 internal invariant failure, 6 io/schema.
struct CliResult {
  int exit_code = 0;
  std::string output;
};

// Runs one command ("rootsys B2", "verify-theorem C2@F3 --exhaustive", ...).
// Deterministic: identical args (and seed) produce byte-identical output,
// independent of --threads.
CliResult run_cli(const std::vector<std::string>& args);

int exit_family(int errc_value);

}  // namespace classprod
