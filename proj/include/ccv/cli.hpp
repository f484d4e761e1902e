#pragma once

#include <string>
#include <vector>

namespace ccv {

// Experiment runner behind the `ccv` binary. Exit codes: 0 all asserted
// checks pass, 1 a check failed (the report names it), 2 configuration
// error. Exposed as a function so tests can drive it in-process.
int run_cli(const std::vector<std::string>& args);

}  // namespace ccv
