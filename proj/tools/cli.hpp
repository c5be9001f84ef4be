#pragma once

#include <string>
#include <vector>

namespace lkm::cli {

enum ExitCode : int {
  kConverged = 0,
  kVerifyFailed = 1,
  kIterationCap = 2,
  kInvalidInput = 3,
  kInnerSolverFailure = 4,
};

/// Entry point shared by the executable and the tests. args[0] is the
/// program name.
int run(const std::vector<std::string>& args);

}  // namespace lkm::cli
