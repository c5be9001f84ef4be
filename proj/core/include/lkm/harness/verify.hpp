#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lkm::harness {

struct VerifyOptions {
  int n_max = 6;             // largest n for the oracle comparison; below 3 only the worked example runs
  int seeds = 5;             // seeds per n for the oracle comparison
  bool inject_fault = false;  // run the L-FCFW memory criterion without pruning (must fail)
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  bool skipped = false;
  double seconds = 0.0;
  std::string detail;
};

/// Runs acceptance criteria 1-12. `progress`, if given, receives one line
/// per criterion as soon as it finishes.
std::vector<CriterionResult> run_acceptance(const VerifyOptions& opts, std::ostream* progress = nullptr);

std::string format_line(const CriterionResult& c);
std::string results_json(const std::vector<CriterionResult>& results);
bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace lkm::harness
