// Acceptance run: one line per criterion, non-zero exit on any failure.
// Pass --inject-fault to check that the memory criterion can fail.
#include <cstring>
#include <iostream>

#include "lkm/harness/verify.hpp"

int main(int argc, char** argv) {
  lkm::harness::VerifyOptions opts;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--inject-fault") == 0) opts.inject_fault = true;
  const auto results = lkm::harness::run_acceptance(opts);
  for (const auto& r : results) std::cout << lkm::harness::format_line(r) << '\n';
  const bool ok = lkm::harness::all_passed(results);
  std::cout << (ok ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED") << '\n';
  return ok ? 0 : 1;
}
