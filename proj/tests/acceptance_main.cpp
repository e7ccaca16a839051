// Acceptance gate: runs the quantitative criteria at their pinned
// tolerances and prints one pass/fail line per criterion.
//
//   spin7lab_acceptance [--only N] [--invariants]
//
// Exit code 0 iff every executed criterion passes.

#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "spin7lab/verify.hpp"

int main(int argc, char** argv) {
  spin7lab::verify::Options options;
  options.include_invariants = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      options.only_criterion = std::atoi(argv[++i]);
    } else if (std::strcmp(argv[i], "--invariants") == 0) {
      options.include_invariants = true;
    } else {
      std::fprintf(stderr, "usage: spin7lab_acceptance [--only N] [--invariants]\n");
      return 2;
    }
  }

  const auto results = spin7lab::verify::run_checks(options);
  for (const auto& r : results) {
    std::printf("%-48s %-5s %s\n", r.name.c_str(), spin7lab::verify::status_label(r.status),
                r.detail.c_str());
  }
  std::size_t failures = 0;
  for (const auto& r : results) {
    if (r.status == spin7lab::verify::Status::Fail) ++failures;
  }
  std::printf("%zu/%zu checks passed\n", results.size() - failures, results.size());
  return failures == 0 ? 0 : 1;
}
