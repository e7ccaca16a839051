#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spin7lab/numerics.hpp"

namespace spin7lab::verify {

enum class Status { Pass, Fail, Warn, ExpectedFail };

const char* status_label(Status s);

struct CheckResult {
  std::string name;
  Status status;
  std::string detail;
};

struct Options {
  num::ToleranceBudget budget{};
  std::optional<double> perturb_x0;
  bool include_invariants = true;
  bool include_acceptance = true;
  /// Restrict the acceptance section to one criterion (1..14).
  std::optional<int> only_criterion;
};

/// Runs the library-wide invariant suite and/or the acceptance criteria at
/// default scales. Pure: identical options give identical results. With a
/// budget looser than the artifact default, tolerance-sensitive checks
/// degrade to warnings instead of failures.
std::vector<CheckResult> run_checks(const Options& options = {});

/// Plain-text pass/fail table (one line per check), identical bytes for
/// identical check lists.
std::string render_report(const std::vector<CheckResult>& results);

/// True when any check carries Status::Fail (warnings and expected
/// failures do not count).
bool has_failure(const std::vector<CheckResult>& results);

}  // namespace spin7lab::verify
