#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spin7lab/numerics.hpp"

namespace spin7lab::report {

/// Invalid flags, config keys, or argument values; maps to exit code 2.
class usage_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Resolved run configuration shared by all subcommands. Parsed from flags
/// and an optional plain-text `key = value` file; flags override the file;
/// unknown keys are errors. Every run is seedless by construction (there is
/// no randomness anywhere in the library).
struct RunConfig {
  double nu0 = 1.0;
  double vol_star = 1.0;
  std::optional<double> y0;
  bool limit_profile = false;
  bool flat_profile = false;
  std::vector<double> y0_list;
  std::vector<double> kappa_list;
  std::vector<double> levels;
  std::optional<std::pair<double, double>> region;  // nu^2 interval
  double r_max = 5.0;
  std::optional<double> nu_max2;
  int grid = 256;
  int k_max = 2;
  num::ToleranceBudget budget{};
  std::string out_dir = "out";
  std::optional<double> perturb_x0;
  bool seedless = true;

  // plot-only settings
  std::vector<std::string> inputs;
  std::string x_column;
  std::vector<std::string> y_columns;
  bool log_x = false;
  bool log_y = false;
  std::string out_file;

  /// "key = value" echo of every resolved field, for the run manifest.
  [[nodiscard]] std::vector<std::string> echo() const;
};

/// Parses command-line arguments (already split, without the subcommand
/// itself). Reads --config <file> first when present, then lets the
/// remaining flags override. Throws usage_error on unknown keys, malformed
/// values, or unreadable files.
RunConfig parse_run_config(const std::vector<std::string>& args);

/// Splits a comma-separated list of reals ("0.5,1,2"). Throws usage_error.
std::vector<double> parse_real_list(const std::string& text);

}  // namespace spin7lab::report
