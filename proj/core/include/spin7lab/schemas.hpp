#pragma once

#include <array>
#include <string>
#include <string_view>

namespace spin7lab::report::schema {

// Column names and order are part of the public file contract; the
// verification suite snapshots them.

inline constexpr std::array<std::string_view, 7> metric_columns{
    "r", "nu", "t", "t_closed_form", "conserved_level", "g_rr_in_nu", "volume_density"};

inline constexpr std::array<std::string_view, 3> levelset_columns{"nu", "t", "residual"};

inline constexpr std::array<std::string_view, 6> instanton_columns{
    "r", "nu", "x", "dx_dr", "energy_density", "connection_gap_to_a_inf"};

inline constexpr std::array<std::string_view, 5> energy_report_columns{
    "y0", "region_lo2", "region_hi2", "value", "error_estimate"};

inline constexpr std::array<std::string_view, 8> energy_summary_columns{
    "region_lo2",       "region_hi2",    "limit_estimate", "extrapolation_coefficient",
    "fit_residual",     "distance_to_concentration_constant",
    "tail_exponent",    "tail_fit_residual"};

// Default k_max = 2 layout.
inline constexpr std::array<std::string_view, 9> bubble_columns{
    "kappa", "y0", "lambda", "dist0", "dist1", "dist2",
    "dist0_y0_over_kappa2", "dist1_y0_over_kappa2", "dist2_y0_over_kappa2"};

template <std::size_t N>
std::string joined(const std::array<std::string_view, N>& cols) {
  std::string out;
  for (std::size_t i = 0; i < N; ++i) {
    if (i) out += ',';
    out += cols[i];
  }
  return out;
}

}  // namespace spin7lab::report::schema
