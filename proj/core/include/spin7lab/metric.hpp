#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "spin7lab/numerics.hpp"

namespace spin7lab {

/// Evaluated outside the mathematical domain of an operation.
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Fixed structure conventions for the cohomogeneity-one Spin(7) family.
///
/// The scalar-curvature normalization of the transverse Einstein orbifold is
/// pinned to s = 48, which makes the horizontal metric coefficient exactly
/// nu^2 and the energy-density formula hold verbatim. Squared coframe norms
/// under <A,B> = -tr(AB):
///   |eta_i|^2 = 1/t^2,   |T_i|^2 = 2,   |omega_i|^2 = 2*(48/(s*nu^2))^2.
struct StructureConventions {
  static constexpr double s = 48.0;
  static constexpr double ti_norm_sq = 2.0;
  static double eta_norm_sq(double t) { return 1.0 / (t * t); }
  static double omega_norm_sq(double nu) {
    const double q = 48.0 / (s * nu * nu);
    return 2.0 * q * q;
  }
};

/// First-order radial evolution system: returns (dt/dr, dnu/dr) at (t, nu),
/// i.e. (1 - 2t^2/nu^2, 3t/nu). Requires nu > 0.
std::pair<double, double> metric_ode_rhs(double t, double nu);

/// The conserved level function nu^4 (nu^2 - 5 t^2)^3 of the radial flow.
double conserved_level(double t, double nu);

/// Coefficients of the metric written in the nu coordinate:
/// g = g_rr_in_nu dnu^2 + fiber sum eta_i (x) eta_i + horizontal g_Z-part.
struct MetricCoefficients {
  double g_rr_in_nu;
  double fiber;       // equals t^2(nu)
  double horizontal;  // equals nu^2 with the s = 48 normalization
};

/// Radial trajectory (t(r), nu(r)) produced by integrating the evolution
/// system from the zero section.
struct RadialTrajectory {
  num::SampledCurve samples;  // abscissa r; value tuple (t, nu)

  [[nodiscard]] std::size_t size() const { return samples.size(); }
  [[nodiscard]] double r(std::size_t i) const { return samples.abscissae[i]; }
  [[nodiscard]] double t(std::size_t i) const { return samples.value(i, 0); }
  [[nodiscard]] double nu(std::size_t i) const { return samples.value(i, 1); }
};

/// Taylor coefficients of t(r) and nu(r) about r = 0, obtained by formal
/// substitution into the evolution system (index = power of r).
struct SeriesCoefficients {
  std::vector<double> t;
  std::vector<double> nu;
};

/// Complete cohomogeneity-one Spin(7) background on the rank-4 bundle,
/// parametrized by the zero-section scale nu0 = nu(0) > 0. All member
/// functions are pure; the object is immutable after construction.
class MetricBackground {
 public:
  explicit MetricBackground(double nu0, double cross_section_volume = 1.0);

  [[nodiscard]] double nu0() const { return nu0_; }
  [[nodiscard]] double cross_section_volume() const { return cross_section_volume_; }

  /// t^2 as a closed form in nu; zero at nu = nu0, asymptotic to nu^2/5.
  [[nodiscard]] double t_squared_of_nu(double nu) const;

  /// d(t^2)/dnu = (2/(3 nu)) (nu^2 - 2 t^2).
  [[nodiscard]] double dt_squared_dnu(double nu) const;

  /// Geodesic distance from the zero section, by quadrature of the exact
  /// radial line element (inverse-square-root singularity at nu0).
  [[nodiscard]] double r_of_nu(double nu, const num::ToleranceBudget& budget = {}) const;

  /// Inverse of r_of_nu (monotone), solved by safeguarded Newton iteration.
  [[nodiscard]] double nu_of_r(double r, const num::ToleranceBudget& budget = {}) const;

  /// Radial volume density t^3 nu^4 (measure per unit cross-section volume).
  [[nodiscard]] double volume_density(double r, const num::ToleranceBudget& budget = {}) const;

  [[nodiscard]] MetricCoefficients metric_coefficients(double nu) const;

  /// Integrates the evolution system from the exact zero-section state
  /// (t, nu) = (0, nu0); max_step > 0 bounds the output spacing.
  [[nodiscard]] RadialTrajectory integrate(double r_max,
                                           const num::ToleranceBudget& budget = {},
                                           double max_step = 0.0) const;

  /// Formal power-series solution about r = 0 through the given order,
  /// 2 <= order <= 6.
  [[nodiscard]] SeriesCoefficients series_coefficients(int order) const;

  /// nu^2 - nu0^2, computed without cancellation for nu near nu0.
  [[nodiscard]] double w_of_nu(double nu) const { return (nu - nu0_) * (nu + nu0_); }

 private:
  double nu0_;
  double cross_section_volume_;
};

/// Traces the level set {conserved_level = level} inside the rectangle
/// [0, nu_max] x [0, t_max] of the (nu, t) quadrant by pseudo-arclength
/// continuation with Newton correction. The zero level is emitted as the
/// exact line t = nu/sqrt(5). Points come back ordered along the curve.
struct LevelSetWindow {
  double nu_max = 3.0;
  double t_max = 1.5;
};
std::vector<std::pair<double, double>> trace_level_set(double level,
                                                       const LevelSetWindow& window = {},
                                                       double step = 0.01);

}  // namespace spin7lab
