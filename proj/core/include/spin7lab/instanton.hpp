#pragma once

#include <array>
#include <optional>

#include "spin7lab/metric.hpp"
#include "spin7lab/numerics.hpp"

namespace spin7lab {

/// A connection-family member was queried at or beyond its blow-up boundary.
class blow_up_domain : public domain_error {
 public:
  using domain_error::domain_error;
};

/// Topological type of the extension across the zero section.
enum class ExtensionClass {
  TrivialBundle,   // globally defined, x(nu0) = 0, y0 > 0
  PullbackBundle,  // the limit member, x(nu0) = 1
  FlatBundle,      // y0 = 0
  LocalOnly,       // y0 < 0: defined only below the blow-up boundary
};

/// One member of the radial connection family over a fixed background.
///
/// Members are exposed through closed forms in the nu coordinate; the
/// r-parametrization composes with MetricBackground::nu_of_r. All evaluators
/// are pure and the object is immutable, so sweeps may run concurrently.
class InstantonProfile {
 public:
  enum class Family { Flat, Finite, Limit };

  static InstantonProfile finite(const MetricBackground& bg, double y0);
  static InstantonProfile limit(const MetricBackground& bg);
  static InstantonProfile flat(const MetricBackground& bg);

  [[nodiscard]] Family family() const { return family_; }
  [[nodiscard]] double y0() const { return y0_; }  // meaningful for Finite
  [[nodiscard]] const MetricBackground& background() const { return bg_; }

  /// Defined for all nu >= nu0? (False only for Finite members with y0 < 0.)
  [[nodiscard]] bool globally_defined() const;

  /// Coefficient x(nu) of the connection in the coframe sum eta_i (x) T_i.
  /// The limit member takes the value 1 at nu = nu0 by continuous extension.
  [[nodiscard]] double x_of_nu(double nu) const;

  /// Exact nu-derivative of the closed form.
  [[nodiscard]] double dx_dnu(double nu) const;

  /// dx/dr via the chain rule dnu/dr = 3t/nu; zero at the zero section.
  [[nodiscard]] double dx_dr(double nu) const;

  /// x (x - 1) / t^2, evaluated without cancellation; finite at nu = nu0 for
  /// every family member (it carries the curvature's 1/t^2 structure).
  [[nodiscard]] double x_xminus1_over_t2(double nu) const;

  /// x / t^2 = y(nu) for Finite members (throws for Limit, whose y diverges
  /// at the zero section).
  [[nodiscard]] double y_of_nu(double nu) const;

  [[nodiscard]] double x_of_r(double r, const num::ToleranceBudget& budget = {}) const;
  [[nodiscard]] double y_of_r(double r, const num::ToleranceBudget& budget = {}) const;

 private:
  InstantonProfile(const MetricBackground& bg, Family family, double y0)
      : bg_(bg), family_(family), y0_(y0) {}

  void check_domain(double nu) const;

  MetricBackground bg_;
  Family family_;
  double y0_ = 0.0;
};

/// Right-hand side of the radial instanton equation for the symmetric
/// reduction: dx/dr = -(2/t) x (x - (1 - 2 t^2/nu^2)). Requires t > 0.
double instanton_ode_rhs(double x, double t, double nu);

/// Cyclic triaxial system da_i/dr = -(2/t)(a_j a_k - (1 - 2t^2/nu^2) a_i).
std::array<double, 3> triaxial_ode_rhs(const std::array<double, 3>& a, double t,
                                       double nu);

/// Blow-up boundary of a y0 < 0 member: the root of the closed-form
/// denominator, nu_star^2 = nu0^2 + 3/|y0|, and its radial distance.
struct BlowupBoundary {
  double nu_star_sq;
  double r_star;
};
BlowupBoundary blowup_boundary(double y0, const MetricBackground& bg,
                               const num::ToleranceBudget& budget = {});

/// ODE oracle for the closed forms: integrates the coupled (t, nu, x) system
/// from r0 > 0 (initial x taken from the closed form, which covers the
/// singular start). Returns a curve with value tuple (t, nu, x).
/// For y0 < 0 the integration ends in step_limit_exceeded below r_star.
num::SampledCurve integrate_instanton(const InstantonProfile& profile, double r0,
                                      double r1, const num::ToleranceBudget& budget = {},
                                      double max_step = 0.0);

/// Coupled triaxial oracle from a general initial triple at r0 > 0.
/// Value tuple (t, nu, a1, a2, a3).
num::SampledCurve integrate_triaxial(const MetricBackground& bg,
                                     const std::array<double, 3>& a0, double r0,
                                     double r1, const num::ToleranceBudget& budget = {},
                                     double max_step = 0.0);

struct DecayRate {
  double exponent;
  double coefficient;
  double fit_residual;
};

/// Fits |x(nu) - 3/5| ~ coefficient * nu^exponent over [nu_lo, nu_hi]
/// (log-spaced samples). Throws degenerate_fit for the flat member.
DecayRate decay_rate(const InstantonProfile& profile, double nu_lo, double nu_hi,
                     int samples = 64);

}  // namespace spin7lab
