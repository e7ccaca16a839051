#include "spin7lab/instanton.hpp"

#include <cmath>
#include <vector>

namespace spin7lab {

namespace {

// Relative nu^2-distance from the zero section below which the limit member
// switches to its cubic series (the direct quotient is a 0/0 there).
constexpr double kLimitSeriesSwitch = 1e-4;

// Series of x_lim in eps = (nu^2 - nu0^2)/nu0^2, from the formal expansion
// of 3 t^2 / (nu^2 - nu0^2):  1 - eps/3 + (8/27) eps^2 - (22/81) eps^3 + ...
double limit_x_series(double eps) {
  return 1.0 + eps * (-1.0 / 3.0 + eps * (8.0 / 27.0 - eps * (22.0 / 81.0)));
}

double limit_dx_deps_series(double eps) {
  return -1.0 / 3.0 + eps * (16.0 / 27.0 - eps * (66.0 / 81.0));
}

}  // namespace

InstantonProfile InstantonProfile::finite(const MetricBackground& bg, double y0) {
  return InstantonProfile(bg, y0 == 0.0 ? Family::Flat : Family::Finite, y0);
}

InstantonProfile InstantonProfile::limit(const MetricBackground& bg) {
  return InstantonProfile(bg, Family::Limit, 0.0);
}

InstantonProfile InstantonProfile::flat(const MetricBackground& bg) {
  return InstantonProfile(bg, Family::Flat, 0.0);
}

bool InstantonProfile::globally_defined() const {
  return family_ != Family::Finite || y0_ >= 0.0;
}

void InstantonProfile::check_domain(double nu) const {
  if (!(nu >= bg_.nu0())) throw domain_error("InstantonProfile: nu must be >= nu0");
  if (family_ == Family::Finite && y0_ < 0.0) {
    if (bg_.w_of_nu(nu) >= 3.0 / std::abs(y0_)) {
      throw blow_up_domain("InstantonProfile: queried at or beyond the blow-up boundary");
    }
  }
}

double InstantonProfile::x_of_nu(double nu) const {
  check_domain(nu);
  switch (family_) {
    case Family::Flat:
      return 0.0;
    case Family::Finite: {
      const double w = bg_.w_of_nu(nu);
      return 3.0 * bg_.t_squared_of_nu(nu) / (w + 3.0 / y0_);
    }
    case Family::Limit: {
      const double nu0 = bg_.nu0();
      const double eps = bg_.w_of_nu(nu) / (nu0 * nu0);
      if (eps <= kLimitSeriesSwitch) return limit_x_series(eps);
      return 3.0 * bg_.t_squared_of_nu(nu) / bg_.w_of_nu(nu);
    }
  }
  return 0.0;
}

double InstantonProfile::dx_dnu(double nu) const {
  check_domain(nu);
  switch (family_) {
    case Family::Flat:
      return 0.0;
    case Family::Finite: {
      const double w = bg_.w_of_nu(nu);
      const double denom = w + 3.0 / y0_;
      const double t2 = bg_.t_squared_of_nu(nu);
      const double dt2 = bg_.dt_squared_dnu(nu);
      return 3.0 * (dt2 * denom - t2 * 2.0 * nu) / (denom * denom);
    }
    case Family::Limit: {
      const double nu0 = bg_.nu0();
      const double w = bg_.w_of_nu(nu);
      const double eps = w / (nu0 * nu0);
      if (eps <= kLimitSeriesSwitch) {
        return limit_dx_deps_series(eps) * 2.0 * nu / (nu0 * nu0);
      }
      const double t2 = bg_.t_squared_of_nu(nu);
      const double dt2 = bg_.dt_squared_dnu(nu);
      return 3.0 * (dt2 * w - t2 * 2.0 * nu) / (w * w);
    }
  }
  return 0.0;
}

double InstantonProfile::dx_dr(double nu) const {
  const double t = std::sqrt(bg_.t_squared_of_nu(nu));
  return dx_dnu(nu) * 3.0 * t / nu;
}

double InstantonProfile::x_xminus1_over_t2(double nu) const {
  check_domain(nu);
  switch (family_) {
    case Family::Flat:
      return 0.0;
    case Family::Finite: {
      // x/t^2 = y(nu) is regular; x - 1 is plain.
      const double y = 3.0 / (bg_.w_of_nu(nu) + 3.0 / y0_);
      return y * (x_of_nu(nu) - 1.0);
    }
    case Family::Limit: {
      // x/t^2 = 3/w, so x(x-1)/t^2 = 3 (x-1)/w, with (x-1)/w -> -1/(3 nu0^2).
      const double nu0 = bg_.nu0();
      const double w = bg_.w_of_nu(nu);
      const double eps = w / (nu0 * nu0);
      if (eps <= kLimitSeriesSwitch) {
        const double xm1_over_w =
            (-1.0 / 3.0 + eps * (8.0 / 27.0 - eps * (22.0 / 81.0))) / (nu0 * nu0);
        return 3.0 * xm1_over_w;
      }
      return 3.0 * (x_of_nu(nu) - 1.0) / w;
    }
  }
  return 0.0;
}

double InstantonProfile::y_of_nu(double nu) const {
  check_domain(nu);
  switch (family_) {
    case Family::Flat:
      return 0.0;
    case Family::Finite:
      return 3.0 / (bg_.w_of_nu(nu) + 3.0 / y0_);
    case Family::Limit:
      throw domain_error("y_of_nu: the limit member's y diverges at the zero section");
  }
  return 0.0;
}

double InstantonProfile::x_of_r(double r, const num::ToleranceBudget& budget) const {
  return x_of_nu(bg_.nu_of_r(r, budget));
}

double InstantonProfile::y_of_r(double r, const num::ToleranceBudget& budget) const {
  return y_of_nu(bg_.nu_of_r(r, budget));
}

double instanton_ode_rhs(double x, double t, double nu) {
  if (!(t > 0.0)) throw domain_error("instanton_ode_rhs: t must be positive");
  const double ratio = t / nu;
  return -(2.0 / t) * x * (x - (1.0 - 2.0 * ratio * ratio));
}

std::array<double, 3> triaxial_ode_rhs(const std::array<double, 3>& a, double t,
                                       double nu) {
  if (!(t > 0.0)) throw domain_error("triaxial_ode_rhs: t must be positive");
  const double ratio = t / nu;
  const double equilibrium = 1.0 - 2.0 * ratio * ratio;
  std::array<double, 3> da{};
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    da[i] = -(2.0 / t) * (a[j] * a[k] - equilibrium * a[i]);
  }
  return da;
}

BlowupBoundary blowup_boundary(double y0, const MetricBackground& bg,
                               const num::ToleranceBudget& budget) {
  if (!(y0 < 0.0)) throw std::invalid_argument("blowup_boundary: y0 must be negative");
  const double nu_star_sq = bg.nu0() * bg.nu0() + 3.0 / std::abs(y0);
  return {nu_star_sq, bg.r_of_nu(std::sqrt(nu_star_sq), budget)};
}

num::SampledCurve integrate_instanton(const InstantonProfile& profile, double r0,
                                      double r1, const num::ToleranceBudget& budget,
                                      double max_step) {
  if (!(r0 > 0.0)) {
    throw std::invalid_argument("integrate_instanton: r0 must be positive (the radial "
                                "equation is singular at the zero section)");
  }
  const MetricBackground& bg = profile.background();
  const double nu_start = bg.nu_of_r(r0, budget);
  const std::array<double, 3> initial{std::sqrt(bg.t_squared_of_nu(nu_start)), nu_start,
                                      profile.x_of_nu(nu_start)};
  auto rhs = [](double, std::span<const double> y, std::span<double> dydr) {
    const auto [dt, dnu] = metric_ode_rhs(y[0], y[1]);
    dydr[0] = dt;
    dydr[1] = dnu;
    dydr[2] = instanton_ode_rhs(y[2], y[0], y[1]);
  };
  return num::integrate_ode(rhs, initial, r0, r1, budget, max_step);
}

num::SampledCurve integrate_triaxial(const MetricBackground& bg,
                                     const std::array<double, 3>& a0, double r0,
                                     double r1, const num::ToleranceBudget& budget,
                                     double max_step) {
  if (!(r0 > 0.0)) throw std::invalid_argument("integrate_triaxial: r0 must be positive");
  const double nu_start = bg.nu_of_r(r0, budget);
  const std::array<double, 5> initial{std::sqrt(bg.t_squared_of_nu(nu_start)), nu_start,
                                      a0[0], a0[1], a0[2]};
  auto rhs = [](double, std::span<const double> y, std::span<double> dydr) {
    const auto [dt, dnu] = metric_ode_rhs(y[0], y[1]);
    dydr[0] = dt;
    dydr[1] = dnu;
    const auto da = triaxial_ode_rhs({y[2], y[3], y[4]}, y[0], y[1]);
    dydr[2] = da[0];
    dydr[3] = da[1];
    dydr[4] = da[2];
  };
  return num::integrate_ode(rhs, initial, r0, r1, budget, max_step);
}

DecayRate decay_rate(const InstantonProfile& profile, double nu_lo, double nu_hi,
                     int samples) {
  if (profile.family() == InstantonProfile::Family::Flat) {
    throw num::degenerate_fit("decay_rate: the flat member has no decay toward 3/5");
  }
  if (!profile.globally_defined()) {
    throw domain_error("decay_rate: member is not globally defined");
  }
  if (!(nu_lo > profile.background().nu0()) || !(nu_hi > nu_lo) || samples < 3) {
    throw std::invalid_argument("decay_rate: bad fit window");
  }
  std::vector<double> nus(static_cast<std::size_t>(samples));
  std::vector<double> gaps(static_cast<std::size_t>(samples));
  const double log_lo = std::log(nu_lo), log_hi = std::log(nu_hi);
  for (int i = 0; i < samples; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(samples - 1);
    const double nu = std::exp(log_lo + f * (log_hi - log_lo));
    nus[static_cast<std::size_t>(i)] = nu;
    gaps[static_cast<std::size_t>(i)] = std::abs(profile.x_of_nu(nu) - 0.6);
  }
  const num::LineFit fit = num::loglog_slope(nus, gaps);
  return {fit.slope, std::exp(fit.intercept), fit.residual};
}

}  // namespace spin7lab
