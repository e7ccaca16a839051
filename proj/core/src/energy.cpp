#include "spin7lab/energy.hpp"

#include <cmath>
#include <vector>

namespace spin7lab {

ExtensionClass classify_extension(const InstantonProfile& profile) {
  using Family = InstantonProfile::Family;
  const double nu0 = profile.background().nu0();

  ExtensionClass tag = ExtensionClass::FlatBundle;
  double expected_x0 = 0.0;
  switch (profile.family()) {
    case Family::Flat:
      tag = ExtensionClass::FlatBundle;
      expected_x0 = 0.0;
      break;
    case Family::Limit:
      tag = ExtensionClass::PullbackBundle;
      expected_x0 = 1.0;
      break;
    case Family::Finite:
      if (profile.y0() < 0.0) return ExtensionClass::LocalOnly;
      tag = profile.y0() == 0.0 ? ExtensionClass::FlatBundle : ExtensionClass::TrivialBundle;
      expected_x0 = 0.0;
      break;
  }

  const ZeroSectionProbe probe = zero_section_boundedness(profile);
  const double x0 = profile.x_of_nu(nu0);
  if (!probe.bounded || std::abs(x0 - expected_x0) > 1e-12) {
    throw std::logic_error("classify_extension: numeric check contradicts the family tag");
  }
  return tag;
}

double profile_gap_to_limit(double y0, const MetricBackground& bg, double nu) {
  if (!(y0 > 0.0)) throw std::invalid_argument("profile_gap_to_limit: y0 must be positive");
  // x_{y0} - x_lim = -(3/y0) x_lim / (w + 3/y0), with w = nu^2 - nu0^2.
  const InstantonProfile lim = InstantonProfile::limit(bg);
  const double w = bg.w_of_nu(nu);
  return -(3.0 / y0) * lim.x_of_nu(nu) / (w + 3.0 / y0);
}

double energy_difference_density(double y0, const MetricBackground& bg, double nu) {
  if (!(y0 > 0.0)) {
    throw std::invalid_argument("energy_difference_density: y0 must be positive");
  }
  const InstantonProfile member = InstantonProfile::finite(bg, y0);
  const InstantonProfile lim = InstantonProfile::limit(bg);
  return energy_density(member, nu) - energy_density(lim, nu);
}

EnergyRegionReport region_energy_difference(double y0, const MetricBackground& bg,
                                            NuSqRegion region,
                                            const num::ToleranceBudget& budget) {
  if (!(y0 > 0.0)) throw std::invalid_argument("region_energy_difference: y0 must be positive");
  const double s0 = bg.nu0() * bg.nu0();
  if (!(region.lo >= s0) || !(region.hi > region.lo) || !std::isfinite(region.hi)) {
    throw std::invalid_argument(
        "region_energy_difference: region must be a finite interval inside [nu0^2, inf)");
  }

  // Integrand in s = nu^2, then the linear concentration substitution
  // u = y0 (s - s0): keeps the O(1/y0)-wide spike at the zero section on an
  // O(1) u-scale for every y0.
  auto integrand_s = [&](double s) {
    const double nu = std::sqrt(s);
    const double t2 = bg.t_squared_of_nu(nu);
    return energy_difference_density(y0, bg, nu) * (1.0 / 6.0) * t2 * s * s;
  };
  const double u_lo = y0 * (region.lo - s0);
  const double u_hi = y0 * (region.hi - s0);
  auto integrand_u = [&](double u) { return integrand_s(s0 + u / y0) / y0; };

  const num::QuadratureResult q = num::adaptive_quadrature(integrand_u, u_lo, u_hi, budget);
  return {y0, region, q.value, q.error_estimate};
}

double off_diagonal_limit_terms(double y0, const MetricBackground& bg, int n, double eps,
                                const num::ToleranceBudget& budget) {
  if (n < 0 || n > 3) throw std::invalid_argument("off_diagonal_limit_terms: n must be 0..3");
  if (!(eps > 0.0)) throw std::invalid_argument("off_diagonal_limit_terms: eps must be positive");
  if (!(y0 > 0.0)) throw std::invalid_argument("off_diagonal_limit_terms: y0 must be positive");

  const double s0 = bg.nu0() * bg.nu0();
  const NuSqRegion region{s0, s0 + eps};
  constexpr int kSweep = 4;
  std::vector<double> ys(kSweep), js(kSweep);
  for (int i = 0; i < kSweep; ++i) {
    ys[static_cast<std::size_t>(i)] = y0 * std::pow(4.0, i);
    js[static_cast<std::size_t>(i)] =
        region_energy_difference(ys[static_cast<std::size_t>(i)], bg, region, budget).value;
  }
  const num::LimitFit fit = num::extrapolate_limit(ys, js);
  if (n == 2) return fit.limit;

  std::vector<double> gaps(kSweep);
  for (int i = 0; i < kSweep; ++i) {
    gaps[static_cast<std::size_t>(i)] = std::abs(js[static_cast<std::size_t>(i)] - fit.limit);
  }
  for (double g : gaps) {
    if (!(g > 0.0)) {
      throw num::degenerate_fit("off_diagonal_limit_terms: remainder vanished identically");
    }
  }
  return num::loglog_slope(ys, gaps).slope;
}

double compact_convergence_gap(double y0, const MetricBackground& bg, NuSqRegion region,
                               int samples) {
  const double s0 = bg.nu0() * bg.nu0();
  if (!(region.lo > s0) || !(region.hi > region.lo)) {
    throw std::invalid_argument(
        "compact_convergence_gap: region must be bounded away from nu0^2");
  }
  if (samples < 2) throw std::invalid_argument("compact_convergence_gap: samples >= 2");
  double sup = 0.0;
  const double log_lo = std::log(region.lo), log_hi = std::log(region.hi);
  for (int i = 0; i < samples; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(samples - 1);
    const double nu = std::sqrt(std::exp(log_lo + f * (log_hi - log_lo)));
    const double t = std::sqrt(bg.t_squared_of_nu(nu));
    const double gap = std::abs(profile_gap_to_limit(y0, bg, nu)) * std::sqrt(6.0) / t;
    sup = std::max(sup, gap);
  }
  return sup;
}

TailExponent radial_tail_exponent(double y0, const MetricBackground& bg, double nu_lo,
                                  double nu_hi, int samples) {
  if (!(nu_lo > bg.nu0()) || !(nu_hi > nu_lo) || samples < 3) {
    throw std::invalid_argument("radial_tail_exponent: bad window");
  }
  std::vector<double> nus(static_cast<std::size_t>(samples));
  std::vector<double> vals(static_cast<std::size_t>(samples));
  const double log_lo = std::log(nu_lo), log_hi = std::log(nu_hi);
  for (int i = 0; i < samples; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(samples - 1);
    const double nu = std::exp(log_lo + f * (log_hi - log_lo));
    const double t = std::sqrt(bg.t_squared_of_nu(nu));
    const double integrand = energy_difference_density(y0, bg, nu) * t * t * t *
                             nu * nu * nu * nu;
    nus[static_cast<std::size_t>(i)] = nu;
    vals[static_cast<std::size_t>(i)] = std::abs(integrand);
  }
  const num::LineFit fit = num::loglog_slope(nus, vals);
  return {fit.slope, fit.residual};
}

}  // namespace spin7lab
