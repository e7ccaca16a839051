#include "spin7lab/metric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace spin7lab {

namespace {

constexpr double kTenThirds = 10.0 / 3.0;

// nu^e - nu0^e evaluated as nu0^e * expm1(e * log1p((nu-nu0)/nu0)); exact
// subtraction nu - nu0 keeps this accurate arbitrarily close to nu0.
double pow_gap(double nu, double nu0, double expo) {
  return std::pow(nu0, expo) * std::expm1(expo * std::log1p((nu - nu0) / nu0));
}

// Same quantity from an exactly-known offset d = nu - nu0 (quadrature path).
double pow_gap_from_offset(double d, double nu0, double expo) {
  return std::pow(nu0, expo) * std::expm1(expo * std::log1p(d / nu0));
}

}  // namespace

std::pair<double, double> metric_ode_rhs(double t, double nu) {
  if (!(nu > 0.0)) throw domain_error("metric_ode_rhs: nu must be positive");
  const double ratio = t / nu;
  return {1.0 - 2.0 * ratio * ratio, 3.0 * ratio};
}

double conserved_level(double t, double nu) {
  const double q = nu * nu - 5.0 * t * t;
  return nu * nu * nu * nu * q * q * q;
}

MetricBackground::MetricBackground(double nu0, double cross_section_volume)
    : nu0_(nu0), cross_section_volume_(cross_section_volume) {
  if (!(nu0 > 0.0)) throw std::invalid_argument("MetricBackground: nu0 must be positive");
  if (!(cross_section_volume > 0.0)) {
    throw std::invalid_argument("MetricBackground: cross-section volume must be positive");
  }
}

double MetricBackground::t_squared_of_nu(double nu) const {
  if (!(nu >= nu0_)) throw domain_error("t_squared_of_nu: nu must be >= nu0");
  return pow_gap(nu, nu0_, kTenThirds) / (5.0 * std::pow(nu, 4.0 / 3.0));
}

double MetricBackground::dt_squared_dnu(double nu) const {
  const double t2 = t_squared_of_nu(nu);
  return (2.0 / (3.0 * nu)) * (nu * nu - 2.0 * t2);
}

double MetricBackground::r_of_nu(double nu, const num::ToleranceBudget& budget) const {
  if (!(nu >= nu0_)) throw domain_error("r_of_nu: nu must be >= nu0");
  if (nu == nu0_) return 0.0;
  const double nu0 = nu0_;
  auto line_element = [nu0](double sigma, double offset) {
    const double gap = pow_gap_from_offset(offset, nu0, kTenThirds);
    return std::sqrt((5.0 / 9.0) * std::pow(sigma, kTenThirds) / gap);
  };
  return num::adaptive_quadrature(line_element, nu0_, nu, budget, -0.5).value;
}

double MetricBackground::nu_of_r(double r, const num::ToleranceBudget& budget) const {
  if (!(r >= 0.0)) throw domain_error("nu_of_r: r must be >= 0");
  if (r == 0.0) return nu0_;

  // Newton in m = sqrt(nu^2 - nu0^2); dr/dm stays finite and nonzero at the
  // zero section, unlike dr/dnu.
  auto nu_of_m = [this](double m) { return std::sqrt(nu0_ * nu0_ + m * m); };
  auto r_of_m = [&, this](double m) { return r_of_nu(nu_of_m(m), budget); };
  auto dr_dm = [&, this](double m) {
    const double nu = nu_of_m(m);
    const double gap = pow_gap(nu, nu0_, kTenThirds);
    return (m / nu) * std::sqrt((5.0 / 9.0) * std::pow(nu, kTenThirds) / gap);
  };

  // Initial guess from the near-section series, switching to the cone slope.
  double m = (r < 0.7 * nu0_)
                 ? std::sqrt(std::max(3.0 * r * r * (1.0 - r * r / (3.0 * nu0_ * nu0_)),
                                      0.5 * r * r))
                 : std::sqrt(3.0) * r;

  double lo = 0.0, hi = m;
  while (r_of_m(hi) < r) {
    lo = hi;
    hi *= 2.0;
  }
  m = std::clamp(m, lo, hi);

  const double tol = 1e-13 * std::max({r, nu0_, 1.0});
  for (int iter = 0; iter < 100; ++iter) {
    const double f = r_of_m(m) - r;
    if (std::abs(f) <= tol) break;
    if (f > 0.0) {
      hi = m;
    } else {
      lo = m;
    }
    const double step = f / dr_dm(m);
    double next = m - step;
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    if (next == m) break;
    m = next;
  }
  return nu_of_m(m);
}

double MetricBackground::volume_density(double r, const num::ToleranceBudget& budget) const {
  if (!(r >= 0.0)) throw domain_error("volume_density: r must be >= 0");
  if (r == 0.0) return 0.0;
  const double nu = nu_of_r(r, budget);
  const double t = std::sqrt(t_squared_of_nu(nu));
  return t * t * t * nu * nu * nu * nu;
}

MetricCoefficients MetricBackground::metric_coefficients(double nu) const {
  if (!(nu > nu0_)) {
    throw domain_error("metric_coefficients: nu must exceed nu0 (g_rr diverges there)");
  }
  // 1 - (nu0/nu)^{10/3}, stable near nu0.
  const double one_minus = -std::expm1(-kTenThirds * std::log1p((nu - nu0_) / nu0_));
  return {(5.0 / 9.0) / one_minus, t_squared_of_nu(nu), nu * nu};
}

RadialTrajectory MetricBackground::integrate(double r_max,
                                             const num::ToleranceBudget& budget,
                                             double max_step) const {
  if (!(r_max > 0.0)) throw std::invalid_argument("integrate: r_max must be positive");
  auto rhs = [](double, std::span<const double> y, std::span<double> dydr) {
    const auto [dt, dnu] = metric_ode_rhs(y[0], y[1]);
    dydr[0] = dt;
    dydr[1] = dnu;
  };
  const std::array<double, 2> initial{0.0, nu0_};
  RadialTrajectory traj;
  traj.samples = num::integrate_ode(rhs, initial, 0.0, r_max, budget, max_step);
  return traj;
}

SeriesCoefficients MetricBackground::series_coefficients(int order) const {
  if (order < 2 || order > 6) {
    throw std::invalid_argument("series_coefficients: order must lie in [2, 6]");
  }
  const std::size_t n = static_cast<std::size_t>(order);

  // Solve for t = sum b_k r^k and u = nu^2 = sum c_k r^k from
  //   u' = 6 t   and   u t' = u - 2 t^2,
  // matching coefficients order by order; then nu = sqrt(u) as a series.
  std::vector<double> b(n + 1, 0.0), c(n + 1, 0.0);
  c[0] = nu0_ * nu0_;
  b[0] = 0.0;
  b[1] = 1.0;  // order-0 coefficient match of u t' = u - 2 t^2
  for (std::size_t m = 2; m <= n; ++m) {
    c[m] = 6.0 * b[m - 1] / static_cast<double>(m);
    double rhs = c[m - 1];
    for (std::size_t i = 0; i <= m - 1; ++i) rhs -= 2.0 * b[i] * b[m - 1 - i];
    for (std::size_t i = 1; i <= m - 1; ++i) {
      rhs -= c[i] * static_cast<double>(m - i) * b[m - i];
    }
    b[m] = rhs / (c[0] * static_cast<double>(m));
  }

  std::vector<double> a(n + 1, 0.0);
  a[0] = nu0_;
  for (std::size_t m = 1; m <= n; ++m) {
    double acc = c[m];
    for (std::size_t i = 1; i + 1 <= m; ++i) acc -= a[i] * a[m - i];
    a[m] = acc / (2.0 * a[0]);
  }
  return {std::move(b), std::move(a)};
}

// ---------------------------------------------------------------------------
// Level-set tracing.

namespace {

struct Point {
  double nu, t;
};

double level_fn(const Point& z) { return conserved_level(z.t, z.nu); }

Point level_gradient(const Point& z) {
  const double q = z.nu * z.nu - 5.0 * z.t * z.t;
  const double dnu = z.nu * z.nu * z.nu * q * q * (10.0 * z.nu * z.nu - 20.0 * z.t * z.t);
  const double dt = -30.0 * z.t * std::pow(z.nu, 4.0) * q * q;
  return {dnu, dt};
}

bool newton_correct(Point& z, double level, double tol) {
  for (int iter = 0; iter < 25; ++iter) {
    const double f = level_fn(z) - level;
    if (std::abs(f) <= tol) return true;
    const Point g = level_gradient(z);
    const double g2 = g.nu * g.nu + g.t * g.t;
    if (!(g2 > 0.0)) return false;
    z.nu -= f * g.nu / g2;
    z.t -= f * g.t / g2;
  }
  return std::abs(level_fn(z) - level) <= tol;
}

bool inside(const Point& z, const LevelSetWindow& w) {
  return z.nu >= 0.0 && z.t >= 0.0 && z.nu <= w.nu_max && z.t <= w.t_max;
}

// Marches from `start` along the curve in the tangent orientation given by
// `dir`, Newton-correcting back onto the level after each predictor step.
std::vector<Point> march(Point start, double dir, double level, double step,
                         const LevelSetWindow& window, double tol) {
  std::vector<Point> pts;
  Point z = start;
  Point prev_tan{0.0, 0.0};
  bool have_prev = false;
  const std::size_t max_points = 100000;
  while (pts.size() < max_points) {
    pts.push_back(z);
    Point g = level_gradient(z);
    Point tan{-g.t, g.nu};
    const double norm = std::hypot(tan.nu, tan.t);
    if (!(norm > 0.0)) break;
    tan.nu /= norm;
    tan.t /= norm;
    if (!have_prev) {
      tan.nu *= dir;
      tan.t *= dir;
      have_prev = true;
    } else if (tan.nu * prev_tan.nu + tan.t * prev_tan.t < 0.0) {
      tan.nu = -tan.nu;
      tan.t = -tan.t;
    }
    prev_tan = tan;
    Point next{z.nu + step * tan.nu, z.t + step * tan.t};
    if (!newton_correct(next, level, tol)) break;
    if (!inside(next, window)) break;
    z = next;
  }
  return pts;
}

}  // namespace

std::vector<std::pair<double, double>> trace_level_set(double level,
                                                       const LevelSetWindow& window,
                                                       double step) {
  if (!(step > 0.0)) throw std::invalid_argument("trace_level_set: step must be positive");
  std::vector<std::pair<double, double>> out;

  if (level == 0.0) {
    // nu^4 (nu^2 - 5 t^2)^3 factors; the positive-quadrant zero set is the
    // exact cone line t = nu/sqrt(5).
    const double slope = 1.0 / std::sqrt(5.0);
    const double nu_end = std::min(window.nu_max, window.t_max / slope);
    const int n = std::max(2, static_cast<int>(std::ceil(nu_end / step)));
    for (int i = 0; i <= n; ++i) {
      const double nu = nu_end * static_cast<double>(i) / static_cast<double>(n);
      out.emplace_back(nu, slope * nu);
    }
    return out;
  }

  const double tol = 1e-10 * std::max(1.0, std::abs(level));
  if (level > 0.0) {
    // The curve crosses t = 0 at nu = level^{1/10}; march upward.
    Point start{std::pow(level, 0.1), 0.0};
    for (const Point& z : march(start, +1.0, level, step, window, tol)) {
      out.emplace_back(z.nu, z.t);
    }
    return out;
  }

  // Negative levels never reach t = 0; the fold (minimum t) sits on
  // nu^2 = 2 t^2 with value -108 t^10. March both ways from the fold.
  const double t_fold = std::pow(-level / 108.0, 0.1);
  Point fold{std::sqrt(2.0) * t_fold, t_fold};
  if (!inside(fold, window)) return out;
  std::vector<Point> left = march(fold, -1.0, level, step, window, tol);
  std::vector<Point> right = march(fold, +1.0, level, step, window, tol);
  for (auto it = left.rbegin(); it != left.rend(); ++it) out.emplace_back(it->nu, it->t);
  for (std::size_t i = 1; i < right.size(); ++i) out.emplace_back(right[i].nu, right[i].t);
  return out;
}

}  // namespace spin7lab
