#include "spin7lab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <limits>
#include <optional>

#include "spin7lab/bubble.hpp"
#include "spin7lab/csv.hpp"
#include "spin7lab/energy.hpp"
#include "spin7lab/instanton.hpp"
#include "spin7lab/metric.hpp"
#include "spin7lab/schemas.hpp"

namespace spin7lab::verify {

const char* status_label(Status s) {
  switch (s) {
    case Status::Pass: return "PASS";
    case Status::Fail: return "FAIL";
    case Status::Warn: return "WARN";
    case Status::ExpectedFail: return "XFAIL";
  }
  return "?";
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Artifact default; budgets looser than this downgrade tolerance-sensitive
// failures to warnings.
bool budget_loosened(const num::ToleranceBudget& b) {
  return b.rel_tol > 1e-9 || b.abs_tol > 1e-11;
}

struct Checker {
  std::vector<CheckResult> results;
  bool loosened = false;

  void add(const std::string& name, bool ok, const std::string& detail,
           bool tolerance_sensitive = false) {
    Status s = Status::Pass;
    if (!ok) s = (tolerance_sensitive && loosened) ? Status::Warn : Status::Fail;
    results.push_back({name, s, detail});
  }
  void add_expected_fail(const std::string& name, bool fired, const std::string& detail) {
    results.push_back({name, fired ? Status::ExpectedFail : Status::Fail, detail});
  }
};

void guarded(Checker& c, const std::string& name, bool tolerance_sensitive,
             const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    c.add(name, false, std::string("exception: ") + e.what(), tolerance_sensitive);
  }
}

// Shared, lazily computed fixtures (nu0 = 1 scales throughout).
struct Ctx {
  Options opt;
  MetricBackground bg{1.0};

  std::optional<RadialTrajectory> traj_;
  std::optional<double> r_at_nu10_;
  const RadialTrajectory& trajectory() {
    if (!traj_) {
      r_at_nu10_ = bg.r_of_nu(10.0, opt.budget);
      traj_ = bg.integrate(*r_at_nu10_, opt.budget);
    }
    return *traj_;
  }
  double r_at_nu10() {
    trajectory();
    return *r_at_nu10_;
  }

  std::vector<double> j_y0_sweep{1e2, 1e3, 1e4, 1e5};
  std::optional<std::vector<EnergyRegionReport>> j14_, j19_, j24_;
  const std::vector<EnergyRegionReport>& j_sweep(NuSqRegion region,
                                                 std::optional<std::vector<EnergyRegionReport>>& slot) {
    if (!slot) {
      std::vector<EnergyRegionReport> out;
      out.reserve(j_y0_sweep.size());
      for (double y0 : j_y0_sweep) {
        out.push_back(region_energy_difference(y0, bg, region, opt.budget));
      }
      slot = std::move(out);
    }
    return *slot;
  }
  const std::vector<EnergyRegionReport>& j14() { return j_sweep({1.0, 4.0}, j14_); }
  const std::vector<EnergyRegionReport>& j19() { return j_sweep({1.0, 9.0}, j19_); }
  const std::vector<EnergyRegionReport>& j24() { return j_sweep({2.0, 4.0}, j24_); }

  std::vector<double> bubble_kappas{0.5, 1.0, 2.0};
  std::vector<double> bubble_y0s{1e2, 1e3, 1e4};
  std::optional<std::vector<BubbleReport>> bubbles_;
  const std::vector<BubbleReport>& bubbles() {
    if (!bubbles_) {
      std::vector<BubbleReport> out;
      for (double kappa : bubble_kappas) {
        for (double y0 : bubble_y0s) {
          out.push_back(bubble_distance(BubbleParams::make(kappa, y0), bg, 256, opt.budget));
        }
      }
      bubbles_ = std::move(out);
    }
    return *bubbles_;
  }
};

struct LimitFitSummary {
  double limit;
  double rms_residual;
  double max_quadrature_error;
};

LimitFitSummary summarize_extrapolation(const std::vector<double>& y0s,
                                        const std::vector<EnergyRegionReport>& reports) {
  std::vector<double> values(reports.size());
  double max_err = 0.0;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    values[i] = reports[i].value;
    max_err = std::max(max_err, reports[i].error_estimate);
  }
  const num::LimitFit fit = num::extrapolate_limit(y0s, values);
  double ss = 0.0;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const double r = values[i] - (fit.limit + fit.coefficient / y0s[i]);
    ss += r * r;
  }
  return {fit.limit, std::sqrt(ss / static_cast<double>(reports.size())), max_err};
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] =
        std::exp(llo + (lhi - llo) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  return out;
}

// ---------------------------------------------------------------------------
// numerics_core invariants

void check_numerics(Checker& c, Ctx& ctx) {
  const num::ToleranceBudget& budget = ctx.opt.budget;

  guarded(c, "numerics/ode-exponential-law", false, [&] {
    double worst = 0.0;
    for (double lambda : {-1.0, 0.0, 1.0}) {
      for (double delta : {2.5, 5.0}) {
        auto rhs = [lambda](double, std::span<const double> y, std::span<double> dy) {
          dy[0] = lambda * y[0];
        };
        const double y0[] = {1.0};
        const num::SampledCurve curve = num::integrate_ode(rhs, y0, 0.0, delta, budget);
        const double expected = std::exp(lambda * delta);
        worst = std::max(worst,
                         std::abs(curve.values.back() - expected) / std::abs(expected));
      }
    }
    c.add("numerics/ode-exponential-law", worst <= 10.0 * budget.rel_tol,
          "max relative error " + fmt(worst) + " vs 10*rel_tol");
  });

  guarded(c, "numerics/ode-constant-curve", false, [&] {
    auto rhs = [](double, std::span<const double>, std::span<double> dy) { dy[0] = 0.0; };
    const double y0[] = {4.25};
    const num::SampledCurve curve = num::integrate_ode(rhs, y0, 0.0, 3.0, budget);
    bool constant = true;
    for (std::size_t i = 0; i < curve.size(); ++i) constant &= curve.value(i) == 4.25;
    c.add("numerics/ode-constant-curve", constant, "y' = 0 stays bitwise constant");
  });

  guarded(c, "numerics/ode-finite-time-blowup", true, [&] {
    auto rhs = [](double, std::span<const double> y, std::span<double> dy) {
      dy[0] = -2.0 * y[0] * y[0];
    };
    const double y0[] = {-1.0};
    bool threw = false;
    double last_r = 0.0, worst = 0.0;
    try {
      num::integrate_ode(rhs, y0, 0.0, 1.0, budget);
    } catch (const num::step_limit_exceeded& e) {
      threw = true;
      last_r = e.last_abscissa();
      const num::SampledCurve& partial = e.partial();
      for (std::size_t i = 0; i < partial.size(); ++i) {
        const double r = partial.abscissae[i];
        if (r > 0.45) break;
        const double exact = -1.0 / (1.0 - 2.0 * r);
        worst = std::max(worst, std::abs(partial.value(i) - exact) / std::abs(exact));
      }
    }
    const bool ok = threw && last_r > 0.4 && last_r <= 0.5 && worst <= 1e-6;
    c.add("numerics/ode-finite-time-blowup", ok,
          "pole at r=1/2: stopped at r=" + fmt(last_r) + ", oracle misfit " + fmt(worst),
          true);
  });

  guarded(c, "numerics/quadrature-additivity", false, [&] {
    auto f = [](double x) { return std::exp(-x) * std::cos(3.0 * x); };
    double worst = 0.0;
    const num::QuadratureResult whole = num::adaptive_quadrature(f, 0.0, 2.0, budget);
    for (double m : {0.3, 0.7, 1.4}) {
      const num::QuadratureResult a = num::adaptive_quadrature(f, 0.0, m, budget);
      const num::QuadratureResult b = num::adaptive_quadrature(f, m, 2.0, budget);
      const double gap = std::abs(whole.value - a.value - b.value);
      const double allowance =
          whole.error_estimate + a.error_estimate + b.error_estimate + 1e-14;
      worst = std::max(worst, gap / allowance);
    }
    c.add("numerics/quadrature-additivity", worst <= 1.0,
          "split-point mismatch at " + fmt(worst) + "x the combined error estimates");
  });

  guarded(c, "numerics/quadrature-singular-endpoint", true, [&] {
    auto f = [](double x) { return 1.0 / std::sqrt(x); };
    const num::QuadratureResult q = num::adaptive_quadrature(f, 0.0, 1.0, budget, -0.5);
    auto lin = [](double x) { return x; };
    const num::QuadratureResult l = num::adaptive_quadrature(lin, 0.0, 1.0, budget);
    const bool ok = std::abs(q.value - 2.0) <= 1e-9 && std::abs(l.value - 0.5) <= 1e-12;
    c.add("numerics/quadrature-singular-endpoint", ok,
          "int_0^1 x^{-1/2} = " + fmt(q.value) + ", int_0^1 x = " + fmt(l.value), true);
  });

  guarded(c, "numerics/quadrature-infinite-limit", true, [&] {
    auto f = [](double x) { return std::exp(-x); };
    const num::QuadratureResult q = num::adaptive_quadrature(
        f, 0.0, std::numeric_limits<double>::infinity(), budget);
    c.add("numerics/quadrature-infinite-limit", std::abs(q.value - 1.0) <= 1e-9,
          "int_0^inf e^{-x} = " + fmt(q.value), true);
  });

  guarded(c, "numerics/loglog-exact-power", false, [&] {
    const std::vector<double> xs = log_grid(0.1, 10.0, 32);
    std::vector<double> cube(xs.size()), inv2(xs.size()), p103(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      cube[i] = xs[i] * xs[i] * xs[i];
      inv2[i] = 7.0 / (xs[i] * xs[i]);
      p103[i] = std::pow(xs[i], -10.0 / 3.0);
    }
    const num::LineFit f3 = num::loglog_slope(xs, cube);
    const num::LineFit fm2 = num::loglog_slope(xs, inv2);
    const num::LineFit fp = num::loglog_slope(xs, p103);
    const bool ok = std::abs(f3.slope - 3.0) <= 1e-12 && f3.residual <= 1e-12 &&
                    std::abs(fm2.slope + 2.0) <= 1e-12 &&
                    std::abs(fm2.intercept - std::log(7.0)) <= 1e-12 &&
                    std::abs(fp.slope + 10.0 / 3.0) <= 1e-12;
    c.add("numerics/loglog-exact-power", ok,
          "slopes " + fmt(f3.slope) + ", " + fmt(fm2.slope) + ", " + fmt(fp.slope));
  });

  guarded(c, "numerics/extrapolate-exact-model", false, [&] {
    const std::vector<double> ps{10.0, 100.0, 1000.0};
    const std::vector<double> vs{4.1, 4.01, 4.001};
    const num::LimitFit fit = num::extrapolate_limit(ps, vs);
    const std::vector<double> cs{10.0, 100.0, 1000.0};
    const std::vector<double> cv{5.0, 5.0, 5.0};
    const num::LimitFit cfit = num::extrapolate_limit(cs, cv);
    const bool ok = std::abs(fit.limit - 4.0) <= 1e-9 &&
                    std::abs(fit.coefficient - 1.0) <= 1e-9 &&
                    std::abs(cfit.limit - 5.0) <= 1e-12 && std::abs(cfit.coefficient) <= 1e-9;
    c.add("numerics/extrapolate-exact-model", ok,
          "L = " + fmt(fit.limit) + ", c = " + fmt(fit.coefficient));
  });

  guarded(c, "numerics/bitwise-determinism", false, [&] {
    auto rhs = [](double, std::span<const double> y, std::span<double> dy) {
      const auto [dt, dnu] = metric_ode_rhs(y[0], y[1]);
      dy[0] = dt;
      dy[1] = dnu;
    };
    const double y0[] = {0.0, 1.0};
    const num::SampledCurve a = num::integrate_ode(rhs, y0, 0.0, 3.0, budget);
    const num::SampledCurve b = num::integrate_ode(rhs, y0, 0.0, 3.0, budget);
    const bool ok = a.abscissae == b.abscissae && a.values == b.values;
    c.add("numerics/bitwise-determinism", ok, "identical inputs give bit-identical output");
  });
}

// ---------------------------------------------------------------------------
// metric_background invariants

void check_metric(Checker& c, Ctx& ctx) {
  guarded(c, "metric/first-integral-drift", true, [&] {
    const RadialTrajectory& traj = ctx.trajectory();
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
      worst = std::max(worst, std::abs(conserved_level(traj.t(i), traj.nu(i)) - 1.0));
    }
    c.add("metric/first-integral-drift", worst <= 1e-8,
          "max |nu^4(nu^2-5t^2)^3 - 1| = " + fmt(worst) + " to nu = 10", true);
  });

  guarded(c, "metric/monotone-increasing", true, [&] {
    const RadialTrajectory& traj = ctx.trajectory();
    bool mono = true;
    for (std::size_t i = 1; i < traj.size(); ++i) {
      mono &= traj.t(i) > traj.t(i - 1) && traj.nu(i) > traj.nu(i - 1);
    }
    c.add("metric/monotone-increasing", mono, "t and nu strictly increase for r > 0",
          true);
  });

  guarded(c, "metric/cone-positivity", true, [&] {
    const RadialTrajectory& traj = ctx.trajectory();
    bool positive = true;
    for (std::size_t i = 0; i < traj.size(); ++i) {
      positive &= traj.nu(i) * traj.nu(i) - 5.0 * traj.t(i) * traj.t(i) > 0.0;
    }
    c.add("metric/cone-positivity", positive, "nu^2 - 5 t^2 > 0 at every sample",
          true);
  });

  guarded(c, "metric/closed-form-agreement", true, [&] {
    const RadialTrajectory& traj = ctx.trajectory();
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
      const double t2 = ctx.bg.t_squared_of_nu(traj.nu(i));
      worst = std::max(worst, std::abs(traj.t(i) * traj.t(i) - t2));
    }
    c.add("metric/closed-form-agreement", worst <= 1e-6,
          "max |t_ode^2 - t^2(nu_ode)| = " + fmt(worst), true);
  });

  guarded(c, "metric/inverse-consistency", true, [&] {
    const RadialTrajectory& traj = ctx.trajectory();
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
      const double r = traj.r(i);
      const double back = ctx.bg.r_of_nu(traj.nu(i), ctx.opt.budget);
      worst = std::max(worst, std::abs(back - r) / std::max(r, 1.0));
    }
    c.add("metric/inverse-consistency", worst <= 1e-6,
          "max |r_of_nu(nu_ode(r)) - r| = " + fmt(worst), true);
  });

  guarded(c, "metric/cone-convergence-rate", false, [&] {
    const std::vector<double> nus = log_grid(1e2, 1e4, 48);
    std::vector<double> gaps(nus.size());
    for (std::size_t i = 0; i < nus.size(); ++i) {
      gaps[i] = 0.2 - ctx.bg.t_squared_of_nu(nus[i]) / (nus[i] * nus[i]);
    }
    const num::LineFit fit = num::loglog_slope(nus, gaps);
    c.add("metric/cone-convergence-rate", std::abs(fit.slope + 10.0 / 3.0) <= 0.05,
          "t^2/nu^2 -> 1/5 with fitted exponent " + fmt(fit.slope));
  });

  guarded(c, "metric/series-vs-ode", true, [&] {
    const SeriesCoefficients series = ctx.bg.series_coefficients(6);
    const RadialTrajectory short_traj = ctx.bg.integrate(0.05, ctx.opt.budget);
    const double r = 0.05;
    double t_series = 0.0, nu_series = 0.0, rp = 1.0;
    for (std::size_t k = 0; k < series.t.size(); ++k) {
      t_series += series.t[k] * rp;
      nu_series += series.nu[k] * rp;
      rp *= r;
    }
    const std::size_t last = short_traj.size() - 1;
    const double dt = std::abs(t_series - short_traj.t(last));
    const double dnu = std::abs(nu_series - short_traj.nu(last));
    c.add("metric/series-vs-ode", dt <= 1e-8 && dnu <= 1e-8,
          "series vs ODE at r=0.05: dt = " + fmt(dt) + ", dnu = " + fmt(dnu), true);
  });

  guarded(c, "metric/volume-change-of-variables", true, [&] {
    // int f t^3 nu^4 dr = (1/6) int f t^2 nu^4 dnu^2 with f = 1, up to nu = 2.
    const double r_end = ctx.bg.r_of_nu(2.0, ctx.opt.budget);
    auto by_r = [&](double r) { return ctx.bg.volume_density(r, ctx.opt.budget); };
    num::ToleranceBudget loose = ctx.opt.budget;
    loose.rel_tol = std::max(loose.rel_tol, 1e-9);
    const num::QuadratureResult a = num::adaptive_quadrature(by_r, 0.0, r_end, loose);
    auto by_s = [&](double s) {
      const double nu = std::sqrt(s);
      return ctx.bg.t_squared_of_nu(nu) * s * s / 6.0;
    };
    const num::QuadratureResult b = num::adaptive_quadrature(by_s, 1.0, 4.0, ctx.opt.budget);
    const double rel = std::abs(a.value - b.value) / std::abs(b.value);
    c.add("metric/volume-change-of-variables", rel <= 1e-8,
          "dual-route volume integrals differ by " + fmt(rel) + " (relative)", true);
  });

  guarded(c, "metric/coefficients", false, [&] {
    const MetricCoefficients far = ctx.bg.metric_coefficients(1e3);
    const double nu_near = 1.0 + 1e-6;
    const MetricCoefficients near = ctx.bg.metric_coefficients(nu_near);
    const double fiber_expected = (2.0 / 3.0) * (nu_near - 1.0);
    bool domain_ok = false;
    try {
      (void)ctx.bg.metric_coefficients(1.0);
    } catch (const domain_error&) {
      domain_ok = true;
    }
    const bool ok = std::abs(far.g_rr_in_nu - 5.0 / 9.0) <= 1e-9 &&
                    std::abs(near.fiber / fiber_expected - 1.0) <= 1e-5 &&
                    far.horizontal == 1e6 && domain_ok;
    c.add("metric/coefficients", ok,
          "g_rr(1e3) = " + fmt(far.g_rr_in_nu) + ", fiber near nu0 ~ (2/3)nu0 (nu-nu0)");
  });
}

// ---------------------------------------------------------------------------
// instanton_family invariants

void check_instanton(Checker& c, Ctx& ctx) {
  const MetricBackground& bg = ctx.bg;

  guarded(c, "instanton/closed-form-vs-ode", true, [&] {
    double worst = 0.0;
    auto check_profile = [&](const InstantonProfile& p) {
      const double r1 = ctx.bg.r_of_nu(5.0, ctx.opt.budget);
      const num::SampledCurve curve =
          integrate_instanton(p, 1e-3, r1, ctx.opt.budget);
      for (std::size_t i = 0; i < curve.size(); ++i) {
        const double nu = curve.value(i, 1);
        worst = std::max(worst, std::abs(curve.value(i, 2) - p.x_of_nu(nu)));
      }
    };
    for (double y0 : {0.1, 1.0, 10.0, 3.0}) check_profile(InstantonProfile::finite(bg, y0));
    check_profile(InstantonProfile::limit(bg));
    c.add("instanton/closed-form-vs-ode", worst <= 1e-6,
          "sup |x_ode - x_closed| = " + fmt(worst), true);
  });

  guarded(c, "instanton/sign-dichotomy", false, [&] {
    bool ok = true;
    for (const InstantonProfile& p :
         {InstantonProfile::finite(bg, 0.5), InstantonProfile::finite(bg, 2.0),
          InstantonProfile::limit(bg)}) {
      for (double nu : log_grid(1.0 + 1e-6, 50.0, 200)) {
        const double x = p.x_of_nu(nu);
        if (!(x > 0.0)) continue;
        const double t2 = bg.t_squared_of_nu(nu);
        const double equilibrium = 1.0 - 2.0 * t2 / (nu * nu);
        if (std::abs(x - equilibrium) <= 1e-9) continue;
        const double slope = p.dx_dr(nu);
        ok &= (x > equilibrium) ? slope < 0.0 : slope > 0.0;
      }
    }
    c.add("instanton/sign-dichotomy", ok,
          "sign of dx/dr matches the side of the equilibrium 1 - 2t^2/nu^2");
  });

  guarded(c, "instanton/positivity-and-bounds", false, [&] {
    bool ok = true;
    for (double y0 : {0.1, 1.0, 3.0, 10.0}) {
      const InstantonProfile p = InstantonProfile::finite(bg, y0);
      for (double nu : log_grid(1.0 + 1e-9, 1e4, 300)) {
        const double x = p.x_of_nu(nu);
        ok &= x > 0.0 && x < 1.0;
      }
    }
    c.add("instanton/positivity-and-bounds", ok, "0 < x < 1 for y0 > 0 members");
  });

  guarded(c, "instanton/family-order", false, [&] {
    const InstantonProfile a = InstantonProfile::finite(bg, 0.5);
    const InstantonProfile b = InstantonProfile::finite(bg, 1.0);
    const InstantonProfile d = InstantonProfile::finite(bg, 5.0);
    const InstantonProfile lim = InstantonProfile::limit(bg);
    bool ok = true;
    for (double nu : log_grid(1.0 + 1e-6, 1e3, 100)) {
      const double xa = a.x_of_nu(nu), xb = b.x_of_nu(nu), xd = d.x_of_nu(nu),
                   xl = lim.x_of_nu(nu);
      ok &= xa < xb && xb < xd && xd < xl;
    }
    c.add("instanton/family-order", ok, "x_{y0} strictly increases with y0 toward x_lim");
  });

  guarded(c, "instanton/asymptote", false, [&] {
    double worst = 0.0;
    for (const InstantonProfile& p :
         {InstantonProfile::finite(bg, 0.1), InstantonProfile::finite(bg, 1.0),
          InstantonProfile::limit(bg)}) {
      worst = std::max(worst, std::abs(p.x_of_nu(1e4) - 0.6));
    }
    c.add("instanton/asymptote", worst <= 1e-6,
          "|x - 3/5| at nu = 1e4 is " + fmt(worst));
  });

  guarded(c, "instanton/triaxial-symmetry", true, [&] {
    const InstantonProfile p = InstantonProfile::finite(bg, 1.0);
    const double nu_start = bg.nu_of_r(0.1, ctx.opt.budget);
    const double x0 = p.x_of_nu(nu_start);
    const num::SampledCurve curve =
        integrate_triaxial(bg, {x0, x0, x0}, 0.1, 3.0, ctx.opt.budget);
    double worst = 0.0;
    for (std::size_t i = 0; i < curve.size(); ++i) {
      const double a1 = curve.value(i, 2), a2 = curve.value(i, 3), a3 = curve.value(i, 4);
      worst = std::max({worst, std::abs(a1 - a2), std::abs(a2 - a3), std::abs(a1 - a3)});
    }
    c.add("instanton/triaxial-symmetry", worst <= 1e-10,
          "symmetric start stays symmetric to " + fmt(worst), true);
  });

  guarded(c, "instanton/blow-up-boundary", false, [&] {
    const BlowupBoundary b1 = blowup_boundary(-1.0, bg, ctx.opt.budget);
    const BlowupBoundary tiny = blowup_boundary(-1e-8, bg, ctx.opt.budget);
    const BlowupBoundary huge = blowup_boundary(-1e8, bg, ctx.opt.budget);
    const bool ok = std::abs(b1.nu_star_sq - 4.0) <= 1e-12 && tiny.nu_star_sq > 1e7 &&
                    std::abs(huge.nu_star_sq - 1.0) <= 1e-7;
    c.add("instanton/blow-up-boundary", ok,
          "nu_star^2(-1) = " + fmt(b1.nu_star_sq) + ", r_star = " + fmt(b1.r_star));
  });
}

// ---------------------------------------------------------------------------
// curvature_energy invariants

void check_energy(Checker& c, Ctx& ctx) {
  const MetricBackground& bg = ctx.bg;

  guarded(c, "energy/decomposition-identity", false, [&] {
    double worst = 0.0;
    for (const InstantonProfile& p :
         {InstantonProfile::finite(bg, 1.0), InstantonProfile::finite(bg, 3.0),
          InstantonProfile::limit(bg)}) {
      for (double nu : {1.05, 1.5, 3.0, 10.0}) {
        const CurvatureComponents parts = curvature_components(p, nu);
        const double t2 = bg.t_squared_of_nu(nu);
        const double assembled = 6.0 * parts.mixed * parts.mixed / t2 +
                                 24.0 * parts.vertical * parts.vertical / (t2 * t2) +
                                 6.0 * parts.horizontal * parts.horizontal /
                                     (nu * nu * nu * nu);
        const double direct = energy_density(p, nu);
        worst = std::max(worst, std::abs(assembled - direct) / direct);
      }
    }
    c.add("energy/decomposition-identity", worst <= 1e-10,
          "component reassembly matches the density to " + fmt(worst) + " (relative)");
  });

  guarded(c, "energy/boundedness-classifier", false, [&] {
    const ZeroSectionProbe fin = zero_section_boundedness(InstantonProfile::finite(bg, 1.0));
    const ZeroSectionProbe lim = zero_section_boundedness(InstantonProfile::limit(bg));
    const ZeroSectionProbe flat = zero_section_boundedness(InstantonProfile::flat(bg));
    const ZeroSectionProbe bad = zero_section_boundedness(PerturbedProfile(bg, 0.5));
    const bool ok = fin.bounded && lim.bounded && flat.bounded && !bad.bounded &&
                    std::abs(bad.slope_vs_t + 4.0) <= 0.2;
    c.add("energy/boundedness-classifier", ok,
          "members bounded; x(nu0)=0.5 diverges with t-exponent " + fmt(bad.slope_vs_t));
  });

  guarded(c, "energy/extension-classification", false, [&] {
    const bool ok =
        classify_extension(InstantonProfile::finite(bg, 0.5)) == ExtensionClass::TrivialBundle &&
        classify_extension(InstantonProfile::limit(bg)) == ExtensionClass::PullbackBundle &&
        classify_extension(InstantonProfile::flat(bg)) == ExtensionClass::FlatBundle &&
        classify_extension(InstantonProfile::finite(bg, -1.0)) == ExtensionClass::LocalOnly;
    c.add("energy/extension-classification", ok,
          "family tags map to trivial/pullback/flat/local-only");
  });

  guarded(c, "energy/two-region-agreement", true, [&] {
    const LimitFitSummary f14 = summarize_extrapolation(ctx.j_y0_sweep, ctx.j14());
    const LimitFitSummary f19 = summarize_extrapolation(ctx.j_y0_sweep, ctx.j19());
    const double tol =
        f14.rms_residual + f19.rms_residual + f14.max_quadrature_error + f19.max_quadrature_error;
    const double gap = std::abs(f14.limit - f19.limit);
    c.add("energy/two-region-agreement", gap <= tol,
          "limits " + fmt(f14.limit) + " vs " + fmt(f19.limit) + " differ by " + fmt(gap) +
              " (allowed " + fmt(tol) + ")",
          true);
  });

  guarded(c, "energy/localization-trend", true, [&] {
    const std::vector<EnergyRegionReport>& reports = ctx.j24();
    bool decreasing = true;
    for (std::size_t i = 1; i < reports.size(); ++i) {
      decreasing &= std::abs(reports[i].value) < std::abs(reports[i - 1].value);
    }
    c.add("energy/localization-trend", decreasing,
          "off-section region mass decreases along the y0 sweep", true);
  });
}

// ---------------------------------------------------------------------------
// bubbling invariants

void check_bubble(Checker& c, Ctx& ctx) {
  guarded(c, "bubble/null-sequence", false, [&] {
    bool ok = true;
    for (double kappa : ctx.bubble_kappas) {
      double prev = std::numeric_limits<double>::infinity();
      for (double y0 : {1e2, 1e4, 1e6, 1e8}) {
        const double lambda = BubbleParams::make(kappa, y0).lambda;
        ok &= lambda < prev;
        prev = lambda;
      }
      ok &= prev < 1e-3;
    }
    c.add("bubble/null-sequence", ok, "lambda = sqrt(kappa/y0) decreases to 0");
  });

  guarded(c, "bubble/derivative-products-bounded", true, [&] {
    bool ok = true;
    std::string detail = "per-kappa max/min of dist_k * y0:";
    for (std::size_t ki = 0; ki < ctx.bubble_kappas.size(); ++ki) {
      for (int k = 0; k <= 2; ++k) {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (std::size_t yi = 0; yi < ctx.bubble_y0s.size(); ++yi) {
          const BubbleReport& rep = ctx.bubbles()[ki * ctx.bubble_y0s.size() + yi];
          const double prod = rep.distances[static_cast<std::size_t>(k)] * rep.params.y0;
          lo = std::min(lo, prod);
          hi = std::max(hi, prod);
        }
        ok &= hi <= 2.0 * lo;
        if (k == 0) detail += " " + fmt(hi / lo);
      }
    }
    c.add("bubble/derivative-products-bounded", ok, detail, true);
  });
}

// ---------------------------------------------------------------------------
// reporting invariants

void check_report(Checker& c, Ctx&) {
  guarded(c, "report/csv-round-trip", false, [&] {
    const double samples[] = {0.0,     -0.0,   1.0,       0.1,   1.0 / 3.0, 1e-300,
                              1e300,   123456.789,        3.141592653589793,
                              5e-324,  -2.5e-7,           6.02214076e23};
    bool ok = true;
    for (double v : samples) {
      const std::string s = report::format_double(v);
      const double back = std::strtod(s.c_str(), nullptr);
      ok &= std::memcmp(&back, &v, sizeof(double)) == 0;
    }
    c.add("report/csv-round-trip", ok,
          "shortest decimal form round-trips binary64 bit-exactly");
  });

  guarded(c, "report/schema-snapshot", false, [&] {
    using namespace report::schema;
    const bool ok =
        joined(metric_columns) ==
            "r,nu,t,t_closed_form,conserved_level,g_rr_in_nu,volume_density" &&
        joined(levelset_columns) == "nu,t,residual" &&
        joined(instanton_columns) == "r,nu,x,dx_dr,energy_density,connection_gap_to_a_inf" &&
        joined(energy_report_columns) == "y0,region_lo2,region_hi2,value,error_estimate" &&
        joined(bubble_columns) ==
            "kappa,y0,lambda,dist0,dist1,dist2,dist0_y0_over_kappa2,dist1_y0_over_kappa2,"
            "dist2_y0_over_kappa2";
    c.add("report/schema-snapshot", ok, "public CSV column sets are unchanged");
  });
}

// ---------------------------------------------------------------------------
// Acceptance criteria (the exit gate; nu0 = 1, Vol* = 1 scales).

std::vector<CheckResult> run_all(const Options& opt, bool skip_determinism);

void acceptance(Checker& c, Ctx& ctx, int n) {
  const MetricBackground& bg = ctx.bg;
  switch (n) {
    case 1:
      guarded(c, "acceptance/01-first-integral", true, [&] {
        const RadialTrajectory& traj = ctx.trajectory();
        double worst = 0.0;
        for (std::size_t i = 0; i < traj.size(); ++i) {
          worst = std::max(worst, std::abs(conserved_level(traj.t(i), traj.nu(i)) - 1.0));
        }
        c.add("acceptance/01-first-integral", worst <= 1e-8,
              "max level drift " + fmt(worst) + " (tol 1e-8) over " +
                  std::to_string(traj.size()) + " samples to nu = 10",
              true);
      });
      break;
    case 2:
      guarded(c, "acceptance/02-closed-form-ode-agreement", true, [&] {
        const RadialTrajectory& traj = ctx.trajectory();
        double worst_t2 = 0.0, worst_r = 0.0;
        for (std::size_t i = 0; i < traj.size(); ++i) {
          worst_t2 = std::max(worst_t2, std::abs(traj.t(i) * traj.t(i) -
                                                 bg.t_squared_of_nu(traj.nu(i))));
        }
        for (std::size_t i = 0; i < traj.size(); ++i) {
          worst_r = std::max(worst_r, std::abs(bg.r_of_nu(traj.nu(i), ctx.opt.budget) -
                                               traj.r(i)));
        }
        c.add("acceptance/02-closed-form-ode-agreement",
              worst_t2 <= 1e-6 && worst_r <= 1e-6,
              "max |t_ode^2 - closed form| = " + fmt(worst_t2) + ", max |r(nu_ode) - r| = " +
                  fmt(worst_r) + " (tol 1e-6)",
              true);
      });
      break;
    case 3:
      guarded(c, "acceptance/03-cone-asymptotics", false, [&] {
        const std::vector<double> nus = log_grid(1e2, 1e4, 64);
        std::vector<double> gaps(nus.size());
        for (std::size_t i = 0; i < nus.size(); ++i) {
          gaps[i] = 0.2 - bg.t_squared_of_nu(nus[i]) / (nus[i] * nus[i]);
        }
        const num::LineFit fit = num::loglog_slope(nus, gaps);
        c.add("acceptance/03-cone-asymptotics", std::abs(fit.slope + 10.0 / 3.0) <= 0.05,
              "approach exponent " + fmt(fit.slope) + " (target -10/3 +- 0.05)");
      });
      break;
    case 4:
      guarded(c, "acceptance/04-series-oracle", false, [&] {
        bool ok = true;
        std::string detail;
        for (double nu0 : {1.0, 1.7}) {
          const MetricBackground b(nu0);
          const SeriesCoefficients s = b.series_coefficients(6);
          const double t3_expected = -2.0 / (3.0 * nu0 * nu0);
          const double nu4_expected = -13.0 / (8.0 * nu0 * nu0 * nu0);
          ok &= std::abs(s.t[3] / t3_expected - 1.0) <= 1e-13;
          ok &= std::abs(s.nu[4] / nu4_expected - 1.0) <= 1e-13;
          if (nu0 == 1.0) {
            detail = "t r^3 coeff " + fmt(s.t[3]) + " (= -2/(3 nu0^2)); nu r^4 coeff " +
                     fmt(s.nu[4]) + " (= -13/(8 nu0^3), denominator power 3)";
          }
        }
        c.add("acceptance/04-series-oracle", ok, detail);
      });
      break;
    case 5:
      guarded(c, "acceptance/05-instanton-ode-residual", false, [&] {
        double worst = 0.0;
        auto residual_sup = [&](const InstantonProfile& p) {
          for (double nu : log_grid(1.0 + 1e-8, 100.0, 2000)) {
            const double t = std::sqrt(bg.t_squared_of_nu(nu));
            const double lhs = p.dx_dr(nu);
            const double rhs = instanton_ode_rhs(p.x_of_nu(nu), t, nu);
            worst = std::max(worst, std::abs(lhs - rhs));
          }
        };
        for (double y0 : {0.1, 1.0, 3.0, 10.0}) residual_sup(InstantonProfile::finite(bg, y0));
        residual_sup(InstantonProfile::limit(bg));
        c.add("acceptance/05-instanton-ode-residual", worst <= 1e-8,
              "sup residual " + fmt(worst) + " (tol 1e-8) from exact nu-derivatives");
      });
      break;
    case 6:
      guarded(c, "acceptance/06-decay-rates", false, [&] {
        const DecayRate lim = decay_rate(InstantonProfile::limit(bg), 1e2, 1e4);
        const DecayRate gen = decay_rate(InstantonProfile::finite(bg, 1.0), 1e2, 1e4);
        const DecayRate fast = decay_rate(InstantonProfile::finite(bg, 3.0), 1e2, 1e4);
        const bool ok = std::abs(lim.exponent + 2.0) <= 0.02 &&
                        std::abs(gen.exponent + 2.0) <= 0.02 &&
                        std::abs(fast.exponent + 10.0 / 3.0) <= 0.02 &&
                        std::abs(lim.coefficient / 0.6 - 1.0) <= 0.02;
        c.add("acceptance/06-decay-rates", ok,
              "exponents: limit " + fmt(lim.exponent) + ", generic " + fmt(gen.exponent) +
                  ", special " + fmt(fast.exponent) + "; limit coefficient " +
                  fmt(lim.coefficient) + " (target 3/5)");
      });
      break;
    case 7:
      guarded(c, "acceptance/07-blow-up", true, [&] {
        const BlowupBoundary boundary = blowup_boundary(-1.0, bg, ctx.opt.budget);
        bool threw = false;
        double last_r = 0.0;
        try {
          integrate_instanton(InstantonProfile::finite(bg, -1.0), 0.01,
                              2.0 * boundary.r_star, ctx.opt.budget);
        } catch (const num::step_limit_exceeded& e) {
          threw = true;
          last_r = e.last_abscissa();
        }
        const bool ok = std::abs(boundary.nu_star_sq - 4.0) <= 1e-10 && threw &&
                        last_r < boundary.r_star;
        c.add("acceptance/07-blow-up", ok,
              "nu_star^2 = " + fmt(boundary.nu_star_sq) + "; integration stopped at r = " +
                  fmt(last_r) + " < r_star = " + fmt(boundary.r_star),
              true);
      });
      break;
    case 8:
      guarded(c, "acceptance/08-concentration-constant", true, [&] {
        const LimitFitSummary f14 = summarize_extrapolation(ctx.j_y0_sweep, ctx.j14());
        const LimitFitSummary f19 = summarize_extrapolation(ctx.j_y0_sweep, ctx.j19());
        const double tol = f14.rms_residual + f19.rms_residual +
                           f14.max_quadrature_error + f19.max_quadrature_error;
        const bool ok = std::abs(f14.limit - 4.0) <= 0.04 &&
                        std::abs(f14.limit - f19.limit) <= tol;
        c.add("acceptance/08-concentration-constant", ok,
              "region [1,4] limit " + fmt(f14.limit) + " (target 4 +- 1%); region [1,9] " +
                  fmt(f19.limit) + " agrees within " + fmt(tol),
              true);
      });
      break;
    case 9:
      guarded(c, "acceptance/09-localization", true, [&] {
        const std::vector<EnergyRegionReport>& reports = ctx.j24();
        const double j_lo = reports.front().value;   // y0 = 1e2
        const double j_hi = reports.back().value;    // y0 = 1e5
        c.add("acceptance/09-localization", std::abs(j_hi) <= std::abs(j_lo) / 500.0,
              "J(1e5) = " + fmt(j_hi) + " vs J(1e2)/500 = " + fmt(j_lo / 500.0), true);
      });
      break;
    case 10:
      guarded(c, "acceptance/10-bubbling-bound", true, [&] {
        double band_lo = std::numeric_limits<double>::infinity(), band_hi = 0.0;
        for (const BubbleReport& rep : ctx.bubbles()) {
          const double norm =
              rep.distances[0] * rep.params.y0 / (rep.params.kappa * rep.params.kappa);
          band_lo = std::min(band_lo, norm);
          band_hi = std::max(band_hi, norm);
        }
        bool deriv_ok = true;
        for (std::size_t ki = 0; ki < ctx.bubble_kappas.size(); ++ki) {
          for (int k = 0; k <= 2; ++k) {
            double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
            for (std::size_t yi = 0; yi < ctx.bubble_y0s.size(); ++yi) {
              const BubbleReport& rep = ctx.bubbles()[ki * ctx.bubble_y0s.size() + yi];
              const double prod = rep.distances[static_cast<std::size_t>(k)] * rep.params.y0;
              lo = std::min(lo, prod);
              hi = std::max(hi, prod);
            }
            deriv_ok &= hi <= 2.0 * lo;
          }
        }
        const double ratio = band_hi / band_lo;
        c.add("acceptance/10-bubbling-bound", ratio <= 2.0 && deriv_ok,
              "dist0*y0/kappa^2 in [" + fmt(band_lo) + ", " + fmt(band_hi) +
                  "], max/min = " + fmt(ratio) +
                  " (required <= 2); derivative products bounded: " +
                  (deriv_ok ? "yes" : "no"),
              true);
      });
      break;
    case 11:
      guarded(c, "acceptance/11-compact-convergence", false, [&] {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (double y0 : {10.0, 1e2, 1e3, 1e4}) {
          const double gap = compact_convergence_gap(y0, bg, {2.0, 4.0});
          const double prod = gap * (1.0 + y0);
          lo = std::min(lo, prod);
          hi = std::max(hi, prod);
        }
        c.add("acceptance/11-compact-convergence", hi <= 2.0 * lo,
              "gap*(1+y0) within [" + fmt(lo) + ", " + fmt(hi) + "] over the sweep");
      });
      break;
    case 12:
      guarded(c, "acceptance/12-removable-singularity-classifier", false, [&] {
        const ZeroSectionProbe fin = zero_section_boundedness(InstantonProfile::finite(bg, 1.0));
        const ZeroSectionProbe lim = zero_section_boundedness(InstantonProfile::limit(bg));
        const PerturbedProfile bad(bg, 0.5);
        const ZeroSectionProbe probe = zero_section_boundedness(bad);
        bool threw_at_section = false;
        try {
          energy_density(bad, 1.0);
        } catch (const unbounded_energy&) {
          threw_at_section = true;
        }
        const bool ok = fin.bounded && lim.bounded && !probe.bounded &&
                        std::abs(probe.slope_vs_t + 4.0) <= 0.2 && threw_at_section;
        c.add("acceptance/12-removable-singularity-classifier", ok,
              "x(nu0) in {0,1} bounded; x(nu0)=0.5 diverges like t^" +
                  fmt(probe.slope_vs_t) + " over two decades");
      });
      break;
    case 13:
      guarded(c, "acceptance/13-tail-measurement", false, [&] {
        const TailExponent coarse = radial_tail_exponent(1.0, bg, 1e2, 1e3, 64);
        const TailExponent fine = radial_tail_exponent(1.0, bg, 1e2, 1e3, 128);
        const double shift = std::abs(coarse.exponent - fine.exponent);
        c.add("acceptance/13-tail-measurement", shift <= 0.1,
              "measured radial integrand exponent " + fmt(fine.exponent) +
                  " on nu in [1e2,1e3] at y0=1 (stability shift " + fmt(shift) +
                  "); reported, not asserted against the global-integrability claim");
      });
      break;
    case 14:
      guarded(c, "acceptance/14-determinism", false, [&] {
        Options sub = ctx.opt;
        sub.only_criterion.reset();
        const std::string a = render_report(run_all(sub, true));
        const std::string b = render_report(run_all(sub, true));
        c.add("acceptance/14-determinism", a == b,
              "two consecutive verification passes render byte-identical reports (" +
                  std::to_string(a.size()) + " bytes)");
      });
      break;
    default:
      throw std::invalid_argument("acceptance criterion index must be 1..14");
  }
}

std::vector<CheckResult> run_all(const Options& opt, bool skip_determinism) {
  opt.budget.validate();
  Checker checker;
  checker.loosened = budget_loosened(opt.budget);
  Ctx ctx;
  ctx.opt = opt;

  if (opt.include_invariants && !opt.only_criterion) {
    check_numerics(checker, ctx);
    check_metric(checker, ctx);
    check_instanton(checker, ctx);
    check_energy(checker, ctx);
    check_bubble(checker, ctx);
    check_report(checker, ctx);
    if (opt.perturb_x0) {
      guarded(checker, "energy/perturbed-profile", false, [&] {
        const PerturbedProfile bad(ctx.bg, *opt.perturb_x0);
        const ZeroSectionProbe probe = zero_section_boundedness(bad);
        const bool off_dichotomy =
            std::abs(*opt.perturb_x0) > 1e-12 && std::abs(*opt.perturb_x0 - 1.0) > 1e-12;
        if (off_dichotomy) {
          checker.add_expected_fail(
              "energy/perturbed-profile", !probe.bounded,
              "injected x(nu0) = " + fmt(*opt.perturb_x0) +
                  " classified Unbounded (t-exponent " + fmt(probe.slope_vs_t) +
                  "), the expected removable-singularity failure");
        } else {
          checker.add("energy/perturbed-profile", probe.bounded,
                      "injected x(nu0) = " + fmt(*opt.perturb_x0) +
                          " lies on the dichotomy and stays bounded");
        }
      });
    }
  }

  if (opt.include_acceptance) {
    for (int n = 1; n <= 14; ++n) {
      if (opt.only_criterion && *opt.only_criterion != n) continue;
      if (n == 14 && skip_determinism) continue;
      acceptance(checker, ctx, n);
    }
  }
  return checker.results;
}

}  // namespace

std::vector<CheckResult> run_checks(const Options& options) {
  return run_all(options, false);
}

std::string render_report(const std::vector<CheckResult>& results) {
  std::size_t name_width = 4;
  for (const auto& r : results) name_width = std::max(name_width, r.name.size());

  std::string out;
  out += "spin7lab verification report\n";
  std::size_t pass = 0, fail = 0, warn = 0, xfail = 0;
  for (const auto& r : results) {
    switch (r.status) {
      case Status::Pass: ++pass; break;
      case Status::Fail: ++fail; break;
      case Status::Warn: ++warn; break;
      case Status::ExpectedFail: ++xfail; break;
    }
    out += r.name;
    out.append(name_width - r.name.size() + 2, ' ');
    out += status_label(r.status);
    out += "  ";
    out += r.detail;
    out += '\n';
  }
  out += "summary: " + std::to_string(results.size()) + " checks, " + std::to_string(pass) +
         " pass, " + std::to_string(fail) + " fail, " + std::to_string(warn) + " warn, " +
         std::to_string(xfail) + " expected-fail\n";
  return out;
}

bool has_failure(const std::vector<CheckResult>& results) {
  for (const auto& r : results) {
    if (r.status == Status::Fail) return true;
  }
  return false;
}

}  // namespace spin7lab::verify
