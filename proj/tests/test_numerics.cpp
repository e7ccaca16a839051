#include <cmath>
#include <limits>

#include "doctest.h"
#include "spin7lab/numerics.hpp"

using namespace spin7lab;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("tolerance budget validation") {
  num::ToleranceBudget bad;
  bad.rel_tol = 0.0;
  CHECK_THROWS_AS((void)bad.validate(), std::invalid_argument);
  bad = {};
  bad.max_steps = 0;
  CHECK_THROWS_AS((void)bad.validate(), std::invalid_argument);
  CHECK_NOTHROW(num::ToleranceBudget{}.validate());
}

TEST_CASE("integrate_ode reproduces the exponential") {
  auto rhs = [](double, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[0];
  };
  const double y0[] = {1.0};
  const num::SampledCurve curve = num::integrate_ode(rhs, y0, 0.0, 1.0);
  CHECK(curve.abscissae.front() == 0.0);
  CHECK(curve.abscissae.back() == 1.0);
  CHECK(curve.values.back() == doctest::Approx(std::exp(1.0)).epsilon(1e-10));
}

TEST_CASE("integrate_ode keeps a constant solution constant") {
  auto rhs = [](double, std::span<const double>, std::span<double> dy) { dy[0] = 0.0; };
  const double y0[] = {3.75};
  const num::SampledCurve curve = num::integrate_ode(rhs, y0, 0.0, 2.0);
  for (std::size_t i = 0; i < curve.size(); ++i) CHECK(curve.value(i) == 3.75);
}

TEST_CASE("integrate_ode reports finite-time blow-up as a step limit") {
  // y' = -2 y^2, y(0) = -1 has the closed form y = -1/(1 - 2r): pole at 1/2.
  auto rhs = [](double, std::span<const double> y, std::span<double> dy) {
    dy[0] = -2.0 * y[0] * y[0];
  };
  const double y0[] = {-1.0};
  bool threw = false;
  try {
    num::integrate_ode(rhs, y0, 0.0, 1.0);
  } catch (const num::step_limit_exceeded& e) {
    threw = true;
    CHECK(e.last_abscissa() > 0.45);
    CHECK(e.last_abscissa() <= 0.5);
    const num::SampledCurve& partial = e.partial();
    REQUIRE(partial.size() > 4);
    for (std::size_t i = 0; i < partial.size(); ++i) {
      const double r = partial.abscissae[i];
      if (r > 0.45) break;
      const double exact = -1.0 / (1.0 - 2.0 * r);
      CHECK(partial.value(i) == doctest::Approx(exact).epsilon(1e-7));
    }
  }
  CHECK(threw);
}

TEST_CASE("integrate_ode rejects bad input") {
  auto rhs = [](double, std::span<const double> y, std::span<double> dy) { dy[0] = y[0]; };
  const double y0[] = {1.0};
  CHECK_THROWS_AS((void)num::integrate_ode(rhs, y0, 0.0, 0.0), std::invalid_argument);
  auto nan_rhs = [](double, std::span<const double>, std::span<double> dy) {
    dy[0] = std::numeric_limits<double>::quiet_NaN();
  };
  CHECK_THROWS_AS((void)num::integrate_ode(nan_rhs, y0, 0.0, 1.0), num::non_finite_state);
}

TEST_CASE("adaptive quadrature on plain, singular and infinite ranges") {
  auto lin = [](double x) { return x; };
  CHECK(num::adaptive_quadrature(lin, 0.0, 1.0).value == doctest::Approx(0.5).epsilon(1e-12));

  auto inv_sqrt = [](double x) { return 1.0 / std::sqrt(x); };
  const num::QuadratureResult sing = num::adaptive_quadrature(inv_sqrt, 0.0, 1.0, {}, -0.5);
  CHECK(sing.value == doctest::Approx(2.0).epsilon(1e-10));

  auto decay = [](double x) { return std::exp(-x); };
  const num::QuadratureResult tail = num::adaptive_quadrature(decay, 0.0, kInf);
  CHECK(tail.value == doctest::Approx(1.0).epsilon(1e-9));

  // Singular endpoint and infinite tail at once.
  auto both = [](double x) { return std::exp(-x) / std::sqrt(x); };
  const num::QuadratureResult g = num::adaptive_quadrature(both, 0.0, kInf, {}, -0.5);
  CHECK(g.value == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-9));
}

TEST_CASE("adaptive quadrature is additive across split points") {
  auto f = [](double x) { return std::sin(5.0 * x) * std::exp(-0.5 * x); };
  const num::QuadratureResult whole = num::adaptive_quadrature(f, 0.0, 3.0);
  for (double m : {0.1, 1.0, 2.9}) {
    const num::QuadratureResult a = num::adaptive_quadrature(f, 0.0, m);
    const num::QuadratureResult b = num::adaptive_quadrature(f, m, 3.0);
    const double gap = std::abs(whole.value - a.value - b.value);
    CHECK(gap <= whole.error_estimate + a.error_estimate + b.error_estimate + 1e-13);
  }
}

TEST_CASE("adaptive quadrature passes an exact offset to two-argument integrands") {
  // Near x = a the naive x - a loses every significant digit; the quadrature
  // hands the transformed offset through exactly.
  const double a = 1.0;
  auto f = [a](double x, double dx) {
    CHECK(dx >= 0.0);
    if (dx == 0.0) return 0.0;
    CHECK(x >= a);
    return 1.0 / std::sqrt(dx);
  };
  const num::QuadratureResult q = num::adaptive_quadrature(f, a, 2.0, {}, -0.5);
  CHECK(q.value == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("adaptive quadrature argument validation") {
  auto f = [](double x) { return x; };
  CHECK_THROWS_AS((void)num::adaptive_quadrature(f, 0.0, 1.0, {}, -1.5), std::invalid_argument);
  CHECK_THROWS_AS((void)num::adaptive_quadrature(f, 0.0, 1.0, {}, 0.5), std::invalid_argument);
  CHECK_THROWS_AS((void)num::adaptive_quadrature(f, 1.0, 0.0), std::invalid_argument);
  CHECK(num::adaptive_quadrature(f, 1.0, 1.0).value == 0.0);
}

TEST_CASE("adaptive quadrature reports non-convergence within the budget") {
  num::ToleranceBudget tiny;
  tiny.rel_tol = 1e-15;
  tiny.abs_tol = 1e-300;
  tiny.max_steps = 60;  // a couple of panels only
  auto f = [](double x) { return std::sin(50.0 * x) * std::sin(51.0 * x); };
  CHECK_THROWS_AS((void)num::adaptive_quadrature(f, 0.0, 20.0, tiny), num::non_convergent);
}

TEST_CASE("loglog_slope recovers pure power laws exactly") {
  std::vector<double> xs, y3, ym2, ym103;
  for (int i = 0; i < 24; ++i) {
    const double x = 0.2 * std::pow(1.4, i);
    xs.push_back(x);
    y3.push_back(x * x * x);
    ym2.push_back(7.0 / (x * x));
    ym103.push_back(std::pow(x, -10.0 / 3.0));
  }
  const num::LineFit f3 = num::loglog_slope(xs, y3);
  CHECK(f3.slope == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(f3.residual < 1e-12);
  const num::LineFit f2 = num::loglog_slope(xs, ym2);
  CHECK(f2.slope == doctest::Approx(-2.0).epsilon(1e-13));
  CHECK(f2.intercept == doctest::Approx(std::log(7.0)).epsilon(1e-13));
  CHECK(num::loglog_slope(xs, ym103).slope == doctest::Approx(-10.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("loglog_slope rejects degenerate or invalid samples") {
  const std::vector<double> same{2.0, 2.0, 2.0};
  const std::vector<double> ys{1.0, 2.0, 3.0};
  CHECK_THROWS_AS((void)num::loglog_slope(same, ys), num::degenerate_fit);
  const std::vector<double> two{1.0, 2.0};
  CHECK_THROWS_AS((void)num::loglog_slope(two, two), std::invalid_argument);
  const std::vector<double> neg{1.0, -2.0, 3.0};
  CHECK_THROWS_AS((void)num::loglog_slope(neg, ys), std::invalid_argument);
}

TEST_CASE("extrapolate_limit fits the one-over-parameter model") {
  const std::vector<double> ps{10.0, 100.0, 1000.0};
  const std::vector<double> vs{4.1, 4.01, 4.001};
  const num::LimitFit fit = num::extrapolate_limit(ps, vs);
  CHECK(fit.limit == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(fit.coefficient == doctest::Approx(1.0).epsilon(1e-10));

  const std::vector<double> cv{5.0, 5.0, 5.0};
  const num::LimitFit cfit = num::extrapolate_limit(ps, cv);
  CHECK(cfit.limit == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(cfit.coefficient == doctest::Approx(0.0));

  const std::vector<double> p1{3.0, 3.0};
  const std::vector<double> v1{5.0, 6.0};
  CHECK_THROWS_AS((void)num::extrapolate_limit(p1, v1), num::degenerate_fit);
}

TEST_CASE("numeric kernels are bitwise deterministic") {
  auto rhs = [](double, std::span<const double> y, std::span<double> dy) {
    dy[0] = std::sin(y[0]) - 0.25 * y[0];
  };
  const double y0[] = {0.7};
  const num::SampledCurve a = num::integrate_ode(rhs, y0, 0.0, 4.0);
  const num::SampledCurve b = num::integrate_ode(rhs, y0, 0.0, 4.0);
  CHECK(a.abscissae == b.abscissae);
  CHECK(a.values == b.values);

  auto f = [](double x) { return std::cos(3.0 * x) / (1.0 + x); };
  const num::QuadratureResult qa = num::adaptive_quadrature(f, 0.0, 5.0);
  const num::QuadratureResult qb = num::adaptive_quadrature(f, 0.0, 5.0);
  CHECK(qa.value == qb.value);
  CHECK(qa.error_estimate == qb.error_estimate);
}
