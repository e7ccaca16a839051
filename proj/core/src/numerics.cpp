#include "spin7lab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace spin7lab::num {

void ToleranceBudget::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw std::invalid_argument("ToleranceBudget: tolerances must be strictly positive");
  }
  if (max_steps < 1) {
    throw std::invalid_argument("ToleranceBudget: max_steps must be >= 1");
  }
}

void SampledCurve::push_back(double abscissa, std::span<const double> row) {
  abscissae.push_back(abscissa);
  values.insert(values.end(), row.begin(), row.end());
}

non_finite_state::non_finite_state(double abscissa, std::vector<double> state)
    : std::runtime_error("ode right-hand side returned a non-finite value at x = " +
                         std::to_string(abscissa)),
      abscissa_(abscissa),
      state_(std::move(state)) {}

step_limit_exceeded::step_limit_exceeded(const std::string& what, double last_abscissa,
                                         std::vector<double> last_state,
                                         SampledCurve partial)
    : std::runtime_error(what),
      last_abscissa_(last_abscissa),
      last_state_(std::move(last_state)),
      partial_(std::move(partial)) {}

non_convergent::non_convergent(const std::string& what, double value,
                               double error_estimate)
    : std::runtime_error(what), value_(value), error_estimate_(error_estimate) {}

namespace {

bool all_finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

// Dormand-Prince 5(4) tableau (the classic DOPRI5 coefficients).
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
// Difference between the 5th order weights and the embedded 4th order ones.
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

struct Dopri5Workspace {
  std::vector<double> y, y_new, err;
  std::vector<double> k1, k2, k3, k4, k5, k6, k7, stage;
  explicit Dopri5Workspace(std::size_t n)
      : y(n), y_new(n), err(n), k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n),
        stage(n) {}
};

double error_norm(std::span<const double> err, std::span<const double> y0,
                  std::span<const double> y1, const ToleranceBudget& budget) {
  double sum = 0.0;
  for (std::size_t i = 0; i < err.size(); ++i) {
    const double scale =
        budget.abs_tol + budget.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double q = err[i] / scale;
    sum += q * q;
  }
  return std::sqrt(sum / static_cast<double>(err.size()));
}

// Hairer's starting step heuristic, specialized to this tableau's order.
double initial_step(const OdeRhs& rhs, double x0, std::span<const double> y0,
                    std::span<const double> f0, double direction, double span,
                    const ToleranceBudget& budget, Dopri5Workspace& w) {
  const std::size_t n = y0.size();
  double dnf = 0.0, dny = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sk = budget.abs_tol + budget.rel_tol * std::abs(y0[i]);
    dnf += (f0[i] / sk) * (f0[i] / sk);
    dny += (y0[i] / sk) * (y0[i] / sk);
  }
  double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(dny / dnf);
  h = std::min(h, span);
  h *= direction;

  for (std::size_t i = 0; i < n; ++i) w.stage[i] = y0[i] + h * f0[i];
  rhs(x0 + h, w.stage, w.k2);
  if (!all_finite(w.k2)) return direction * std::min(std::abs(h), span) * 1e-3;
  double der2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sk = budget.abs_tol + budget.rel_tol * std::abs(y0[i]);
    const double d = (w.k2[i] - f0[i]) / sk;
    der2 += d * d;
  }
  der2 = std::sqrt(der2) / std::abs(h);

  const double der12 = std::max(der2, std::sqrt(dnf));
  double h1 = (der12 <= 1e-15)
                  ? std::max(1e-6, std::abs(h) * 1e-3)
                  : std::pow(0.01 / der12, 1.0 / 5.0);
  return direction * std::min({100.0 * std::abs(h), h1, span});
}

}  // namespace

SampledCurve integrate_ode(const OdeRhs& rhs, std::span<const double> initial,
                           double x_begin, double x_end, const ToleranceBudget& budget,
                           double max_step) {
  budget.validate();
  if (initial.empty()) throw std::invalid_argument("integrate_ode: empty state");
  if (!(x_end != x_begin) || !std::isfinite(x_begin) || !std::isfinite(x_end)) {
    throw std::invalid_argument("integrate_ode: span must be nondegenerate and finite");
  }
  if (!all_finite(initial)) {
    throw std::invalid_argument("integrate_ode: non-finite initial state");
  }

  const std::size_t n = initial.size();
  const double direction = (x_end > x_begin) ? 1.0 : -1.0;
  const double span = std::abs(x_end - x_begin);
  Dopri5Workspace w(n);
  std::copy(initial.begin(), initial.end(), w.y.begin());

  SampledCurve curve;
  curve.arity = n;
  curve.push_back(x_begin, w.y);

  double x = x_begin;
  rhs(x, w.y, w.k1);
  if (!all_finite(w.k1)) throw non_finite_state(x, w.y);

  double h = initial_step(rhs, x, w.y, w.k1, direction, span, budget, w);
  h = direction * std::min(std::abs(h), span / 50.0);
  if (max_step > 0.0) h = direction * std::min(std::abs(h), max_step);

  // Error-per-unit-step control: a step of size h may spend at most the
  // fraction |h|/span of the budget, so the accumulated drift over the whole
  // span stays within the requested tolerances.
  constexpr double safety = 0.9;
  constexpr double beta = 0.04;
  constexpr double expo1 = 0.25 - beta * 0.75;
  constexpr double fac_min = 0.2, fac_max = 10.0;
  double fac_old = 1e-4;
  bool last_rejected = false;

  long steps = 0;
  while (direction * (x_end - x) > 0.0) {
    if (++steps > budget.max_steps) {
      throw step_limit_exceeded("integrate_ode: step budget exhausted at x = " +
                                    std::to_string(x),
                                x, w.y, std::move(curve));
    }
    const double h_floor =
        32.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(x), span);
    if (std::abs(h) <= h_floor) {
      throw step_limit_exceeded(
          "integrate_ode: step size underflow (blow-up or stiffness suspected) at x = " +
              std::to_string(x),
          x, w.y, std::move(curve));
    }
    if (direction * (x + h - x_end) > 0.0) h = x_end - x;

    auto do_stage = [&](double frac, std::span<double> out,
                        std::initializer_list<std::pair<const std::vector<double>*, double>>
                            terms) {
      for (std::size_t i = 0; i < n; ++i) {
        double acc = w.y[i];
        for (const auto& [k, coef] : terms) acc += h * coef * (*k)[i];
        w.stage[i] = acc;
      }
      rhs(x + frac * h, w.stage, out);
    };

    do_stage(c2, w.k2, {{&w.k1, a21}});
    do_stage(c3, w.k3, {{&w.k1, a31}, {&w.k2, a32}});
    do_stage(c4, w.k4, {{&w.k1, a41}, {&w.k2, a42}, {&w.k3, a43}});
    do_stage(c5, w.k5, {{&w.k1, a51}, {&w.k2, a52}, {&w.k3, a53}, {&w.k4, a54}});
    do_stage(1.0, w.k6,
             {{&w.k1, a61}, {&w.k2, a62}, {&w.k3, a63}, {&w.k4, a64}, {&w.k5, a65}});

    bool stage_finite = all_finite(w.k2) && all_finite(w.k3) && all_finite(w.k4) &&
                        all_finite(w.k5) && all_finite(w.k6);
    double err = std::numeric_limits<double>::infinity();
    if (stage_finite) {
      for (std::size_t i = 0; i < n; ++i) {
        w.y_new[i] = w.y[i] + h * (a71 * w.k1[i] + a73 * w.k3[i] + a74 * w.k4[i] +
                                   a75 * w.k5[i] + a76 * w.k6[i]);
      }
      rhs(x + h, w.y_new, w.k7);
      stage_finite = all_finite(w.y_new) && all_finite(w.k7);
      if (stage_finite) {
        for (std::size_t i = 0; i < n; ++i) {
          w.err[i] = h * (e1 * w.k1[i] + e3 * w.k3[i] + e4 * w.k4[i] + e5 * w.k5[i] +
                          e6 * w.k6[i] + e7 * w.k7[i]);
        }
        err = error_norm(w.err, w.y, w.y_new, budget) * (span / std::abs(h));
      }
    }

    if (err <= 1.0) {
      double fac = std::pow(err, expo1) / std::pow(fac_old, beta);
      fac = std::clamp(fac / safety, 1.0 / fac_max, 1.0 / fac_min);
      fac_old = std::max(err, 1e-4);
      x += h;
      std::swap(w.y, w.y_new);
      std::swap(w.k1, w.k7);  // first-same-as-last
      curve.push_back(x, w.y);

      double h_new = h / fac;
      if (last_rejected) h_new = direction * std::min(std::abs(h_new), std::abs(h));
      if (max_step > 0.0) h_new = direction * std::min(std::abs(h_new), max_step);
      h = h_new;
      last_rejected = false;
    } else {
      // Non-finite trial stages are treated like a wildly failed step.
      const double shrink =
          stage_finite ? std::max(1.0 / fac_max, safety / std::pow(err, expo1)) : 0.25;
      h *= std::min(shrink, 0.9);
      last_rejected = true;
    }
  }
  return curve;
}

// ---------------------------------------------------------------------------
// Adaptive Gauss-Kronrod 15 quadrature.

namespace {

// 15-point Kronrod abscissae/weights with the embedded 7-point Gauss rule.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526, 0.949107912342758524526189684048,
    0.864864423359769072789712788641, 0.741531185599394439863864773281,
    0.586087235467691130294144838259, 0.405845151377397166906606412077,
    0.207784955007898467600689403773, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008059, 0.063092092629978553290700663189,
    0.104790010322250183839876322541, 0.140653259715525918745189590510,
    0.169004726639267902826583426599, 0.190350578064785409913256402421,
    0.204432940075298892414161999234, 0.209482141084727828012999174892};
constexpr double kWg[4] = {
    0.129484966168869693270611432679, 0.279705391489276667901467771424,
    0.381830050505118944950369775489, 0.417959183673469387755102040816};

struct PanelResult {
  double value;
  double error;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double fc = f(center);
  double resg = kWg[3] * fc;
  double resk = kWgk[7] * fc;
  double resabs = std::abs(resk);
  double fv1[8], fv2[8];
  fv1[7] = fv2[7] = fc;

  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv1[j] = f1;
    fv2[j] = f2;
    const double fsum = f1 + f2;
    if (j % 2 == 1) resg += kWg[j / 2] * fsum;
    resk += kWgk[j] * fsum;
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
  }

  const double reskh = resk * 0.5;
  double resasc = kWgk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
  }

  const double value = resk * half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  const double eps = std::numeric_limits<double>::epsilon();
  const double tiny = std::numeric_limits<double>::min();
  if (resabs > tiny / (50.0 * eps)) err = std::max(err, 50.0 * eps * resabs);
  return {value, err};
}

struct Segment {
  double a, b;
  double value, error;
  long id;  // deterministic tie-break
};

struct SegmentWorse {
  bool operator()(const Segment& lhs, const Segment& rhs) const {
    if (lhs.error != rhs.error) return lhs.error < rhs.error;
    return lhs.id > rhs.id;
  }
};

QuadratureResult adaptive_on_unit(const std::function<double(double)>& g, double lo,
                                  double hi, const ToleranceBudget& budget) {
  long evals = 0;
  long next_id = 0;
  auto eval_panel = [&](double a, double b) {
    evals += 15;
    PanelResult p = gk15(g, a, b);
    return Segment{a, b, p.value, p.error, next_id++};
  };

  std::priority_queue<Segment, std::vector<Segment>, SegmentWorse> heap;
  Segment first = eval_panel(lo, hi);
  double total_value = first.value;
  double total_error = first.error;
  heap.push(first);

  const double eps = std::numeric_limits<double>::epsilon();
  while (true) {
    const double tol = std::max(budget.abs_tol, budget.rel_tol * std::abs(total_value));
    if (total_error <= tol) break;
    if (evals >= budget.max_steps) {
      throw non_convergent("adaptive_quadrature: tolerance not met within max_steps",
                           total_value, total_error);
    }
    Segment worst = heap.top();
    const double width_floor = 128.0 * eps * std::max({std::abs(worst.a), std::abs(worst.b), 1.0});
    if (worst.b - worst.a <= width_floor) {
      // Subdividing further only produces roundoff noise.
      throw non_convergent("adaptive_quadrature: roundoff-limited before tolerance",
                           total_value, total_error);
    }
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Segment left = eval_panel(worst.a, mid);
    Segment right = eval_panel(mid, worst.b);
    total_value += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  return {total_value, total_error};
}

}  // namespace

namespace detail {

QuadratureResult adaptive_quadrature_impl(const std::function<double(double, double)>& f,
                                          double a, double b,
                                          const ToleranceBudget& budget,
                                          std::optional<double> left_singularity) {
  budget.validate();
  if (!std::isfinite(a)) throw std::invalid_argument("adaptive_quadrature: a must be finite");
  if (std::isnan(b) || b < a) throw std::invalid_argument("adaptive_quadrature: need b >= a");
  if (left_singularity) {
    const double p = *left_singularity;
    if (!(p > -1.0 && p < 0.0)) {
      throw std::invalid_argument("adaptive_quadrature: left_singularity must lie in (-1, 0)");
    }
  }
  if (b == a) return {0.0, 0.0};

  const bool infinite = std::isinf(b);

  // Both transforms at once: peel off a unit-length singular piece first.
  if (left_singularity && infinite) {
    ToleranceBudget half = budget;
    half.abs_tol = 0.5 * budget.abs_tol;
    half.rel_tol = 0.5 * budget.rel_tol;
    QuadratureResult head = adaptive_quadrature_impl(f, a, a + 1.0, half, left_singularity);
    QuadratureResult tail = adaptive_quadrature_impl(f, a + 1.0, b, half, std::nullopt);
    return {head.value + tail.value, head.error_estimate + tail.error_estimate};
  }

  if (left_singularity) {
    const double p = *left_singularity;
    const double q = 1.0 / (1.0 + p);
    const double u_max = std::pow(b - a, 1.0 + p);
    auto g = [&f, a, q](double u) {
      const double offset = std::pow(u, q);
      return f(a + offset, offset) * q * std::pow(u, q - 1.0);
    };
    return adaptive_on_unit(g, 0.0, u_max, budget);
  }

  if (infinite) {
    auto g = [&f, a](double u) {
      const double one_minus = 1.0 - u;
      const double offset = u / one_minus;
      return f(a + offset, offset) / (one_minus * one_minus);
    };
    return adaptive_on_unit(g, 0.0, 1.0, budget);
  }

  auto g = [&f, a](double x) { return f(x, x - a); };
  return adaptive_on_unit(g, a, b, budget);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Least-squares fits.

namespace {

LineFit least_squares_line(std::span<const double> xs, std::span<const double> ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = n * sxx - sx * sx;
  if (!(std::abs(denom) > 0.0)) {
    throw degenerate_fit("loglog_slope: abscissae are all equal after log");
  }
  LineFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

}  // namespace

LineFit loglog_slope(std::span<const double> abscissae, std::span<const double> values) {
  if (abscissae.size() != values.size()) {
    throw std::invalid_argument("loglog_slope: length mismatch");
  }
  if (abscissae.size() < 3) {
    throw std::invalid_argument("loglog_slope: need at least 3 samples");
  }
  std::vector<double> lx(abscissae.size()), ly(values.size());
  for (std::size_t i = 0; i < abscissae.size(); ++i) {
    if (!(abscissae[i] > 0.0) || !(values[i] > 0.0)) {
      throw std::invalid_argument("loglog_slope: samples must be strictly positive");
    }
    lx[i] = std::log(abscissae[i]);
    ly[i] = std::log(values[i]);
  }
  const auto [lo, hi] = std::minmax_element(lx.begin(), lx.end());
  if (*lo == *hi) {
    throw degenerate_fit("loglog_slope: abscissae are all equal after log");
  }
  return least_squares_line(lx, ly);
}

LineFit loglog_slope(const SampledCurve& curve, std::size_t component) {
  if (component >= curve.arity) {
    throw std::invalid_argument("loglog_slope: component out of range");
  }
  std::vector<double> ys(curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) ys[i] = curve.value(i, component);
  return loglog_slope(curve.abscissae, ys);
}

LimitFit extrapolate_limit(std::span<const double> parameters,
                           std::span<const double> values) {
  if (parameters.size() != values.size()) {
    throw std::invalid_argument("extrapolate_limit: length mismatch");
  }
  if (parameters.size() < 2) {
    throw std::invalid_argument("extrapolate_limit: need at least 2 pairs");
  }
  // Design matrix [1, 1/p]; normal equations of the 2-parameter model.
  const double n = static_cast<double>(parameters.size());
  double su = 0.0, suu = 0.0, sv = 0.0, suv = 0.0;
  for (std::size_t i = 0; i < parameters.size(); ++i) {
    if (!(parameters[i] > 0.0)) {
      throw std::invalid_argument("extrapolate_limit: parameters must be positive");
    }
    const double u = 1.0 / parameters[i];
    su += u;
    suu += u * u;
    sv += values[i];
    suv += u * values[i];
  }
  const auto [p_lo, p_hi] = std::minmax_element(parameters.begin(), parameters.end());
  if (*p_lo == *p_hi) {
    throw degenerate_fit("extrapolate_limit: parameters are not distinct");
  }
  const double denom = n * suu - su * su;
  if (!(std::abs(denom) > 0.0)) {
    throw degenerate_fit("extrapolate_limit: parameters are not distinct");
  }
  LimitFit fit;
  fit.coefficient = (n * suv - su * sv) / denom;
  fit.limit = (sv - fit.coefficient * su) / n;
  return fit;
}

}  // namespace spin7lab::num
