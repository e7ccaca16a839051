#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace spin7lab::num {

/// Accuracy/effort budget shared by the ODE and quadrature drivers.
/// Defaults leave two orders of headroom below the tightest check
/// tolerances used elsewhere in the library.
struct ToleranceBudget {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  long max_steps = 1'000'000;

  /// Throws std::invalid_argument unless rel_tol, abs_tol > 0 and max_steps >= 1.
  void validate() const;
};

/// Samples of a vector-valued function over a strictly increasing abscissa
/// grid. Values are stored row-major with `arity` entries per abscissa.
struct SampledCurve {
  std::vector<double> abscissae;
  std::vector<double> values;
  std::size_t arity = 1;

  [[nodiscard]] std::size_t size() const { return abscissae.size(); }
  [[nodiscard]] bool empty() const { return abscissae.empty(); }
  [[nodiscard]] double value(std::size_t i, std::size_t component = 0) const {
    return values[i * arity + component];
  }
  [[nodiscard]] std::span<const double> row(std::size_t i) const {
    return {values.data() + i * arity, arity};
  }
  void push_back(double abscissa, std::span<const double> row);
};

/// The right-hand side produced a NaN or infinity.
class non_finite_state : public std::runtime_error {
 public:
  non_finite_state(double abscissa, std::vector<double> state);
  [[nodiscard]] double abscissa() const { return abscissa_; }
  [[nodiscard]] const std::vector<double>& state() const { return state_; }

 private:
  double abscissa_;
  std::vector<double> state_;
};

/// The step budget ran out or the step size underflowed; stiffness or
/// finite-distance blow-up is the usual cause. Carries the last valid
/// state and the partial trajectory up to it.
class step_limit_exceeded : public std::runtime_error {
 public:
  step_limit_exceeded(const std::string& what, double last_abscissa,
                      std::vector<double> last_state, SampledCurve partial);
  [[nodiscard]] double last_abscissa() const { return last_abscissa_; }
  [[nodiscard]] const std::vector<double>& last_state() const { return last_state_; }
  [[nodiscard]] const SampledCurve& partial() const { return partial_; }

 private:
  double last_abscissa_;
  std::vector<double> last_state_;
  SampledCurve partial_;
};

/// Quadrature could not meet the requested tolerance within the budget.
class non_convergent : public std::runtime_error {
 public:
  non_convergent(const std::string& what, double value, double error_estimate);
  [[nodiscard]] double value() const { return value_; }
  [[nodiscard]] double error_estimate() const { return error_estimate_; }

 private:
  double value_;
  double error_estimate_;
};

/// A least-squares fit had no usable degrees of freedom.
class degenerate_fit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using OdeRhs = std::function<void(double, std::span<const double>, std::span<double>)>;

/// Adaptive embedded Runge-Kutta integration (Dormand-Prince 5(4), fixed
/// tableau, PI step-size control). Deterministic: identical inputs give
/// bit-identical trajectories. The returned curve holds the initial point
/// and every accepted step; `max_step > 0` caps the step size (useful for
/// dense output).
///
/// Throws step_limit_exceeded or non_finite_state as documented above.
SampledCurve integrate_ode(const OdeRhs& rhs, std::span<const double> initial,
                           double x_begin, double x_end,
                           const ToleranceBudget& budget = {},
                           double max_step = 0.0);

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

namespace detail {
QuadratureResult adaptive_quadrature_impl(
    const std::function<double(double, double)>& f, double a, double b,
    const ToleranceBudget& budget, std::optional<double> left_singularity);
}  // namespace detail

/// Globally adaptive Gauss-Kronrod 15 quadrature of f over (a, b].
///
/// `b` may be +infinity (mapped through x = a + u/(1-u)). A left endpoint
/// singularity f ~ (x-a)^p with p in (-1,0) is regularized through
/// x = a + u^{1/(1+p)} when `left_singularity` = p is given.
///
/// The integrand may be callable either as f(x) or as f(x, dx) where
/// dx = x - a is exact under the singular substitution; use the two-argument
/// form when f itself needs the offset to full precision near the endpoint.
template <typename F>
QuadratureResult adaptive_quadrature(F&& f, double a, double b,
                                     const ToleranceBudget& budget = {},
                                     std::optional<double> left_singularity = std::nullopt) {
  if constexpr (std::is_invocable_r_v<double, F, double, double>) {
    return detail::adaptive_quadrature_impl(
        std::function<double(double, double)>(std::forward<F>(f)), a, b, budget,
        left_singularity);
  } else {
    static_assert(std::is_invocable_r_v<double, F, double>,
                  "integrand must be callable as f(x) or f(x, x_minus_a)");
    auto g = [fn = std::forward<F>(f)](double x, double) { return fn(x); };
    return detail::adaptive_quadrature_impl(std::function<double(double, double)>(g),
                                            a, b, budget, left_singularity);
  }
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS misfit
};

/// Least-squares line through (log x_i, log y_i). Requires >= 3 samples,
/// all strictly positive. Throws degenerate_fit when the log-abscissae
/// are all equal.
LineFit loglog_slope(std::span<const double> abscissae, std::span<const double> values);
LineFit loglog_slope(const SampledCurve& curve, std::size_t component = 0);

struct LimitFit {
  double limit = 0.0;
  double coefficient = 0.0;
};

/// Least-squares fit of the model value = L + c/parameter; returns (L, c).
/// Requires >= 2 pairs with distinct parameters, else degenerate_fit.
LimitFit extrapolate_limit(std::span<const double> parameters,
                           std::span<const double> values);

}  // namespace spin7lab::num
