#include "spin7lab/bubble.hpp"

#include <cmath>
#include <stdexcept>

namespace spin7lab {

BubbleParams BubbleParams::make(double kappa, double y0, int k_max) {
  if (!(kappa > 0.0) || !(y0 > 0.0)) {
    throw std::invalid_argument("BubbleParams: kappa and y0 must be positive");
  }
  if (k_max < 0) throw std::invalid_argument("BubbleParams: k_max must be >= 0");
  return {kappa, y0, std::sqrt(kappa / y0), k_max};
}

double asd_profile(double kappa, double r) {
  if (!(kappa > 0.0)) throw std::invalid_argument("asd_profile: kappa must be positive");
  if (!(r >= 0.0)) throw std::invalid_argument("asd_profile: r must be >= 0");
  const double q = kappa * r * r;
  return q / (1.0 + q);
}

double rescaled_profile(double y0, const MetricBackground& bg, double lambda, double r,
                        const num::ToleranceBudget& budget) {
  if (!(y0 > 0.0) || !(lambda > 0.0)) {
    throw std::invalid_argument("rescaled_profile: y0 and lambda must be positive");
  }
  const double rho = lambda * r;
  if (rho == 0.0) return 0.0;
  const double nu = bg.nu_of_r(rho, budget);
  const double w = bg.w_of_nu(nu);  // = 6 * int_0^rho t ds
  return y0 * bg.t_squared_of_nu(nu) / (1.0 + y0 * w / 3.0);
}

namespace {

// Fourth-order first and second derivatives on a uniform grid; one-sided
// stencils cover the two points nearest each end.
double d1(const std::vector<double>& f, std::size_t i, double h) {
  const std::size_t n = f.size();
  if (i >= 2 && i + 2 < n) {
    return (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) / (12.0 * h);
  }
  if (i < 2) {
    return (-25.0 * f[i] + 48.0 * f[i + 1] - 36.0 * f[i + 2] + 16.0 * f[i + 3] -
            3.0 * f[i + 4]) /
           (12.0 * h);
  }
  return (25.0 * f[i] - 48.0 * f[i - 1] + 36.0 * f[i - 2] - 16.0 * f[i - 3] +
          3.0 * f[i - 4]) /
         (12.0 * h);
}

double d2(const std::vector<double>& f, std::size_t i, double h) {
  const std::size_t n = f.size();
  const double h2 = h * h;
  if (i >= 2 && i + 2 < n) {
    return (-f[i + 2] + 16.0 * f[i + 1] - 30.0 * f[i] + 16.0 * f[i - 1] - f[i - 2]) /
           (12.0 * h2);
  }
  if (i < 2) {
    return (45.0 * f[i] - 154.0 * f[i + 1] + 214.0 * f[i + 2] - 156.0 * f[i + 3] +
            61.0 * f[i + 4] - 10.0 * f[i + 5]) /
           (12.0 * h2);
  }
  return (45.0 * f[i] - 154.0 * f[i - 1] + 214.0 * f[i - 2] - 156.0 * f[i - 3] +
          61.0 * f[i - 4] - 10.0 * f[i - 5]) /
         (12.0 * h2);
}

}  // namespace

BubbleReport bubble_distance(const BubbleParams& params, const MetricBackground& bg,
                             int grid_size, const num::ToleranceBudget& budget) {
  if (grid_size < 64) throw std::invalid_argument("bubble_distance: grid_size must be >= 64");
  if (params.k_max > 2) throw std::invalid_argument("bubble_distance: k_max > 2 unsupported");

  const std::size_t n = static_cast<std::size_t>(grid_size) + 1;
  const double h = 1.0 / static_cast<double>(grid_size);
  std::vector<double> diff(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double r = static_cast<double>(j) * h;
    diff[j] = rescaled_profile(params.y0, bg, params.lambda, r, budget) -
              asd_profile(params.kappa, r);
  }

  BubbleReport report{params, std::vector<double>(static_cast<std::size_t>(params.k_max) + 1, 0.0)};
  for (std::size_t j = 0; j < n; ++j) {
    report.distances[0] = std::max(report.distances[0], std::abs(diff[j]));
    if (params.k_max >= 1) {
      report.distances[1] = std::max(report.distances[1], std::abs(d1(diff, j, h)));
    }
    if (params.k_max >= 2) {
      report.distances[2] = std::max(report.distances[2], std::abs(d2(diff, j, h)));
    }
  }
  return report;
}

}  // namespace spin7lab
