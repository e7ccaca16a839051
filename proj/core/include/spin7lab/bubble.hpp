#pragma once

#include <vector>

#include "spin7lab/metric.hpp"
#include "spin7lab/numerics.hpp"

// Everything here is a pure function of its arguments; reports for distinct
// parameter tuples may be computed concurrently.

namespace spin7lab {

/// Parameters of one rescaling comparison: the ASD scale kappa, the family
/// parameter y0, and the derived dilation lambda = sqrt(kappa/y0).
struct BubbleParams {
  double kappa;
  double y0;
  double lambda;
  int k_max;

  static BubbleParams make(double kappa, double y0, int k_max = 2);
};

/// Coefficient profile of the standard charge-1 ASD instanton on R^4 at
/// scale kappa: kappa r^2 / (1 + kappa r^2).
double asd_profile(double kappa, double r);

/// Coefficient profile of the pulled-back family member under the scaled
/// exponential map: y0 t^2(lambda r) / (1 + y0 (nu(lambda r)^2 - nu0^2)/3),
/// in the shared coframe sum eta_i (x) T_i on the unit ball.
double rescaled_profile(double y0, const MetricBackground& bg, double lambda, double r,
                        const num::ToleranceBudget& budget = {});

/// Sup-norm distances between the rescaled and ASD profiles on [0, 1], per
/// derivative order 0..k_max. Derivatives come from fourth-order centered
/// finite differences on the uniform grid (one-sided at the endpoints).
struct BubbleReport {
  BubbleParams params;
  std::vector<double> distances;  // index = derivative order
};

BubbleReport bubble_distance(const BubbleParams& params, const MetricBackground& bg,
                             int grid_size = 256, const num::ToleranceBudget& budget = {});

}  // namespace spin7lab
