#pragma once

#include <span>

namespace vdsim::stats {

struct TTestResult {
  double t = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
  double mean_a = 0.0;
  double mean_b = 0.0;
};

// Welch unequal-variance two-sample t test of mean(a) - mean(b), using
// sample variances and Welch-Satterthwaite degrees of freedom. Throws
// EstimationError when a sample has fewer than two values or both samples
// have zero variance.
TTestResult welch_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace vdsim::stats
