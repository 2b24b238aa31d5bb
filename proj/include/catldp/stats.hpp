#pragma once

#include <cstdint>
#include <vector>

namespace catldp {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

// Exact (Clopper-Pearson) two-sided binomial interval via beta quantiles.
Interval clopper_pearson(std::int64_t hits, std::int64_t n, double confidence = 0.95);

// Chi-square goodness-of-fit p-value of an observed histogram (counts[k] =
// occurrences of value k, tail lumped by the caller into the last bin is
// fine) against Poisson(mean). Adjacent bins are pooled until each expected
// count reaches 5; remaining upper tail forms one bin.
double poisson_gof_pvalue(const std::vector<std::int64_t>& counts, double mean);

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double slope_se = 0.0;  // from the supplied per-point variances
};

// Ordinary least squares y ~ a + b x with the slope standard error propagated
// from caller-supplied var(y_i) (delta-method variances for -log p_hat in the
// decay-slope experiment). Throws std::domain_error for fewer than 3 points
// or degenerate x.
LinearFit ols_fit(const std::vector<double>& x, const std::vector<double>& y,
                  const std::vector<double>& var_y);

}  // namespace catldp
