#include "catldp/stats.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/poisson.hpp>

namespace catldp {

Interval clopper_pearson(std::int64_t hits, std::int64_t n, double confidence) {
  if (n <= 0 || hits < 0 || hits > n)
    throw std::domain_error("need 0 <= hits <= n with n > 0");
  if (!(confidence > 0.0) || !(confidence < 1.0))
    throw std::domain_error("confidence must lie in (0,1)");
  const double a = 1.0 - confidence;
  Interval ci;
  if (hits == 0) {
    ci.lo = 0.0;
  } else {
    boost::math::beta_distribution<double> lo_dist(static_cast<double>(hits),
                                                   static_cast<double>(n - hits + 1));
    ci.lo = boost::math::quantile(lo_dist, a / 2.0);
  }
  if (hits == n) {
    ci.hi = 1.0;
  } else {
    boost::math::beta_distribution<double> hi_dist(static_cast<double>(hits + 1),
                                                   static_cast<double>(n - hits));
    ci.hi = boost::math::quantile(hi_dist, 1.0 - a / 2.0);
  }
  return ci;
}

double poisson_gof_pvalue(const std::vector<std::int64_t>& counts, double mean) {
  if (counts.size() < 2) throw std::domain_error("histogram needs at least two bins");
  if (!(mean > 0.0)) throw std::domain_error("mean must be positive");
  const double n = static_cast<double>(
      std::accumulate(counts.begin(), counts.end(), std::int64_t{0}));
  if (n <= 0.0) throw std::domain_error("histogram has no observations");

  // contract: counts[k] observes value k exactly, except the last bin which
  // holds everything >= K (callers lump the tail there)
  boost::math::poisson_distribution<double> pois(mean);
  const std::size_t K = counts.size() - 1;
  std::vector<double> expected(counts.size());
  double cum = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const double pk = boost::math::pdf(pois, static_cast<double>(k));
    expected[k] = n * pk;
    cum += pk;
  }
  expected[K] = n * std::max(0.0, 1.0 - cum);

  // pool adjacent cells until each expected count reaches 5
  std::vector<double> obs, exp;
  double o_acc = 0.0, e_acc = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    o_acc += static_cast<double>(counts[k]);
    e_acc += expected[k];
    if (e_acc >= 5.0) {
      obs.push_back(o_acc);
      exp.push_back(e_acc);
      o_acc = e_acc = 0.0;
    }
  }
  if (o_acc > 0.0 || e_acc > 0.0) {
    if (obs.empty()) {
      obs.push_back(o_acc);
      exp.push_back(e_acc);
    } else {
      obs.back() += o_acc;
      exp.back() += e_acc;
    }
  }
  if (obs.size() < 2) return 1.0;  // nothing left to test against

  double stat = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const double d = obs[i] - exp[i];
    stat += d * d / exp[i];
  }
  boost::math::chi_squared_distribution<double> chi2(static_cast<double>(obs.size() - 1));
  return boost::math::cdf(boost::math::complement(chi2, stat));
}

LinearFit ols_fit(const std::vector<double>& x, const std::vector<double>& y,
                  const std::vector<double>& var_y) {
  const std::size_t n = x.size();
  if (y.size() != n || var_y.size() != n)
    throw std::invalid_argument("ols_fit arrays must have equal length");
  if (n < 3) throw std::domain_error("ols_fit needs at least 3 points");
  const double xbar = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double ybar = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - xbar) * (x[i] - xbar);
    sxy += (x[i] - xbar) * (y[i] - ybar);
  }
  if (!(sxx > 0.0)) throw std::domain_error("x values are degenerate");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  // slope = sum c_i y_i with c_i = (x_i - xbar)/sxx; propagate var(y_i)
  double var_slope = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = (x[i] - xbar) / sxx;
    var_slope += c * c * var_y[i];
  }
  fit.slope_se = std::sqrt(var_slope);
  return fit;
}

}  // namespace catldp
