#pragma once

#include <vector>

#include "catldp/model.hpp"
#include "catldp/path.hpp"

namespace catldp {

// Cumulant of the growth part at unit time:
//   A(y) = growth_rate * (E exp(y*jump) - 1).
// Entire in y because the jump support is finite.
double cumulant_A(const ModelParams& params, double y);
double cumulant_A_prime(const ModelParams& params, double y);
double cumulant_A_second(const ModelParams& params, double y);

struct LegendrePoint {
  double value = 0.0;   // Lambda(x)
  double y_star = 0.0;  // argmax of x*y - A(y); -inf when the sup is a limit
};

// Convex conjugate Lambda(x) = sup_y (x*y - A(y)).
//  x < 0  : +inf (the growth part never decreases)
//  x == 0 : growth_rate * (1 - P(jump == 0)), the y -> -inf limit
//  x > 0  : solved by safeguarded Newton on A'(y) = x (bracket by doubling,
//           bisection fallback, stationarity residual below 1e-12 * x).
// Throws std::runtime_error if 100 iterations fail to meet the residual,
// which does not happen for finite-support pmfs with a positive jump.
double legendre(const ModelParams& params, double x);
LegendrePoint legendre_point(const ModelParams& params, double x);

struct VariationParts {
  std::vector<double> fplus_slopes;   // per-cell max(slope, 0)
  std::vector<double> fminus_slopes;  // per-cell max(-slope, 0)
  TargetPath fplus;                   // cumulative positive part
  TargetPath fminus;                  // cumulative negative part
  double total_variation = 0.0;
};

// Minimal monotone decomposition f = fplus - fminus on the grid; minimal in
// the sense that any other monotone pair (g, h) with f = g - h has cellwise
// larger slopes, hence larger variation.
VariationParts positive_variation(const TargetPath& f);

struct OptimalG {
  std::vector<double> slopes;
  TargetPath g;
  double variational_term = 0.0;  // sum_i Lambda(slopes[i]) * dt
};

// Minimizer of integral Lambda(g') over monotone g with g' >= (f+)' cellwise.
// Lambda is convex with minimum at the mean slope m, so the constrained
// minimum decouples: each cell takes max((f+)' , m).
OptimalG optimal_g(const TargetPath& f, const ModelParams& params);

struct RateReport {
  double rate_value = 0.0;
  double catastrophe_term = 0.0;  // alpha*mu/(lambda+mu)
  double variational_term = 0.0;
  std::vector<double> optimal_slopes;
  std::vector<double> fplus_slopes;
};

// Local large-deviation rate of the scaled path around target f:
//   I(f) = catastrophe_rate + min over feasible g of integral Lambda(g').
// Requires f strictly positive away from 0 (f.in_ac0_plus()); throws
// std::domain_error otherwise, because targets touching 0 after the start
// are not in the principle's domain.
RateReport rate_I(const TargetPath& f, const ModelParams& params);

// Same quantity for the unit-jump special case (jump pmf a point mass at 1),
// where Lambda has the closed form x*ln(x/m) - x + m with m = growth_rate.
// Pure analytic path, no root-finding: a cross-check on the numeric route.
// Throws std::domain_error when the pmf is not the unit point mass.
RateReport rate_I_closed_poisson(const TargetPath& f, const ModelParams& params);

}  // namespace catldp
