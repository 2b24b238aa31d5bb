#include "catldp/rate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace catldp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_conjugate_usable(const ModelParams& params) {
  if (!(params.growth_rate() > 0.0))
    throw std::domain_error("legendre transform needs positive rates");
  if (params.jump_pmf.max_jump() < 1)
    throw std::domain_error("legendre transform needs a positive jump (some P_r > 0, r >= 1)");
}

}  // namespace

double cumulant_A(const ModelParams& params, double y) {
  return params.growth_rate() * (params.jump_pmf.mgf(y) - 1.0);
}

double cumulant_A_prime(const ModelParams& params, double y) {
  return params.growth_rate() * params.jump_pmf.mgf_prime(y);
}

double cumulant_A_second(const ModelParams& params, double y) {
  return params.growth_rate() * params.jump_pmf.mgf_second(y);
}

LegendrePoint legendre_point(const ModelParams& params, double x) {
  require_conjugate_usable(params);
  if (!std::isfinite(x)) throw std::domain_error("legendre argument must be finite");
  if (x < 0.0) return {kInf, -kInf};
  if (x == 0.0) {
    // sup attained in the y -> -inf limit: A(y) -> -growth_rate * (1 - P_0)
    const double p0 = params.jump_pmf.probs.empty() ? 0.0 : params.jump_pmf.probs[0];
    return {params.growth_rate() * (1.0 - p0), -kInf};
  }

  // Solve A'(y) = x. A' is increasing from 0 to +inf, so a bracket always
  // exists; doubling finds it, Newton polishes inside it, bisection catches
  // any step Newton proposes outside.
  double lo, hi;
  if (cumulant_A_prime(params, 0.0) >= x) {
    hi = 0.0;
    lo = -1.0;
    int guard = 0;
    while (cumulant_A_prime(params, lo) > x) {
      lo *= 2.0;
      if (++guard > 200) throw std::runtime_error("legendre bracket search ran away (low side)");
    }
  } else {
    lo = 0.0;
    hi = 1.0;
    int guard = 0;
    while (cumulant_A_prime(params, hi) < x) {
      hi *= 2.0;
      if (++guard > 200) throw std::runtime_error("legendre bracket search ran away (high side)");
    }
  }

  const double tol = 1e-12 * std::max(x, 1e-300);
  double y = 0.5 * (lo + hi);
  for (int iter = 0; iter < 100; ++iter) {
    const double resid = cumulant_A_prime(params, y) - x;
    if (std::abs(resid) <= tol) {
      return {y * x - cumulant_A(params, y), y};
    }
    if (resid > 0.0)
      hi = y;
    else
      lo = y;
    const double second = cumulant_A_second(params, y);
    const double newton = y - resid / second;
    y = (std::isfinite(newton) && newton > lo && newton < hi) ? newton : 0.5 * (lo + hi);
  }
  throw std::runtime_error("legendre stationarity residual did not reach tolerance");
}

double legendre(const ModelParams& params, double x) {
  return legendre_point(params, x).value;
}

VariationParts positive_variation(const TargetPath& f) {
  VariationParts parts;
  const auto slopes = f.slopes();
  const double dt = f.dt();
  parts.fplus_slopes.reserve(slopes.size());
  parts.fminus_slopes.reserve(slopes.size());
  for (double s : slopes) {
    parts.fplus_slopes.push_back(std::max(s, 0.0));
    parts.fminus_slopes.push_back(std::max(-s, 0.0));
    parts.total_variation += std::abs(s) * dt;
  }
  parts.fplus = TargetPath::from_slopes(parts.fplus_slopes);
  parts.fminus = TargetPath::from_slopes(parts.fminus_slopes);
  return parts;
}

OptimalG optimal_g(const TargetPath& f, const ModelParams& params) {
  require_conjugate_usable(params);
  OptimalG out;
  const double m = params.mean_slope();
  const double dt = f.dt();
  const auto slopes = f.slopes();
  out.slopes.reserve(slopes.size());
  for (double s : slopes) {
    // Lambda decreases on (0, m] and increases on [m, inf); under the
    // cellwise constraint g' >= max(f', 0) the best slope is the projection
    // of m onto the feasible ray.
    const double g = std::max(std::max(s, 0.0), m);
    out.slopes.push_back(g);
    out.variational_term += legendre(params, g) * dt;
  }
  out.g = TargetPath::from_slopes(out.slopes);
  return out;
}

namespace {

RateReport assemble_rate(const TargetPath& f, const ModelParams& params,
                         double (*lambda_of)(const ModelParams&, double)) {
  if (!f.in_ac0_plus())
    throw std::domain_error(
        "target must be strictly positive away from t = 0; a path constrained to "
        "a nonpositive level has no finite local rate");
  RateReport report;
  report.catastrophe_term = params.catastrophe_rate();
  const double m = params.mean_slope();
  const double dt = f.dt();
  for (double s : f.slopes()) {
    const double splus = std::max(s, 0.0);
    const double g = std::max(splus, m);
    report.fplus_slopes.push_back(splus);
    report.optimal_slopes.push_back(g);
    report.variational_term += lambda_of(params, g) * dt;
  }
  report.rate_value = report.catastrophe_term + report.variational_term;
  return report;
}

double lambda_numeric(const ModelParams& params, double x) { return legendre(params, x); }

double lambda_unit_jump(const ModelParams& params, double x) {
  const double m = params.growth_rate();
  if (x < 0.0) return kInf;
  if (x == 0.0) return m;
  return x * std::log(x / m) - x + m;
}

}  // namespace

RateReport rate_I(const TargetPath& f, const ModelParams& params) {
  require_conjugate_usable(params);
  return assemble_rate(f, params, lambda_numeric);
}

RateReport rate_I_closed_poisson(const TargetPath& f, const ModelParams& params) {
  const auto& p = params.jump_pmf.probs;
  const bool unit_jump = params.jump_pmf.max_jump() == 1 && p.size() >= 2 &&
                         std::abs(p[1] - 1.0) <= kPmfTol;
  if (!unit_jump)
    throw std::domain_error("closed form requires the unit-jump pmf (P_1 = 1)");
  return assemble_rate(f, params, lambda_unit_jump);
}

}  // namespace catldp
