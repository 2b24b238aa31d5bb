#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "catldp/model.hpp"

namespace catldp {

// Law on {0..x_max} with explicit accounting of probability mass that left
// the box through the truncation boundary. Every quantity derived from the
// pmf carries this bound, so comparisons against Monte Carlo can state
// "within tolerance + truncation" honestly.
struct TruncatedPmf {
  Eigen::VectorXd probs;
  double truncation_mass_bound = 0.0;

  static TruncatedPmf delta0(int x_max);

  int x_max() const { return static_cast<int>(probs.size()) - 1; }
  double total() const { return probs.sum(); }
};

// One-step transition of the embedded chain restricted to {0..x_max}.
// Column x holds the outgoing law of state x; lost(x) is the up-jump mass
// that leaves the box from x. Catastrophes never leave the box.
struct EtaTransition {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd lost;
};

EtaTransition make_eta_transition(const ModelParams& params, int x_max);

TruncatedPmf eta_step(const EtaTransition& transition, const TruncatedPmf& pmf);
TruncatedPmf eta_step(const ModelParams& params, const TruncatedPmf& pmf);

// Exact law of the process at time t by Poisson mixing of embedded-chain
// laws: weight exp(-alpha t) (alpha t)^k / k! on the k-step law, k <= k_max.
// The result's truncation bound covers both the Poisson tail beyond k_max and
// the spatial mass lost above x_max, so probs.sum() + bound ~ 1.
// Throws std::domain_error for t < 0 and std::invalid_argument when
// alpha*t > 700 (the mixing weights underflow; this is a desk-scale oracle).
TruncatedPmf xi_distribution(const ModelParams& params, double t, int x_max, int k_max);

// Uniform-in-time moment bound for the embedded chain: checks
//   E eta(k)^{3u} 1(eta(k) > c1)  <=  C2 = (4*lambda*Delta + mu*(4*Delta-3))/mu * c1^{3u}
// for every k <= k_max, with Delta the kernel's declared sandwich constant.
// The check is inconclusive when the truncated tail could hide mass worth
// more than 1% of C2, i.e. truncation_mass_bound * x_max^{3u} > C2/100.
struct ChainMomentReport {
  int u = 1;
  std::int64_t c1 = 0;
  double bound = 0.0;               // C2
  std::vector<double> lhs_per_k;    // E eta(k)^{3u} 1(eta(k) > c1)
  double max_ratio = 0.0;           // max_k lhs/bound
  double truncation_term = 0.0;     // truncation_mass_bound * x_max^{3u}
  bool inconclusive = false;
  bool pass = false;
};

ChainMomentReport chain_moment_bound_check(const ModelParams& params, int u,
                                           std::int64_t c1, int k_max, int x_max);

// P(Poisson(mean) <= k) by stable ascending term recursion.
double poisson_lower_cdf(double mean, std::int64_t k);

// Chernoff-type bound on the lower tail of the catastrophe clock increment:
//   P( N((1-delta)T) <= c*T ) <= exp(-rho(1-delta)T + rho(1-delta)cT - T c ln c)
// with rho = catastrophe_rate and N a Poisson process of rate rho. The LHS is
// the exact Poisson CDF at floor(c*T); c = 0 uses c ln c = 0.
struct ClockTailReport {
  double c = 0.0, delta = 0.0, T = 0.0;
  double lhs = 0.0, rhs = 0.0;
  bool pass = false;
};

ClockTailReport clock_lower_tail_check(const ModelParams& params, double c,
                                       double delta, double T);

}  // namespace catldp
