#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace catldp {

inline constexpr double kPmfTol = 1e-12;

// Distribution of upward jump sizes on {0,...,R}. Finite support is a design
// restriction: it makes every exponential moment finite, so the cumulant below
// is an entire function and the Legendre machinery needs no integrability
// checks.
struct JumpPmf {
  std::vector<double> probs;  // probs[r] = P(jump == r)

  static JumpPmf point_mass_at_one() { return JumpPmf{{0.0, 1.0}}; }

  int max_jump() const;  // largest r with probs[r] > 0, -1 for an all-zero pmf
  double mean() const;
  double mgf(double y) const;         // E exp(y * jump)
  double mgf_prime(double y) const;   // E jump * exp(y * jump)
  double mgf_second(double y) const;  // E jump^2 * exp(y * jump)
};

double mgf_gamma(const JumpPmf& pmf, double y);

enum class KernelKind { Uniform, TiltedUniform };

// Catastrophe size distribution Q_d(x) on d in {1..x} for a pre-jump state
// x >= 1. Uniform is Q_d(x) = 1/x. TiltedUniform weighs size d by
// (1 + tilt*d/x) before normalizing, tilt in (-1, inf). delta_bound is the
// constant the kernel declares for the almost-uniform sandwich
//   1/(delta*x) <= Q_d(x) <= delta/x for all 1 <= d <= x,
// which validate() re-checks numerically.
struct CatastropheKernel {
  KernelKind kind = KernelKind::Uniform;
  double tilt = 0.0;
  double delta_bound = 2.0;

  static CatastropheKernel uniform(double delta = 2.0);
  static CatastropheKernel tilted(double a);  // delta from tilted_delta_bound
};

// Provable sandwich constant for the tilted kernel. For 1 <= d <= x,
// x*Q_d(x) = (1 + a d/x) / (1 + a (x+1)/(2x)); numerator and denominator both
// lie in [1+min(a,0), 1+max(a,0)], so the ratio is bounded by
// (1+max(a,0))/(1+min(a,0)) both ways. +1 slack so the declared bound is
// sufficient with room rather than tight.
double tilted_delta_bound(double a);

// P(catastrophe size == d | pre-jump state x). Throws std::domain_error
// unless 1 <= d <= x.
double q_mass(const CatastropheKernel& kernel, std::int64_t d, std::int64_t x);

struct ModelParams {
  double alpha = 1.0;      // total event rate
  double lambda_up = 1.0;  // upward weight
  double mu_down = 1.0;    // catastrophe weight
  JumpPmf jump_pmf = JumpPmf::point_mass_at_one();
  CatastropheKernel kernel;

  double up_prob() const { return lambda_up / (lambda_up + mu_down); }
  double growth_rate() const { return alpha * lambda_up / (lambda_up + mu_down); }
  double catastrophe_rate() const { return alpha * mu_down / (lambda_up + mu_down); }
  // Drift of the growth part, also the argmin of the Legendre transform.
  double mean_slope() const { return growth_rate() * jump_pmf.mean(); }
};

struct ConditionCheck {
  std::string condition;
  bool pass = false;
  std::string witness;  // empty when the condition holds
};

struct ValidationReport {
  std::vector<ConditionCheck> checks;

  bool pass() const;
  const ConditionCheck* first_failure() const;  // nullptr when all pass
  std::string summary() const;                  // one line per failing check
};

// Report-style validation: callers get every violated condition with a
// witness instead of an exception, so a CLI can show them all at once.
// Checks: rate positivity, jump pmf normalization, existence of a positive
// jump (without it the process never leaves 0 and every limit statement
// degenerates), kernel normalization, and the almost-uniform sandwich with
// the kernel's declared delta_bound, both scanned for x <= x_max.
ValidationReport validate(const ModelParams& params, std::int64_t x_max = 256);

// Sandwich check for an arbitrary kernel function q(d, x), exposed so tests
// can probe kernels beyond the built-in kinds (e.g. a point mass at d=1,
// which must fail for every delta once x > delta).
ConditionCheck check_almost_uniform(
    const std::function<double(std::int64_t, std::int64_t)>& q, double delta,
    std::int64_t x_max);

}  // namespace catldp
