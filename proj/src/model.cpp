#include "catldp/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <stdexcept>

namespace catldp {

namespace {

std::string fmt(const char* pattern, ...) {
  char buf[256];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof buf, pattern, args);
  va_end(args);
  return buf;
}

}  // namespace

int JumpPmf::max_jump() const {
  for (int r = static_cast<int>(probs.size()) - 1; r >= 0; --r)
    if (probs[static_cast<std::size_t>(r)] > 0.0) return r;
  return -1;
}

double JumpPmf::mean() const {
  double s = 0.0;
  for (std::size_t r = 1; r < probs.size(); ++r) s += static_cast<double>(r) * probs[r];
  return s;
}

double JumpPmf::mgf(double y) const {
  double s = 0.0;
  for (std::size_t r = 0; r < probs.size(); ++r)
    if (probs[r] > 0.0) s += probs[r] * std::exp(y * static_cast<double>(r));
  return s;
}

double JumpPmf::mgf_prime(double y) const {
  double s = 0.0;
  for (std::size_t r = 1; r < probs.size(); ++r)
    if (probs[r] > 0.0) s += static_cast<double>(r) * probs[r] * std::exp(y * static_cast<double>(r));
  return s;
}

double JumpPmf::mgf_second(double y) const {
  double s = 0.0;
  for (std::size_t r = 1; r < probs.size(); ++r)
    if (probs[r] > 0.0) {
      const double rd = static_cast<double>(r);
      s += rd * rd * probs[r] * std::exp(y * rd);
    }
  return s;
}

double mgf_gamma(const JumpPmf& pmf, double y) { return pmf.mgf(y); }

CatastropheKernel CatastropheKernel::uniform(double delta) {
  if (!(delta > 1.0)) throw std::domain_error("delta_bound must exceed 1");
  return CatastropheKernel{KernelKind::Uniform, 0.0, delta};
}

CatastropheKernel CatastropheKernel::tilted(double a) {
  if (!(a > -1.0) || !std::isfinite(a))
    throw std::domain_error("tilt must be finite and greater than -1");
  return CatastropheKernel{KernelKind::TiltedUniform, a, tilted_delta_bound(a)};
}

double tilted_delta_bound(double a) {
  const double hi = 1.0 + std::max(a, 0.0);
  const double lo = 1.0 + std::min(a, 0.0);
  return hi / lo + 1.0;
}

double q_mass(const CatastropheKernel& kernel, std::int64_t d, std::int64_t x) {
  if (x < 1 || d < 1 || d > x)
    throw std::domain_error("catastrophe size must satisfy 1 <= d <= x with x >= 1");
  const double xd = static_cast<double>(x);
  switch (kernel.kind) {
    case KernelKind::Uniform:
      return 1.0 / xd;
    case KernelKind::TiltedUniform: {
      const double a = kernel.tilt;
      const double z = xd + a * static_cast<double>(x + 1) / 2.0;
      return (1.0 + a * static_cast<double>(d) / xd) / z;
    }
  }
  throw std::logic_error("unreachable kernel kind");
}

bool ValidationReport::pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const ConditionCheck& c) { return c.pass; });
}

const ConditionCheck* ValidationReport::first_failure() const {
  for (const auto& c : checks)
    if (!c.pass) return &c;
  return nullptr;
}

std::string ValidationReport::summary() const {
  std::string out;
  for (const auto& c : checks) {
    if (c.pass) continue;
    if (!out.empty()) out += "; ";
    out += c.condition + ": " + c.witness;
  }
  return out.empty() ? "ok" : out;
}

ConditionCheck check_almost_uniform(
    const std::function<double(std::int64_t, std::int64_t)>& q, double delta,
    std::int64_t x_max) {
  ConditionCheck check{"almost_uniform_bounds", true, ""};
  if (!(delta > 1.0)) {
    check.pass = false;
    check.witness = fmt("requires delta > 1, declared delta = %g", delta);
    return check;
  }
  // 1e-12 relative slack so an exactly-tight kernel does not fail on FP dust.
  for (std::int64_t x = 1; x <= x_max; ++x) {
    const double lo = 1.0 / (delta * static_cast<double>(x));
    const double hi = delta / static_cast<double>(x);
    for (std::int64_t d = 1; d <= x; ++d) {
      const double v = q(d, x);
      if (v < lo * (1.0 - 1e-12)) {
        check.pass = false;
        check.witness = fmt("Q_%lld(%lld) = %.6g below 1/(delta*x) = %.6g",
                            static_cast<long long>(d), static_cast<long long>(x), v, lo);
        return check;
      }
      if (v > hi * (1.0 + 1e-12)) {
        check.pass = false;
        check.witness = fmt("Q_%lld(%lld) = %.6g above delta/x = %.6g",
                            static_cast<long long>(d), static_cast<long long>(x), v, hi);
        return check;
      }
    }
  }
  return check;
}

ValidationReport validate(const ModelParams& params, std::int64_t x_max) {
  ValidationReport report;

  ConditionCheck rates{"rate_positivity", true, ""};
  if (!(params.alpha > 0.0) || !std::isfinite(params.alpha) ||
      !(params.lambda_up > 0.0) || !std::isfinite(params.lambda_up) ||
      !(params.mu_down > 0.0) || !std::isfinite(params.mu_down)) {
    rates.pass = false;
    rates.witness = fmt(
        "requires alpha > 0, lambda > 0, mu > 0 and finite; got alpha = %g, "
        "lambda = %g, mu = %g",
        params.alpha, params.lambda_up, params.mu_down);
  }
  report.checks.push_back(rates);

  ConditionCheck pmf{"jump_pmf_normalization", true, ""};
  if (params.jump_pmf.probs.empty()) {
    pmf.pass = false;
    pmf.witness = "jump pmf is empty";
  } else {
    double sum = 0.0;
    for (std::size_t r = 0; r < params.jump_pmf.probs.size(); ++r) {
      const double p = params.jump_pmf.probs[r];
      if (p < 0.0 || !std::isfinite(p)) {
        pmf.pass = false;
        pmf.witness = fmt("P_%zu = %g is not a probability", r, p);
        break;
      }
      sum += p;
    }
    if (pmf.pass && std::abs(sum - 1.0) > kPmfTol) {
      pmf.pass = false;
      pmf.witness = fmt("probabilities sum to %.17g, not 1", sum);
    }
  }
  report.checks.push_back(pmf);

  ConditionCheck upjump{"positive_jump_mass", true, ""};
  if (params.jump_pmf.max_jump() < 1) {
    upjump.pass = false;
    upjump.witness = "no r >= 1 with P_r > 0; the process would never leave 0";
  }
  report.checks.push_back(upjump);

  ConditionCheck norm{"kernel_normalization", true, ""};
  const std::int64_t norm_cap = std::min<std::int64_t>(x_max, 1024);
  for (std::int64_t x = 1; x <= norm_cap && norm.pass; ++x) {
    double sum = 0.0;
    for (std::int64_t d = 1; d <= x; ++d) sum += q_mass(params.kernel, d, x);
    if (std::abs(sum - 1.0) > 1e-9) {
      norm.pass = false;
      norm.witness = fmt("sum_d Q_d(%lld) = %.17g", static_cast<long long>(x), sum);
    }
  }
  report.checks.push_back(norm);

  report.checks.push_back(check_almost_uniform(
      [&params](std::int64_t d, std::int64_t x) { return q_mass(params.kernel, d, x); },
      params.kernel.delta_bound, x_max));

  // Finite jump support means E exp(y * jump) < inf for every y; recorded so
  // the report lists everything the downstream theory relies on.
  report.checks.push_back(
      {"finite_exponential_moments", true, ""});

  return report;
}

}  // namespace catldp
