#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "catldp/model.hpp"
#include "catldp/oracle.hpp"
#include "catldp/path.hpp"

namespace catldp {

// Runs fn over [0,n) split into static contiguous chunks across `workers`
// threads (workers <= 0 means hardware concurrency). Each index must derive
// its randomness from the index alone, and mergers must not depend on chunk
// boundaries; every experiment below follows that discipline, which is what
// makes results independent of the worker count.
void parallel_for(std::int64_t n, int workers,
                  const std::function<void(std::int64_t begin, std::int64_t end, int slot)>& fn);

int resolve_workers(int workers);

struct TubeEstimate {
  double T = 0.0;
  double eps = 0.0;
  std::int64_t n = 0;
  std::int64_t hits = 0;
  double p_hat = 0.0;
  double ci_lo = 0.0;  // 95% Clopper-Pearson
  double ci_hi = 1.0;
  // -ln(p_hat)/T; for zero hits, the rule-of-three bound -ln(3/n)/T with
  // log_rate_is_bound set, so downstream fits can drop or flag the point.
  double log_rate = 0.0;
  bool log_rate_is_bound = false;
};

// P( sup_{[0,1]} |X(T t)/T - f(t)| < eps ) by n independent replicates of the
// direct sampler. Streaming evaluation with early exit; exact same hit set as
// sup_distance(path, f) < eps.
TubeEstimate tube_probability(const ModelParams& params, const TargetPath& f,
                              double eps, double T, std::int64_t n,
                              std::uint64_t seed, int workers = 0);

struct SlopeFit {
  std::vector<TubeEstimate> per_T;
  double slope = 0.0;
  double slope_se = 0.0;
  int used_points = 0;     // points with enough hits to trust -ln p_hat
  bool conclusive = false; // needs >= 3 usable points
  double rate_ref = 0.0;   // I(f) from the rate module
  double ratio = 0.0;      // slope / rate_ref
};

// Fits -ln p_hat(T) ~ a + slope * T over T_grid (weighted by delta-method
// variances). Replicate streams depend only on (seed + grid index,
// replicate), so runs at different eps share randomness per T and are
// directly comparable.
SlopeFit lldp_slope(const ModelParams& params, const TargetPath& f, double eps,
                    const std::vector<double>& T_grid, std::int64_t n,
                    std::uint64_t seed, int workers = 0);

struct MaxGrowthRow {
  double T = 0.0;
  double b = 0.0;
  double eps = 0.0;
  std::int64_t n = 0;
  std::int64_t exceed = 0;
  double exceed_freq = 0.0;
};

// Frequency of max_{[0,T]} X > eps * T^b per horizon in T_grid. For b < 1
// this must die out as T grows (the path lives at scale T only for an
// exponentially small moment).
std::vector<MaxGrowthRow> max_growth(const ModelParams& params, double b, double eps,
                                     const std::vector<double>& T_grid, std::int64_t n,
                                     std::uint64_t seed, int workers = 0);

struct EquivalenceRow {
  std::string sampler;
  double t = 0.0;
  std::int64_t n = 0;
  double tv = 0.0;
  double trunc_bound = 0.0;
  bool pass = false;  // tv <= 0.01 + trunc_bound
};

// Empirical law of X(t) under each of the three samplers vs the exact
// truncated distribution; total variation charged with the truncation bound.
std::vector<EquivalenceRow> sampler_equivalence(const ModelParams& params, double t,
                                                std::int64_t n, int x_max, int k_max,
                                                std::uint64_t seed, int workers = 0);

// TV distance between an empirical histogram (counts over {0..x_max}, with
// out-of-box replicates counted in `overflow`) and a truncated oracle law.
// Exposed for negative-control tests that corrupt a sampler on purpose.
double tv_distance(const TruncatedPmf& oracle, const std::vector<std::int64_t>& counts,
                   std::int64_t overflow, std::int64_t n);

// Streaming tube membership test, driver-agnostic. Feed events in time
// order; hit() is valid once the driver returns. Equivalent to computing the
// full path and checking sup_distance < eps, but abandons the replicate as
// soon as the sup can no longer come back under eps (it never decreases).
class TubeSink {
 public:
  TubeSink(const TargetPath& f, double T, double eps);

  bool on_event(double t, std::int64_t v);
  bool hit();  // call after the driver finishes; finalizes the tail segment

 private:
  void scan_grid_until(double u, double scaled_value);

  const TargetPath& f_;
  double T_;
  double eps_;
  double worst_ = 0.0;
  std::int64_t value_ = 0;
  int next_grid_ = 1;
  bool dead_ = false;
  bool finalized_ = false;
};

}  // namespace catldp
