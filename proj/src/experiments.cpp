#include "catldp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "catldp/rate.hpp"
#include "catldp/sampler.hpp"
#include "catldp/stats.hpp"

namespace catldp {

int resolve_workers(int workers) {
  if (workers > 0) return workers;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::int64_t n, int workers,
                  const std::function<void(std::int64_t, std::int64_t, int)>& fn) {
  if (n <= 0) return;
  const int w = std::min<std::int64_t>(resolve_workers(workers), n);
  if (w == 1) {
    fn(0, n, 0);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(w));
  const std::int64_t chunk = n / w;
  const std::int64_t extra = n % w;
  std::int64_t begin = 0;
  for (int slot = 0; slot < w; ++slot) {
    const std::int64_t len = chunk + (slot < extra ? 1 : 0);
    const std::int64_t end = begin + len;
    pool.emplace_back([&fn, begin, end, slot] { fn(begin, end, slot); });
    begin = end;
  }
  for (auto& t : pool) t.join();
}

TubeSink::TubeSink(const TargetPath& f, double T, double eps)
    : f_(f), T_(T), eps_(eps) {
  if (!(eps > 0.0)) throw std::domain_error("tube radius must be positive");
  // |X(0)/T - f(0)| = 0 always; nothing to seed
}

void TubeSink::scan_grid_until(double u, double scaled_value) {
  const int n = f_.cells();
  while (next_grid_ < n && static_cast<double>(next_grid_) / n <= u) {
    const double p = static_cast<double>(next_grid_) / n;
    worst_ = std::max(worst_, std::abs(scaled_value - f_.eval(p)));
    ++next_grid_;
  }
}

bool TubeSink::on_event(double t, std::int64_t v) {
  const double u = std::min(t / T_, 1.0);
  const double old_scaled = static_cast<double>(value_) / T_;
  // grid points passed while the old value held, then both one-sided limits
  // at the jump epoch itself
  scan_grid_until(u, old_scaled);
  const double fu = f_.eval(u);
  worst_ = std::max(worst_, std::abs(old_scaled - fu));
  const double new_scaled = static_cast<double>(v) / T_;
  worst_ = std::max(worst_, std::abs(new_scaled - fu));
  value_ = v;
  if (worst_ >= eps_) {
    dead_ = true;
    return false;  // sup only grows; the replicate can never re-enter
  }
  return true;
}

bool TubeSink::hit() {
  if (!finalized_ && !dead_) {
    const double scaled = static_cast<double>(value_) / T_;
    scan_grid_until(1.0, scaled);
    worst_ = std::max(worst_, std::abs(scaled - f_.eval(1.0)));
    finalized_ = true;
  }
  return !dead_ && worst_ < eps_;
}

namespace {

TubeEstimate summarize_tube(double T, double eps, std::int64_t n, std::int64_t hits) {
  TubeEstimate est;
  est.T = T;
  est.eps = eps;
  est.n = n;
  est.hits = hits;
  est.p_hat = static_cast<double>(hits) / static_cast<double>(n);
  const Interval ci = clopper_pearson(hits, n);
  est.ci_lo = ci.lo;
  est.ci_hi = ci.hi;
  if (hits > 0) {
    est.log_rate = -std::log(est.p_hat) / T;
    est.log_rate_is_bound = false;
  } else {
    // rule of three: p <= 3/n at 95%, so -ln(p)/T >= -ln(3/n)/T
    est.log_rate = -std::log(3.0 / static_cast<double>(n)) / T;
    est.log_rate_is_bound = true;
  }
  return est;
}

}  // namespace

TubeEstimate tube_probability(const ModelParams& params, const TargetPath& f,
                              double eps, double T, std::int64_t n,
                              std::uint64_t seed, int workers) {
  if (n <= 0) throw std::domain_error("need at least one replicate");
  if (!(eps > 0.0)) throw std::domain_error("tube radius must be positive");
  const int w = std::min<std::int64_t>(resolve_workers(workers), n);
  std::vector<std::int64_t> hits(static_cast<std::size_t>(w), 0);
  parallel_for(n, w, [&](std::int64_t begin, std::int64_t end, int slot) {
    std::int64_t local = 0;
    for (std::int64_t i = begin; i < end; ++i) {
      TubeSink sink(f, T, eps);
      drive_direct(params, T, RngStream{seed, static_cast<std::uint64_t>(i)}, sink);
      if (sink.hit()) ++local;
    }
    hits[static_cast<std::size_t>(slot)] = local;
  });
  std::int64_t total = 0;
  for (std::int64_t h : hits) total += h;
  return summarize_tube(T, eps, n, total);
}

SlopeFit lldp_slope(const ModelParams& params, const TargetPath& f, double eps,
                    const std::vector<double>& T_grid, std::int64_t n,
                    std::uint64_t seed, int workers) {
  if (T_grid.size() < 3)
    throw std::domain_error("slope fit needs at least 3 horizons");
  for (std::size_t i = 0; i + 1 < T_grid.size(); ++i)
    if (!(T_grid[i] < T_grid[i + 1]))
      throw std::domain_error("T_grid must be strictly increasing");

  SlopeFit fit;
  fit.rate_ref = rate_I(f, params).rate_value;
  for (std::size_t i = 0; i < T_grid.size(); ++i) {
    // seed varies with the grid index only, so a rerun at another eps shares
    // every replicate path (common random numbers)
    fit.per_T.push_back(tube_probability(params, f, eps, T_grid[i], n,
                                         seed + static_cast<std::uint64_t>(i), workers));
  }

  std::vector<double> xs, ys, vs;
  for (const TubeEstimate& e : fit.per_T) {
    if (e.hits < 10) continue;  // -ln p_hat too noisy to weigh in
    xs.push_back(e.T);
    ys.push_back(-std::log(e.p_hat));
    // delta method on -ln p_hat, binomial variance
    vs.push_back(static_cast<double>(e.n - e.hits) /
                 (static_cast<double>(e.n) * static_cast<double>(e.hits)));
  }
  fit.used_points = static_cast<int>(xs.size());
  if (fit.used_points < 3) {
    fit.conclusive = false;
    return fit;
  }
  const LinearFit ols = ols_fit(xs, ys, vs);
  fit.slope = ols.slope;
  fit.slope_se = ols.slope_se;
  fit.ratio = fit.rate_ref != 0.0 ? fit.slope / fit.rate_ref : 0.0;
  fit.conclusive = true;
  return fit;
}

namespace {

// stop as soon as the threshold is topped; the max cannot go back down
struct ExceedSink {
  std::int64_t threshold;
  bool exceeded = false;
  bool on_event(double, std::int64_t v) {
    if (v > threshold) {
      exceeded = true;
      return false;
    }
    return true;
  }
};

struct LastValueSink {
  std::int64_t value = 0;
  bool on_event(double, std::int64_t v) {
    value = v;
    return true;
  }
};

}  // namespace

std::vector<MaxGrowthRow> max_growth(const ModelParams& params, double b, double eps,
                                     const std::vector<double>& T_grid, std::int64_t n,
                                     std::uint64_t seed, int workers) {
  if (!(b > 0.0) || !(b < 1.0)) throw std::domain_error("exponent b must lie in (0,1)");
  if (!(eps > 0.0)) throw std::domain_error("eps must be positive");
  if (n <= 0) throw std::domain_error("need at least one replicate");

  std::vector<MaxGrowthRow> rows;
  for (std::size_t ti = 0; ti < T_grid.size(); ++ti) {
    const double T = T_grid[ti];
    // the path max is an integer, so max > eps*T^b iff max > floor(eps*T^b)
    const auto threshold =
        static_cast<std::int64_t>(std::floor(eps * std::pow(T, b)));
    const std::uint64_t run_seed = seed + static_cast<std::uint64_t>(ti);
    const int w = std::min<std::int64_t>(resolve_workers(workers), n);
    std::vector<std::int64_t> exceed(static_cast<std::size_t>(w), 0);
    parallel_for(n, w, [&](std::int64_t begin, std::int64_t end, int slot) {
      std::int64_t local = 0;
      for (std::int64_t i = begin; i < end; ++i) {
        ExceedSink sink{threshold};
        drive_direct(params, T, RngStream{run_seed, static_cast<std::uint64_t>(i)}, sink);
        if (sink.exceeded) ++local;
      }
      exceed[static_cast<std::size_t>(slot)] = local;
    });
    std::int64_t total = 0;
    for (std::int64_t e : exceed) total += e;
    rows.push_back({T, b, eps, n, total,
                    static_cast<double>(total) / static_cast<double>(n)});
  }
  return rows;
}

double tv_distance(const TruncatedPmf& oracle, const std::vector<std::int64_t>& counts,
                   std::int64_t overflow, std::int64_t n) {
  if (static_cast<int>(counts.size()) != oracle.x_max() + 1)
    throw std::domain_error("histogram size does not match oracle support");
  if (n <= 0) throw std::domain_error("need at least one observation");
  double acc = 0.0;
  for (int x = 0; x <= oracle.x_max(); ++x) {
    const double emp = static_cast<double>(counts[static_cast<std::size_t>(x)]) /
                       static_cast<double>(n);
    acc += std::abs(emp - oracle.probs(x));
  }
  acc += static_cast<double>(overflow) / static_cast<double>(n);
  acc += oracle.truncation_mass_bound;
  return 0.5 * acc;
}

std::vector<EquivalenceRow> sampler_equivalence(const ModelParams& params, double t,
                                                std::int64_t n, int x_max, int k_max,
                                                std::uint64_t seed, int workers) {
  if (n <= 0) throw std::domain_error("need at least one replicate");
  const TruncatedPmf oracle = xi_distribution(params, t, x_max, k_max);

  const char* names[3] = {"direct", "decomposed", "subordinated"};
  std::vector<EquivalenceRow> rows;
  for (int s = 0; s < 3; ++s) {
    const int w = std::min<std::int64_t>(resolve_workers(workers), n);
    std::vector<std::vector<std::int64_t>> hist(
        static_cast<std::size_t>(w),
        std::vector<std::int64_t>(static_cast<std::size_t>(x_max) + 2, 0));
    parallel_for(n, w, [&](std::int64_t begin, std::int64_t end, int slot) {
      auto& h = hist[static_cast<std::size_t>(slot)];
      for (std::int64_t i = begin; i < end; ++i) {
        LastValueSink sink;
        // salt the stream by sampler so the three laws are independent draws
        const RngStream stream{seed, static_cast<std::uint64_t>(i) +
                                         (static_cast<std::uint64_t>(s) + 1) * (1ULL << 40)};
        switch (s) {
          case 0: drive_direct(params, t, stream, sink); break;
          case 1: drive_decomposed(params, t, stream, sink); break;
          default: drive_subordinated(params, t, stream, sink); break;
        }
        const std::int64_t idx = std::min<std::int64_t>(sink.value, x_max + 1);
        ++h[static_cast<std::size_t>(idx)];
      }
    });
    std::vector<std::int64_t> counts(static_cast<std::size_t>(x_max) + 1, 0);
    std::int64_t overflow = 0;
    for (const auto& h : hist) {
      for (int x = 0; x <= x_max; ++x) counts[static_cast<std::size_t>(x)] += h[static_cast<std::size_t>(x)];
      overflow += h[static_cast<std::size_t>(x_max) + 1];
    }
    const double tv = tv_distance(oracle, counts, overflow, n);
    rows.push_back({names[s], t, n, tv, oracle.truncation_mass_bound,
                    tv <= 0.01 + oracle.truncation_mass_bound});
  }
  return rows;
}

}  // namespace catldp
