#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "catldp/model.hpp"
#include "catldp/path.hpp"
#include "catldp/rng.hpp"

namespace catldp {

// Sinks receive the path as it is generated. on_event fires only on state
// changes and returns false to stop the replicate early (the tube evaluator
// bails out once the tube is left for good). An optional on_tick(t) fires at
// every clock arrival, including jumps of size zero, which is what the
// clock-distribution tests need to see.
template <class S>
concept EventSink = requires(S s, double t, std::int64_t v) {
  { s.on_event(t, v) } -> std::convertible_to<bool>;
};

template <class S>
concept TickSink = requires(S s, double t) { s.on_tick(t); };

namespace detail {

// Discrete-sampling tables shared by the drivers. The tilted kernel needs a
// per-state cumulative table; states recur constantly inside one run, so the
// tables are cached.
class SamplerContext {
 public:
  explicit SamplerContext(const ModelParams& params);

  std::int64_t draw_jump(CounterRng& rng) const;
  std::int64_t draw_catastrophe(CounterRng& rng, std::int64_t x);

  // One step of the embedded chain from state x: from 0 an unconditional
  // upward jump, otherwise up with probability lambda/(lambda+mu) and a
  // catastrophe with the complement.
  std::int64_t step_chain(CounterRng& rng, std::int64_t x);

  const ModelParams& params() const { return params_; }

 private:
  const ModelParams& params_;
  std::vector<double> jump_cdf_;
  double up_prob_;
  std::unordered_map<std::int64_t, std::vector<double>> catastrophe_cdf_;
};

template <class Sink>
inline void tick(Sink& sink, double t) {
  if constexpr (TickSink<Sink>) sink.on_tick(t);
}

inline void require_horizon(double T) {
  if (!(T > 0.0) || !std::isfinite(T))
    throw std::domain_error("sampler horizon must be positive and finite");
}

}  // namespace detail

// Driver 1, the verbal description taken literally: one exponential clock at
// the total rate; at each arrival the embedded chain moves once.
template <class Sink>
  requires EventSink<Sink>
void drive_direct(const ModelParams& params, double T, RngStream stream, Sink&& sink) {
  detail::require_horizon(T);
  detail::SamplerContext ctx(params);
  CounterRng rng(stream);
  double t = 0.0;
  std::int64_t x = 0;
  for (;;) {
    t += rng.next_exponential(params.alpha);
    if (t > T) return;
    detail::tick(sink, t);
    const std::int64_t nx = ctx.step_chain(rng, x);
    if (nx != x) {
      x = nx;
      if (!sink.on_event(t, x)) return;
    }
  }
}

// Driver 2, two independent clocks: growth arrivals at rate
// alpha*lambda/(lambda+mu) add an upward jump; catastrophe arrivals at rate
// alpha*mu/(lambda+mu) remove a uniform-kernel piece, except that a
// catastrophe hitting state 0 acts as an upward jump instead (the
// decomposition's convention for the boundary).
template <class Sink>
  requires EventSink<Sink>
void drive_decomposed(const ModelParams& params, double T, RngStream stream, Sink&& sink) {
  detail::require_horizon(T);
  detail::SamplerContext ctx(params);
  CounterRng rng(stream);
  const double gr = params.growth_rate();
  const double cr = params.catastrophe_rate();
  double t_up = rng.next_exponential(gr);
  double t_down = rng.next_exponential(cr);
  std::int64_t x = 0;
  for (;;) {
    if (t_up <= t_down) {
      if (t_up > T) return;
      detail::tick(sink, t_up);
      const std::int64_t r = ctx.draw_jump(rng);
      if (r != 0) {
        x += r;
        if (!sink.on_event(t_up, x)) return;
      }
      t_up += rng.next_exponential(gr);
    } else {
      if (t_down > T) return;
      detail::tick(sink, t_down);
      const std::int64_t nx = (x == 0) ? ctx.draw_jump(rng) : x - ctx.draw_catastrophe(rng, x);
      if (nx != x) {
        x = nx;
        if (!sink.on_event(t_down, x)) return;
      }
      t_down += rng.next_exponential(cr);
    }
  }
}

// Driver 3, subordination: draw the Poisson number of arrivals on [0,T] up
// front, place them as sorted uniforms, then walk the embedded chain through
// them. Exposes the chain/clock split explicitly, which is what the
// distribution oracle discretizes.
template <class Sink>
  requires EventSink<Sink>
void drive_subordinated(const ModelParams& params, double T, RngStream stream, Sink&& sink) {
  detail::require_horizon(T);
  detail::SamplerContext ctx(params);
  CounterRng rng(stream);
  const std::int64_t n = poisson_draw(rng, params.alpha * T);
  std::vector<double> times(static_cast<std::size_t>(n));
  for (auto& t : times) t = T * rng.next_u01();
  std::sort(times.begin(), times.end());
  std::int64_t x = 0;
  double last = 0.0;
  for (double t : times) {
    // Duplicate doubles among the sorted uniforms are possible at ~2^-53
    // probability; bump by one ulp to keep event times strictly increasing,
    // dropping the arrival in the (astronomically rare) case the bump would
    // cross the horizon.
    if (t <= last) t = std::nextafter(last, std::numeric_limits<double>::infinity());
    if (t > T) return;
    last = t;
    detail::tick(sink, t);
    const std::int64_t nx = ctx.step_chain(rng, x);
    if (nx != x) {
      x = nx;
      if (!sink.on_event(t, x)) return;
    }
  }
}

// Path-collecting wrappers around the three drivers.
CadlagPath sample_direct(const ModelParams& params, double T, RngStream stream);
CadlagPath sample_decomposed(const ModelParams& params, double T, RngStream stream);
CadlagPath sample_subordinated(const ModelParams& params, double T, RngStream stream);

// Collector usable with any driver.
struct PathCollector {
  std::vector<PathEvent> events;
  bool on_event(double t, std::int64_t v) {
    events.push_back({t, v});
    return true;
  }
};

}  // namespace catldp
