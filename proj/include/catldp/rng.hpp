#pragma once

#include <cmath>
#include <cstdint>

namespace catldp {

// Identifies an independent random stream. Replicate i of a run uses
// stream = i (plus a salt when several samplers share one run), so results
// never depend on how replicates are split across workers.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

// Counter-based generator: a splitmix64-style finalizer applied to a keyed
// counter. Stateless apart from the counter, identical output for identical
// (seed, stream) on every platform, and streams can be created in any order
// without coordination.
class CounterRng {
 public:
  explicit CounterRng(RngStream s) noexcept : CounterRng(s.seed, s.stream) {}

  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_(mix(seed + 0x9E3779B97F4A7C15ULL) ^
             mix(~stream * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL)) {}

  std::uint64_t next_u64() noexcept {
    counter_ += 0x9E3779B97F4A7C15ULL;
    return mix(key_ ^ counter_);
  }

  // Uniform on the open interval (0,1). The +0.5 centering keeps both
  // endpoints unreachable, so log and inverse-CDF transforms stay finite.
  double next_u01() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double next_exponential(double rate) noexcept {
    return -std::log1p(-next_u01()) / rate;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Poisson draw by the product-of-uniforms method, split recursively for large
// means so the running product never underflows.
std::int64_t poisson_draw(CounterRng& rng, double mean);

}  // namespace catldp
