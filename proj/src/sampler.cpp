#include "catldp/sampler.hpp"

namespace catldp {

std::int64_t poisson_draw(CounterRng& rng, double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean))
    throw std::domain_error("poisson mean must be nonnegative and finite");
  if (mean == 0.0) return 0;
  // exp(-mean) underflows around 745; halve recursively well before that
  if (mean > 600.0) {
    const double half = mean / 2.0;
    return poisson_draw(rng, half) + poisson_draw(rng, mean - half);
  }
  const double limit = std::exp(-mean);
  std::int64_t k = 0;
  double prod = 1.0;
  for (;;) {
    prod *= rng.next_u01();
    if (prod <= limit) return k;
    ++k;
  }
}

namespace detail {

SamplerContext::SamplerContext(const ModelParams& params)
    : params_(params), up_prob_(params.up_prob()) {
  const auto& p = params.jump_pmf.probs;
  if (p.empty()) throw std::domain_error("jump pmf is empty");
  jump_cdf_.resize(p.size());
  double acc = 0.0;
  for (std::size_t r = 0; r < p.size(); ++r) {
    acc += p[r];
    jump_cdf_[r] = acc;
  }
  jump_cdf_.back() = 1.0;  // absorb normalization dust so lookups never fall off
}

std::int64_t SamplerContext::draw_jump(CounterRng& rng) const {
  const double u = rng.next_u01();
  const auto it = std::upper_bound(jump_cdf_.begin(), jump_cdf_.end(), u);
  return it - jump_cdf_.begin();
}

std::int64_t SamplerContext::draw_catastrophe(CounterRng& rng, std::int64_t x) {
  if (params_.kernel.kind == KernelKind::Uniform) {
    const std::int64_t d = 1 + static_cast<std::int64_t>(rng.next_u01() * static_cast<double>(x));
    return std::min(d, x);  // u01 < 1 makes d <= x already; min guards FP edge
  }
  auto [it, inserted] = catastrophe_cdf_.try_emplace(x);
  if (inserted) {
    auto& cdf = it->second;
    cdf.resize(static_cast<std::size_t>(x));
    double acc = 0.0;
    for (std::int64_t d = 1; d <= x; ++d) {
      acc += q_mass(params_.kernel, d, x);
      cdf[static_cast<std::size_t>(d - 1)] = acc;
    }
    cdf.back() = 1.0;
  }
  const auto& cdf = it->second;
  const double u = rng.next_u01();
  const auto pos = std::upper_bound(cdf.begin(), cdf.end(), u);
  return 1 + (pos - cdf.begin());
}

std::int64_t SamplerContext::step_chain(CounterRng& rng, std::int64_t x) {
  if (x == 0) return draw_jump(rng);
  if (rng.next_u01() < up_prob_) return x + draw_jump(rng);
  return x - draw_catastrophe(rng, x);
}

}  // namespace detail

namespace {

CadlagPath collect(const ModelParams& params, double T, RngStream stream,
                   void (*driver)(const ModelParams&, double, RngStream, PathCollector&)) {
  PathCollector sink;
  driver(params, T, stream, sink);
  return CadlagPath(T, std::move(sink.events));
}

void run_direct(const ModelParams& p, double T, RngStream s, PathCollector& sink) {
  drive_direct(p, T, s, sink);
}
void run_decomposed(const ModelParams& p, double T, RngStream s, PathCollector& sink) {
  drive_decomposed(p, T, s, sink);
}
void run_subordinated(const ModelParams& p, double T, RngStream s, PathCollector& sink) {
  drive_subordinated(p, T, s, sink);
}

}  // namespace

CadlagPath sample_direct(const ModelParams& params, double T, RngStream stream) {
  return collect(params, T, stream, run_direct);
}

CadlagPath sample_decomposed(const ModelParams& params, double T, RngStream stream) {
  return collect(params, T, stream, run_decomposed);
}

CadlagPath sample_subordinated(const ModelParams& params, double T, RngStream stream) {
  return collect(params, T, stream, run_subordinated);
}

}  // namespace catldp
