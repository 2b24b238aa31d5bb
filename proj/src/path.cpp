#include "catldp/path.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace catldp {

CadlagPath::CadlagPath(double horizon, std::vector<PathEvent> events)
    : horizon_(horizon), events_(std::move(events)) {
  if (!(horizon_ > 0.0) || !std::isfinite(horizon_))
    throw std::domain_error("path horizon must be positive and finite");
  double prev_t = 0.0;
  std::int64_t prev_v = 0;
  for (const auto& e : events_) {
    if (!(e.time > prev_t) || e.time > horizon_)
      throw std::domain_error("event times must strictly increase within (0, horizon]");
    if (e.value < 0) throw std::domain_error("path values must be nonnegative");
    if (e.value == prev_v)
      throw std::domain_error("consecutive event values must differ");
    prev_t = e.time;
    prev_v = e.value;
  }
}

std::int64_t CadlagPath::value(double t) const {
  // first event strictly after t; the state is the one before it
  auto it = std::upper_bound(events_.begin(), events_.end(), t,
                             [](double lhs, const PathEvent& e) { return lhs < e.time; });
  return it == events_.begin() ? 0 : std::prev(it)->value;
}

std::int64_t CadlagPath::value_before(double t) const {
  auto it = std::lower_bound(events_.begin(), events_.end(), t,
                             [](const PathEvent& e, double rhs) { return e.time < rhs; });
  return it == events_.begin() ? 0 : std::prev(it)->value;
}

std::int64_t CadlagPath::max_value() const {
  std::int64_t m = 0;
  for (const auto& e : events_) m = std::max(m, e.value);
  return m;
}

TargetPath TargetPath::from_slopes(const std::vector<double>& slopes) {
  if (slopes.empty()) throw std::domain_error("target path needs at least one cell");
  TargetPath f;
  f.values.resize(slopes.size() + 1);
  f.values[0] = 0.0;
  const double dt = 1.0 / static_cast<double>(slopes.size());
  for (std::size_t i = 0; i < slopes.size(); ++i)
    f.values[i + 1] = f.values[i] + slopes[i] * dt;
  return f;
}

TargetPath TargetPath::linear(double slope, int cells) {
  return from_slopes(std::vector<double>(static_cast<std::size_t>(std::max(cells, 1)), slope));
}

double TargetPath::slope(int cell) const {
  return (values[static_cast<std::size_t>(cell) + 1] - values[static_cast<std::size_t>(cell)]) *
         static_cast<double>(cells());
}

std::vector<double> TargetPath::slopes() const {
  std::vector<double> out(static_cast<std::size_t>(cells()));
  for (int i = 0; i < cells(); ++i) out[static_cast<std::size_t>(i)] = slope(i);
  return out;
}

double TargetPath::eval(double t) const {
  if (t <= 0.0) return values.front();
  if (t >= 1.0) return values.back();
  const int n = cells();
  int i = static_cast<int>(t * n);
  i = std::min(i, n - 1);
  const double t0 = static_cast<double>(i) / n;
  return values[static_cast<std::size_t>(i)] +
         (t - t0) * n *
             (values[static_cast<std::size_t>(i) + 1] - values[static_cast<std::size_t>(i)]);
}

bool TargetPath::in_ac0_plus() const {
  for (std::size_t i = 1; i < values.size(); ++i)
    if (!(values[i] > 0.0)) return false;
  return true;
}

double sup_distance(const CadlagPath& path, const TargetPath& f) {
  if (f.values.size() < 2) throw std::domain_error("target path has no cells");
  const double T = path.horizon();
  const auto& events = path.events();

  // scaled jump epochs and post-jump values
  std::vector<double> us(events.size());
  std::vector<std::int64_t> vals(events.size());
  for (std::size_t j = 0; j < events.size(); ++j) {
    us[j] = events[j].time / T;
    vals[j] = events[j].value;
  }

  const auto state_at = [&](double u) -> double {
    auto it = std::upper_bound(us.begin(), us.end(), u);
    return it == us.begin() ? 0.0
                            : static_cast<double>(vals[static_cast<std::size_t>(it - us.begin()) - 1]) / T;
  };
  const auto state_before = [&](double u) -> double {
    auto it = std::lower_bound(us.begin(), us.end(), u);
    return it == us.begin() ? 0.0
                            : static_cast<double>(vals[static_cast<std::size_t>(it - us.begin()) - 1]) / T;
  };

  double best = 0.0;
  const auto consider = [&](double u) {
    const double fu = f.eval(u);
    best = std::max(best, std::abs(state_at(u) - fu));
    if (u > 0.0) best = std::max(best, std::abs(state_before(u) - fu));
  };

  consider(0.0);
  consider(1.0);
  const int n = f.cells();
  for (int i = 1; i < n; ++i) consider(static_cast<double>(i) / n);
  for (double u : us) consider(u);
  return best;
}

}  // namespace catldp
