#pragma once

#include <cstdint>
#include <vector>

namespace catldp {

struct PathEvent {
  double time;         // in (0, horizon]
  std::int64_t value;  // post-jump state
};

// Right-continuous step path on [0, horizon] starting at 0. Only
// state-changing events are stored: times strictly increase and consecutive
// values differ (an up-jump landing back on the same state is not a visible
// event of the path).
class CadlagPath {
 public:
  CadlagPath() = default;
  // Throws std::domain_error if horizon <= 0 or the event list violates the
  // invariants above.
  CadlagPath(double horizon, std::vector<PathEvent> events);

  double horizon() const { return horizon_; }
  const std::vector<PathEvent>& events() const { return events_; }

  std::int64_t value(double t) const;         // right-continuous lookup
  std::int64_t value_before(double t) const;  // left limit at t
  std::int64_t max_value() const;

 private:
  double horizon_ = 1.0;
  std::vector<PathEvent> events_;
};

inline std::int64_t path_max(const CadlagPath& path) { return path.max_value(); }

// Continuous piecewise-linear function on a uniform grid over [0,1] with
// f(0) = 0. Used both for tube centers and for the monotone parts produced
// by the variation decomposition.
struct TargetPath {
  std::vector<double> values;  // size N+1, values[0] == 0

  // Throws std::domain_error on an empty slope list.
  static TargetPath from_slopes(const std::vector<double>& slopes);
  static TargetPath linear(double slope, int cells = 1);

  int cells() const { return static_cast<int>(values.size()) - 1; }
  double dt() const { return 1.0 / cells(); }
  double slope(int cell) const;
  std::vector<double> slopes() const;
  double eval(double t) const;  // t clamped to [0,1]
  // Strictly positive away from the origin: values[i] > 0 for all i >= 1.
  // The rate function is only finite on such targets.
  bool in_ac0_plus() const;
};

// Exact sup over [0,1] of |path.value(horizon*u)/horizon - f(u)|. Between
// breakpoints of either function the difference is affine in u, so the sup is
// attained at a grid point of f, at a (scaled) jump epoch, or as a left limit
// at a jump epoch; all candidates are enumerated.
double sup_distance(const CadlagPath& path, const TargetPath& f);

}  // namespace catldp
