#pragma once

#include <cstddef>

namespace ouestim {

// Uniform grid 0 = t_0 < t_1 < ... < t_n = horizon.
class TimeGrid {
 public:
  TimeGrid(double horizon, std::size_t steps);

  double horizon() const { return horizon_; }
  std::size_t steps() const { return steps_; }
  std::size_t size() const { return steps_ + 1; }
  double step() const { return horizon_ / static_cast<double>(steps_); }
  // t_k = horizon * k / n, so t_n equals the horizon exactly.
  double time(std::size_t k) const {
    return horizon_ * static_cast<double>(k) / static_cast<double>(steps_);
  }

  // Index of the grid point closest to t.
  std::size_t index_of(double t) const;

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  double horizon_;
  std::size_t steps_;
};

}  // namespace ouestim
