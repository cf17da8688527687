#include "ouestim/grid.hpp"

#include <cmath>

#include "ouestim/errors.hpp"

namespace ouestim {

TimeGrid::TimeGrid(double horizon, std::size_t steps) : horizon_(horizon), steps_(steps) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw DomainError("grid horizon must be positive and finite");
  }
  if (steps < 2) throw DomainError("grid needs at least 2 steps");
}

std::size_t TimeGrid::index_of(double t) const {
  if (!(t >= 0.0) || t > horizon_ * (1.0 + 1e-12)) {
    throw DomainError("time outside the grid");
  }
  const auto k = static_cast<std::size_t>(std::llround(t / horizon_ * static_cast<double>(steps_)));
  return k > steps_ ? steps_ : k;
}

}  // namespace ouestim
