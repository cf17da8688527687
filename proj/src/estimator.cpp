#include "ouestim/estimator.hpp"

#include <cmath>
#include <limits>

#include "ouestim/errors.hpp"

namespace ouestim {

namespace {

void check_index(const ScaledTrajectory& traj, std::size_t k) {
  if (k < 1 || k >= traj.xi.size()) {
    throw DomainError("estimator index must lie in [1, n]");
  }
}

}  // namespace

std::optional<double> estimate(const ScaledTrajectory& traj, std::size_t k) {
  check_index(traj, k);
  const double d = traj.d[k];
  if (!(d > 0.0)) return std::nullopt;
  return traj.xi[k] * traj.xi[k] / (2.0 * d);
}

std::optional<ErrorStatistic> error_statistic(const ScaledTrajectory& traj, std::size_t k) {
  check_index(traj, k);
  const double d = traj.d[k];
  if (!(d > 0.0)) return std::nullopt;
  const double a = traj.theta;
  const double at = a * traj.grid.time(k);

  ErrorStatistic out{};
  out.stable = (a * traj.z[k] * traj.psi[k] + traj.r_scaled[k]) / d;
  if (at <= kNaiveStatisticLimit) {
    const double theta_hat = traj.xi[k] * traj.xi[k] / (2.0 * d);
    out.naive = std::exp(at) * (theta_hat - a);
  }
  return out;
}

EstimateReport make_report(const ScaledTrajectory& traj, std::size_t k) {
  check_index(traj, k);
  EstimateReport r;
  r.t = traj.grid.time(k);
  r.index = k;
  r.d = traj.d[k];
  r.z = traj.z[k];
  r.psi = traj.psi[k];
  r.r_scaled = traj.r_scaled[k];
  const auto theta_hat = estimate(traj, k);
  const auto stat = error_statistic(traj, k);
  if (!theta_hat || !stat) {
    r.degenerate = true;
    r.theta_hat = std::numeric_limits<double>::quiet_NaN();
    r.s_stable = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  r.theta_hat = *theta_hat;
  r.s_naive = stat->naive;
  r.s_stable = stat->stable;
  return r;
}

}  // namespace ouestim
