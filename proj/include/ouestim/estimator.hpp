#pragma once

#include <cstddef>
#include <optional>

#include "ouestim/ou_model.hpp"

namespace ouestim {

// S_naive = e^{theta t} (theta_hat - theta) is only formed up to this theta*t.
inline constexpr double kNaiveStatisticLimit = 35.0;

struct ErrorStatistic {
  std::optional<double> naive;
  double stable;
};

struct EstimateReport {
  double t = 0.0;
  std::size_t index = 0;
  bool degenerate = false;
  double theta_hat = 0.0;
  std::optional<double> s_naive;
  double s_stable = 0.0;
  // diagnostics
  double d = 0.0;
  double z = 0.0;
  double psi = 0.0;
  double r_scaled = 0.0;
};

// theta_hat = X_t^2 / (2 int_0^t X^2) = xi_k^2 / (2 D_k). Empty when D_k = 0
// (the path has been identically zero so far). Requires k >= 1.
std::optional<double> estimate(const ScaledTrajectory& traj, std::size_t k);

// Normalized error e^{theta t}(theta_hat - theta) for the theta the
// trajectory was built with, computed directly (naive) and from the path
// decomposition (stable):
//
//   S_stable = (theta Z_k Psi_k + Rsc_k) / D_k.
//
// Empty when D_k = 0.
std::optional<ErrorStatistic> error_statistic(const ScaledTrajectory& traj, std::size_t k);

EstimateReport make_report(const ScaledTrajectory& traj, std::size_t k);

}  // namespace ouestim
