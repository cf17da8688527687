#pragma once

// Driver path -> scaled Ornstein-Uhlenbeck functionals.
//
// The sampled driver is treated as the piecewise-linear interpolant of its
// grid values, and every functional below is integrated exactly for that
// interpolant. With X the solution of dX = theta X dt + dG, X_0 = 0:
//
//   xi_t   = e^{-theta t} X_t          = e^{-theta t} G_t + theta Z_t
//   Z_t    = int_0^t e^{-theta s} G_s ds
//   Psi_t  = e^{-theta t} int_0^t e^{theta s} dG_s
//          = G_t - theta int_0^t e^{-theta (t-s)} G_s ds
//   D_t    = e^{-2 theta t} int_0^t X_s^2 ds
//   Rsc_t  = e^{-theta t} R_t,
//   R_t    = G_t^2 / 2 - theta int_0^t G_s^2 ds
//            + theta^2 int_0^t ds int_0^s dr G_s G_r e^{-theta (s-r)}
//
// and they satisfy, to rounding,
//
//   xi_t^2 / 2 = theta D_t + e^{-theta t} (theta Z_t Psi_t + Rsc_t).
//
// No factor e^{+theta t} is ever formed, so all fields stay finite for any
// theta * T.

#include <cstddef>
#include <span>
#include <vector>

#include "ouestim/grid.hpp"
#include "ouestim/pathgen.hpp"

namespace ouestim {

struct ScaledTrajectory {
  TimeGrid grid;
  double theta;
  std::vector<double> xi;
  std::vector<double> z;
  std::vector<double> psi;
  std::vector<double> d;
  std::vector<double> r_scaled;
};

// Exponential-polynomial integrals over one grid step [0, step], u the local
// time and h(u) = (1 - e^{-theta u}) / theta, l(u) = (u - h(u)) / theta.
struct IntervalWeights {
  double decay;         // e^{-theta step}
  double decay2;        // e^{-2 theta step}
  double z0, z1;        // int e^{-theta u} u^j
  double a0, a1;        // int e^{-theta (step-u)} u^j
  double d0, d1, d2;    // int e^{-2 theta (step-u)} h(u)^j
  double h0, h1;        // int h, int u h
  double l0, l1;        // int l, int u l

  static IntervalWeights compute(double theta, double step);
};

// Throws DomainError for theta <= 0 and DataError for non-finite path values.
ScaledTrajectory build_trajectory(const SamplePath& path, double theta);
ScaledTrajectory build_trajectory(const TimeGrid& grid, std::span<const double> driver,
                                  double theta);

// X_k = e^{theta t_k} xi_k. Throws RangeError when theta * T > 700.
std::vector<double> materialize_x(const ScaledTrajectory& traj);

// xi_k^2 / 2 - theta D_k - e^{-theta t_k} (theta Z_k Psi_k + Rsc_k).
double identity_residual(const ScaledTrajectory& traj, std::size_t k);

inline constexpr double kMaterializeLimit = 700.0;

}  // namespace ouestim
