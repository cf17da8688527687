#pragma once

// Deterministic quadrature checks of the large-time limits that drive the
// estimator's asymptotics:
//
//   V(t)      = E[Psi_t^2], its limit sigma^2 and the split
//               V = Delta_g + 2 kappa theta I_lambda - kappa theta^2 J_lambda
//   Delta_g   = g(t,t) - 2 theta int e^{-theta(t-s)} g(s,t) ds
//               + theta^2 int int e^{-theta(2t-s-r)} g(s,r)
//             = 2 e^{-2 theta t} int e^{theta s} g_s(s,0) ds
//               + 2 e^{-2 theta t} int ds e^{theta s} int_0^s dr g_sr(s,r) e^{theta r}
//   J_lambda  = e^{-2 theta t} int int e^{theta (s+r)} |s-r|^lambda
//   I_lambda  = e^{-theta t} int e^{theta s} (t-s)^lambda ds
//   E[Z_inf^2] and the cross-covariance E[G_s Psi_t].
//
// Every exponential weight is written as e^{-theta (t - s)} so nothing
// overflows for large theta * t.

#include <cstddef>
#include <string>
#include <vector>

#include "ouestim/kernels.hpp"

namespace ouestim {

inline constexpr std::size_t kMinQuadrature = 256;

// Limiting variance of Psi_t: H Gamma(2H) / theta^{2H} for fBm and sfBm,
// 2^{1-K} HK Gamma(2HK) / theta^{2HK} for bifBm, 1 / (2 theta) for BM.
double sigma_limit(const KernelSpec& spec, double theta);

// Gamma(lambda + 1) / theta^{lambda + 2}, the common limit of J_lambda and
// I_lambda / theta.
double j_lambda_limit(double theta, double lambda);

struct VarianceCurve {
  double direct;   // double quadrature of E[Psi_t^2] from the covariance
  double split;    // Delta_g + 2 kappa theta I - kappa theta^2 J
  double delta_g;
  double i_term;
  double j_term;
};
VarianceCurve variance_curve(const KernelSpec& spec, double theta, double t, std::size_t n_quad);

// Exact V(t) = (1 - e^{-2 theta t}) / (2 theta) for Brownian motion.
double bm_variance_curve(double theta, double t);

struct DeltaGIdentity {
  double lhs;  // definition, trapezoid
  double rhs;  // partial-derivative form, singularity-aware rules
  double relative_gap() const;
};
DeltaGIdentity lemma41_check(const KernelSpec& spec, double theta, double t, std::size_t n_quad);

// Delta_g(t) via the partial-derivative form.
double delta_g(const KernelSpec& spec, double theta, double t, std::size_t n_quad);

// Via the single-integral reduction; lambda > -1.
double j_lambda(double theta, double lambda, double t, std::size_t n_quad);
double i_lambda(double theta, double lambda, double t, std::size_t n_quad);
// Independent route: midpoint rule on the defining double integral with the
// diagonal cells integrated exactly.
double j_lambda_direct(double theta, double lambda, double t, std::size_t n_quad);

struct ZInfinity {
  double variance;    // truncated int int e^{-theta(r+s)} cov(r,s)
  double tail_bound;  // c (int_T^inf s^gamma e^{-theta s} ds)^2
  double t_trunc;
};
double default_truncation(double theta);
ZInfinity z_infinity_variance(const KernelSpec& spec, double theta, double t_trunc,
                              std::size_t n_quad);

// E[G_s Psi_t], 0 <= s < t.
double a4_cross(const KernelSpec& spec, double theta, double s, double t, std::size_t n_quad);

struct LimitRow {
  std::string check_name;
  std::string kernel;
  std::string params;
  double t;
  double value;
  double reference;
  double gap;
  bool pass;
};

// The full battery emitted by `verify-limits`.
std::vector<LimitRow> limit_report(const KernelSpec& spec, double theta, std::size_t n_quad);

namespace reference {

// Serial, pointwise evaluations of the same quadratures (no tables, no
// threads, no symmetry). Kept as the oracle for the parallel kernels.
double variance_direct(const KernelSpec& spec, double theta, double t, std::size_t n_quad);
double delta_g_lhs(const KernelSpec& spec, double theta, double t, std::size_t n_quad);
double z_infinity(const KernelSpec& spec, double theta, double t_trunc, std::size_t n_quad);

}  // namespace reference

}  // namespace ouestim
