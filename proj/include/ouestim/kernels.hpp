#pragma once

// Closed-form covariance functions of the Gaussian drivers and their
// smooth/singular decomposition
//
//   cov(s, r) = g(s, r) - kappa * |s - r|^{2 lambda'}
//
// with g symmetric and smooth away from the axes.

#include <string>
#include <string_view>

namespace ouestim {

enum class Family { kFbm, kSfbm, kBifbm, kBm };

std::string_view to_string(Family family);
Family family_from_string(std::string_view name);

struct KernelSpec {
  Family family = Family::kFbm;
  double hurst = 0.5;  // unused for kBm
  double k = 1.0;      // kBifbm only
  // Growth metadata: cov(t, t) <= growth_constant * t^{2 growth_exponent}.
  double growth_constant = 1.0;
  double growth_exponent = 0.5;

  static KernelSpec fbm(double hurst);
  static KernelSpec sfbm(double hurst);
  static KernelSpec bifbm(double hurst, double k);
  static KernelSpec bm();

  // Throws DomainError when the parameters violate the family's constraints.
  void validate() const;

  // Effective Hurst index entering the covariance: H, or HK for bifBm.
  double effective_hurst() const;

  std::string describe() const;
};

// E[G_s G_t]. Throws DomainError for negative times.
double cov(const KernelSpec& spec, double s, double t);

// d/dr cov(s, r) on the open region 0 < s < r.
double cov_partial_r(const KernelSpec& spec, double s, double r);

// Coefficients of the singular part: kappa and the exponent 2 lambda'.
struct SingularPart {
  double kappa;
  double exponent;
};
SingularPart singular_part(const KernelSpec& spec);

// Symmetric smooth part g, s, r >= 0.
double smooth_part_g(const KernelSpec& spec, double s, double r);

// dg/ds at (s, r); s > 0, r >= 0.
double smooth_part_gs(const KernelSpec& spec, double s, double r);

// d^2 g / ds dr at (s, r); s > 0, r > 0.
double smooth_part_gsr(const KernelSpec& spec, double s, double r);

// dg/ds(s, 0) = coefficient * s^exponent for every supported family.
struct PowerLaw {
  double coefficient;
  double exponent;
};
PowerLaw smooth_part_gs_at_zero(const KernelSpec& spec);

// x^p with 0^p = 0 for p > 0 and tiny |x| collapsed to zero.
double safe_pow(double x, double p);

}  // namespace ouestim
