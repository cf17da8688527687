#include "ouestim/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ouestim/errors.hpp"

namespace ouestim {

namespace {

void require_nonnegative(double s, double t) {
  if (!(s >= 0.0) || !(t >= 0.0)) {
    throw DomainError("covariance evaluated at a negative time");
  }
}

}  // namespace

std::string_view to_string(Family family) {
  switch (family) {
    case Family::kFbm:
      return "fbm";
    case Family::kSfbm:
      return "sfbm";
    case Family::kBifbm:
      return "bifbm";
    case Family::kBm:
      return "bm";
  }
  return "unknown";
}

Family family_from_string(std::string_view name) {
  if (name == "fbm") return Family::kFbm;
  if (name == "sfbm") return Family::kSfbm;
  if (name == "bifbm") return Family::kBifbm;
  if (name == "bm") return Family::kBm;
  throw UsageError("unknown kernel family '" + std::string(name) +
                   "' (expected fbm, sfbm, bifbm or bm)");
}

KernelSpec KernelSpec::fbm(double hurst) {
  KernelSpec spec{Family::kFbm, hurst, 1.0, 1.0, hurst};
  spec.validate();
  return spec;
}

KernelSpec KernelSpec::sfbm(double hurst) {
  // cov(t,t) = (2 - 2^{2H-1}) t^{2H} <= 2 t^{2H}
  KernelSpec spec{Family::kSfbm, hurst, 1.0, 2.0, hurst};
  spec.validate();
  return spec;
}

KernelSpec KernelSpec::bifbm(double hurst, double k) {
  KernelSpec spec{Family::kBifbm, hurst, k, 2.0, hurst * k};
  spec.validate();
  return spec;
}

KernelSpec KernelSpec::bm() { return KernelSpec{Family::kBm, 0.5, 1.0, 1.0, 0.5}; }

void KernelSpec::validate() const {
  if (family != Family::kBm && !(hurst > 0.0 && hurst < 1.0)) {
    throw DomainError("Hurst parameter must lie in (0, 1)");
  }
  if (family == Family::kBifbm) {
    if (!(k > 0.0 && k <= 1.0)) {
      throw DomainError("bifractional K must lie in (0, 1]");
    }
    if (!(hurst * k > 0.0 && hurst * k < 1.0)) {
      throw DomainError("bifractional HK must lie in (0, 1)");
    }
  }
  if (!(growth_constant > 0.0) || !(growth_exponent > 0.0)) {
    throw DomainError("growth constants must be positive");
  }
}

double KernelSpec::effective_hurst() const {
  switch (family) {
    case Family::kBifbm:
      return hurst * k;
    case Family::kBm:
      return 0.5;
    default:
      return hurst;
  }
}

std::string KernelSpec::describe() const {
  std::ostringstream os;
  os << to_string(family);
  if (family != Family::kBm) os << " H=" << hurst;
  if (family == Family::kBifbm) os << " K=" << k;
  return os.str();
}

double safe_pow(double x, double p) {
  if (std::abs(x) < 1e-300) return p > 0.0 ? 0.0 : (p == 0.0 ? 1.0 : INFINITY);
  return std::pow(x, p);
}

double cov(const KernelSpec& spec, double s, double t) {
  require_nonnegative(s, t);
  if (s == 0.0 || t == 0.0) return 0.0;  // G_0 = 0, without rounding residue
  const double h2 = 2.0 * spec.hurst;
  const double lag = std::abs(t - s);
  switch (spec.family) {
    case Family::kFbm:
      return 0.5 * (safe_pow(t, h2) + safe_pow(s, h2) - safe_pow(lag, h2));
    case Family::kSfbm:
      return safe_pow(t, h2) + safe_pow(s, h2) -
             0.5 * (safe_pow(t + s, h2) + safe_pow(lag, h2));
    case Family::kBifbm: {
      const double base = safe_pow(t, h2) + safe_pow(s, h2);
      return std::exp2(-spec.k) *
             (safe_pow(base, spec.k) - safe_pow(lag, h2 * spec.k));
    }
    case Family::kBm:
      return std::min(s, t);
  }
  return 0.0;
}

double cov_partial_r(const KernelSpec& spec, double s, double r) {
  if (!(s > 0.0) || !(r > s)) {
    throw DomainError("cov_partial_r requires 0 < s < r");
  }
  const double h = spec.hurst;
  const double a = 2.0 * h - 1.0;
  switch (spec.family) {
    case Family::kFbm:
      return h * (std::pow(r, a) - std::pow(r - s, a));
    case Family::kSfbm:
      return h * (2.0 * std::pow(r, a) - std::pow(r + s, a) - std::pow(r - s, a));
    case Family::kBifbm: {
      const double k = spec.k;
      const double base = std::pow(s, 2.0 * h) + std::pow(r, 2.0 * h);
      return std::exp2(1.0 - k) * h * k *
             (std::pow(r, a) * std::pow(base, k - 1.0) -
              std::pow(r - s, 2.0 * h * k - 1.0));
    }
    case Family::kBm:
      return 0.0;
  }
  return 0.0;
}

SingularPart singular_part(const KernelSpec& spec) {
  switch (spec.family) {
    case Family::kFbm:
    case Family::kSfbm:
      return {0.5, 2.0 * spec.hurst};
    case Family::kBifbm:
      return {std::exp2(-spec.k), 2.0 * spec.hurst * spec.k};
    case Family::kBm:
      return {0.5, 1.0};
  }
  return {0.0, 0.0};
}

double smooth_part_g(const KernelSpec& spec, double s, double r) {
  require_nonnegative(s, r);
  const double h2 = 2.0 * spec.hurst;
  switch (spec.family) {
    case Family::kFbm:
      return 0.5 * (safe_pow(s, h2) + safe_pow(r, h2));
    case Family::kSfbm:
      return safe_pow(s, h2) + safe_pow(r, h2) - 0.5 * safe_pow(s + r, h2);
    case Family::kBifbm:
      return std::exp2(-spec.k) * safe_pow(safe_pow(s, h2) + safe_pow(r, h2), spec.k);
    case Family::kBm:
      return 0.5 * (s + r);
  }
  return 0.0;
}

double smooth_part_gs(const KernelSpec& spec, double s, double r) {
  if (!(s > 0.0) || !(r >= 0.0)) {
    throw DomainError("smooth_part_gs requires s > 0 and r >= 0");
  }
  const double h = spec.hurst;
  const double a = 2.0 * h - 1.0;
  switch (spec.family) {
    case Family::kFbm:
      return h * std::pow(s, a);
    case Family::kSfbm:
      return 2.0 * h * std::pow(s, a) - h * std::pow(s + r, a);
    case Family::kBifbm: {
      const double k = spec.k;
      const double base = std::pow(s, 2.0 * h) + safe_pow(r, 2.0 * h);
      return std::exp2(1.0 - k) * h * k * std::pow(s, a) * std::pow(base, k - 1.0);
    }
    case Family::kBm:
      return 0.5;
  }
  return 0.0;
}

double smooth_part_gsr(const KernelSpec& spec, double s, double r) {
  if (!(s > 0.0) || !(r > 0.0)) {
    throw DomainError("smooth_part_gsr requires s > 0 and r > 0");
  }
  const double h = spec.hurst;
  switch (spec.family) {
    case Family::kFbm:
    case Family::kBm:
      return 0.0;
    case Family::kSfbm:
      return -h * (2.0 * h - 1.0) * std::pow(s + r, 2.0 * h - 2.0);
    case Family::kBifbm: {
      const double k = spec.k;
      const double base = std::pow(s, 2.0 * h) + std::pow(r, 2.0 * h);
      return std::exp2(2.0 - k) * h * h * k * (k - 1.0) *
             std::pow(s * r, 2.0 * h - 1.0) * std::pow(base, k - 2.0);
    }
  }
  return 0.0;
}

PowerLaw smooth_part_gs_at_zero(const KernelSpec& spec) {
  switch (spec.family) {
    case Family::kFbm:
    case Family::kSfbm:
      return {spec.hurst, 2.0 * spec.hurst - 1.0};
    case Family::kBifbm:
      return {std::exp2(1.0 - spec.k) * spec.hurst * spec.k,
              2.0 * spec.hurst * spec.k - 1.0};
    case Family::kBm:
      return {0.5, 0.0};
  }
  return {0.0, 0.0};
}

}  // namespace ouestim
