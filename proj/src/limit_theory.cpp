#include "ouestim/limit_theory.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "ouestim/errors.hpp"
#include "ouestim/quadrature.hpp"

namespace ouestim {

namespace {

void check_args(const KernelSpec& spec, double theta, double t, std::size_t n_quad) {
  spec.validate();
  if (!(theta > 0.0)) throw DomainError("theta must be positive");
  if (!(t > 0.0)) throw DomainError("evaluation time must be positive");
  if (n_quad < kMinQuadrature) {
    throw UsageError("quadrature size must be at least " + std::to_string(kMinQuadrature));
  }
}

// Kernel values on the nodes x_i = (i + offset) h, i < count, with every
// power that depends on a single index (or on i + j, |i - j|) tabulated.
class GridTables {
 public:
  GridTables(const KernelSpec& spec, double h, double offset, std::size_t count)
      : spec_(spec) {
    const double h2 = 2.0 * spec.hurst;
    const SingularPart sp = singular_part(spec);
    const bool bm = spec.family == Family::kBm;
    power_.resize(count);
    lag_.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
      const double x = (static_cast<double>(i) + offset) * h;
      power_[i] = bm ? x : safe_pow(x, h2);
      lag_[i] = safe_pow(static_cast<double>(i) * h, sp.exponent);
    }
    if (spec.family == Family::kSfbm) {
      sum_.resize(2 * count);
      sum_deriv_.resize(2 * count);
      for (std::size_t m = 0; m < 2 * count; ++m) {
        const double x = (static_cast<double>(m) + 2.0 * offset) * h;
        sum_[m] = safe_pow(x, h2);
        sum_deriv_[m] = x > 0.0 ? std::pow(x, h2 - 2.0) : 0.0;
      }
    }
    if (spec.family == Family::kBifbm) {
      root_.resize(count);
      for (std::size_t i = 0; i < count; ++i) {
        const double x = (static_cast<double>(i) + offset) * h;
        root_[i] = x > 0.0 ? std::pow(x, h2 - 1.0) : 0.0;
      }
    }
  }

  // sum_ij w_i w_j cov(x_i, x_j)
  double cov_form(std::span<const double> w) const {
    const double* p = power_.data();
    const double* d = lag_.data();
    switch (spec_.family) {
      case Family::kFbm:
      case Family::kBm:
        return quad::symmetric_form(w, [=](std::size_t i, std::size_t j) {
          return 0.5 * (p[i] + p[j] - d[i - j]);
        });
      case Family::kSfbm: {
        const double* a = sum_.data();
        return quad::symmetric_form(w, [=](std::size_t i, std::size_t j) {
          return p[i] + p[j] - 0.5 * (a[i + j] + d[i - j]);
        });
      }
      case Family::kBifbm: {
        const double k = spec_.k;
        const double c = std::exp2(-k);
        return quad::symmetric_form(w, [=](std::size_t i, std::size_t j) {
          return c * (std::pow(p[i] + p[j], k) - d[i - j]);
        });
      }
    }
    return 0.0;
  }

  // sum_ij w_i w_j g(x_i, x_j)
  double g_form(std::span<const double> w) const {
    const double* p = power_.data();
    switch (spec_.family) {
      case Family::kFbm:
      case Family::kBm:
        return quad::symmetric_form(w, [=](std::size_t i, std::size_t j) {
          return 0.5 * (p[i] + p[j]);
        });
      case Family::kSfbm: {
        const double* a = sum_.data();
        return quad::symmetric_form(w, [=](std::size_t i, std::size_t j) {
          return p[i] + p[j] - 0.5 * a[i + j];
        });
      }
      case Family::kBifbm: {
        const double k = spec_.k;
        const double c = std::exp2(-k);
        return quad::symmetric_form(w, [=](std::size_t i, std::size_t j) {
          return c * std::pow(p[i] + p[j], k);
        });
      }
    }
    return 0.0;
  }

  // Midpoint rule over the triangle r < s of w_i w_j g_sr(x_i, x_j).
  double gsr_triangle(std::span<const double> w) const {
    const double h = spec_.hurst;
    switch (spec_.family) {
      case Family::kFbm:
      case Family::kBm:
        return 0.0;
      case Family::kSfbm: {
        const double* a = sum_deriv_.data();
        const double c = -h * (2.0 * h - 1.0);
        return quad::lower_triangle_form(w, [=](std::size_t i, std::size_t j) {
          return c * a[i + j];
        });
      }
      case Family::kBifbm: {
        const double k = spec_.k;
        const double c = std::exp2(2.0 - k) * h * h * k * (k - 1.0);
        const double* p = power_.data();
        const double* q = root_.data();
        return quad::lower_triangle_form(w, [=](std::size_t i, std::size_t j) {
          return c * q[i] * q[j] * std::pow(p[i] + p[j], k - 2.0);
        });
      }
    }
    return 0.0;
  }

 private:
  KernelSpec spec_;
  std::vector<double> power_;      // x_i^{2H}
  std::vector<double> lag_;        // (m h)^{2 lambda'}
  std::vector<double> sum_;        // ((m + 2 offset) h)^{2H}
  std::vector<double> sum_deriv_;  // ((m + 2 offset) h)^{2H - 2}
  std::vector<double> root_;       // x_i^{2H - 1}
};

// Trapezoid nodes on [0, t] weighted by e^{-theta (t - x_i)}.
std::vector<double> discounted_trapezoid(double theta, double t, std::size_t n) {
  const double h = t / static_cast<double>(n);
  std::vector<double> w = quad::trapezoid_weights(n, h);
  for (std::size_t i = 0; i <= n; ++i) {
    w[i] *= std::exp(-theta * (t - static_cast<double>(i) * h));
  }
  return w;
}

std::string format_params(const KernelSpec& spec, double theta, const std::string& extra = {}) {
  std::ostringstream os;
  if (spec.family != Family::kBm) os << "H=" << spec.hurst << ";";
  if (spec.family == Family::kBifbm) os << "K=" << spec.k << ";";
  os << "theta=" << theta;
  if (!extra.empty()) os << ";" << extra;
  return os.str();
}

}  // namespace

double sigma_limit(const KernelSpec& spec, double theta) {
  spec.validate();
  if (!(theta > 0.0)) throw DomainError("theta must be positive");
  switch (spec.family) {
    case Family::kFbm:
    case Family::kSfbm: {
      const double h = spec.hurst;
      return h * std::tgamma(2.0 * h) / std::pow(theta, 2.0 * h);
    }
    case Family::kBifbm: {
      const double hk = spec.hurst * spec.k;
      return std::exp2(1.0 - spec.k) * hk * std::tgamma(2.0 * hk) / std::pow(theta, 2.0 * hk);
    }
    case Family::kBm:
      return 0.5 / theta;
  }
  return 0.0;
}

double j_lambda_limit(double theta, double lambda) {
  return std::tgamma(lambda + 1.0) / std::pow(theta, lambda + 2.0);
}

double bm_variance_curve(double theta, double t) {
  return -std::expm1(-2.0 * theta * t) / (2.0 * theta);
}

double j_lambda(double theta, double lambda, double t, std::size_t n_quad) {
  if (!(lambda > -1.0)) throw DomainError("J_lambda requires lambda > -1");
  if (!(theta > 0.0) || !(t > 0.0)) throw DomainError("J_lambda requires theta, t > 0");
  const double head = quad::power_exp_integral(lambda, -theta, 0.0, t, n_quad);
  const double tail = quad::power_exp_integral(lambda, theta, -2.0 * theta * t, t, n_quad);
  return (head - tail) / theta;
}

double i_lambda(double theta, double lambda, double t, std::size_t n_quad) {
  if (!(lambda > -1.0)) throw DomainError("I_lambda requires lambda > -1");
  if (!(theta > 0.0) || !(t > 0.0)) throw DomainError("I_lambda requires theta, t > 0");
  return quad::power_exp_integral(lambda, -theta, 0.0, t, n_quad);
}

double j_lambda_direct(double theta, double lambda, double t, std::size_t n_quad) {
  if (!(lambda > -1.0)) throw DomainError("J_lambda requires lambda > -1");
  if (!(theta > 0.0) || !(t > 0.0)) throw DomainError("J_lambda requires theta, t > 0");
  const std::size_t n = n_quad;
  const double h = t / static_cast<double>(n);
  std::vector<double> w(n);
  std::vector<double> lag(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = h * std::exp(-theta * (t - (static_cast<double>(i) + 0.5) * h));
    lag[i] = std::pow(static_cast<double>(i) * h, lambda);
  }
  // Mean of |s - r|^lambda over a diagonal cell.
  lag[0] = 2.0 * std::pow(h, lambda) / ((lambda + 1.0) * (lambda + 2.0));
  const double* d = lag.data();
  return quad::symmetric_form(std::span<const double>(w),
                              [=](std::size_t i, std::size_t j) { return d[i - j]; });
}

double delta_g(const KernelSpec& spec, double theta, double t, std::size_t n_quad) {
  check_args(spec, theta, t, n_quad);
  const PowerLaw gs0 = smooth_part_gs_at_zero(spec);
  // 2 e^{-2 theta t} int_0^t e^{theta s} c s^beta ds
  const double boundary =
      2.0 * gs0.coefficient *
      quad::power_exp_integral(gs0.exponent, theta, -2.0 * theta * t, t, n_quad);
  if (spec.family == Family::kFbm || spec.family == Family::kBm) return boundary;

  const std::size_t n = n_quad;
  const double h = t / static_cast<double>(n);
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = h * std::exp(-theta * (t - (static_cast<double>(i) + 0.5) * h));
  }
  const GridTables tables(spec, h, 0.5, n);
  return boundary + 2.0 * tables.gsr_triangle(w);
}

DeltaGIdentity lemma41_check(const KernelSpec& spec, double theta, double t, std::size_t n_quad) {
  check_args(spec, theta, t, n_quad);
  const std::size_t n = n_quad;
  const double h = t / static_cast<double>(n);
  const std::vector<double> w = discounted_trapezoid(theta, t, n);
  double row = 0.0;
  for (std::size_t i = 0; i <= n; ++i) row += w[i] * smooth_part_g(spec, static_cast<double>(i) * h, t);
  const GridTables tables(spec, h, 0.0, n + 1);
  const double lhs = smooth_part_g(spec, t, t) - 2.0 * theta * row + theta * theta * tables.g_form(w);
  return DeltaGIdentity{lhs, delta_g(spec, theta, t, n_quad)};
}

double DeltaGIdentity::relative_gap() const {
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  return scale > 0.0 ? std::abs(lhs - rhs) / scale : 0.0;
}

VarianceCurve variance_curve(const KernelSpec& spec, double theta, double t, std::size_t n_quad) {
  check_args(spec, theta, t, n_quad);
  const std::size_t n = n_quad;
  const double h = t / static_cast<double>(n);
  const std::vector<double> w = discounted_trapezoid(theta, t, n);
  double row = 0.0;
  for (std::size_t i = 0; i <= n; ++i) row += w[i] * cov(spec, static_cast<double>(i) * h, t);
  const GridTables tables(spec, h, 0.0, n + 1);

  VarianceCurve out{};
  out.direct = cov(spec, t, t) - 2.0 * theta * row + theta * theta * tables.cov_form(w);

  const SingularPart sp = singular_part(spec);
  out.delta_g = delta_g(spec, theta, t, n_quad);
  out.i_term = i_lambda(theta, sp.exponent, t, n_quad);
  out.j_term = j_lambda(theta, sp.exponent, t, n_quad);
  out.split = out.delta_g + 2.0 * sp.kappa * theta * out.i_term -
              sp.kappa * theta * theta * out.j_term;
  return out;
}

double default_truncation(double theta) { return std::max(40.0 / theta, 40.0); }

ZInfinity z_infinity_variance(const KernelSpec& spec, double theta, double t_trunc,
                              std::size_t n_quad) {
  check_args(spec, theta, t_trunc, n_quad);
  if (t_trunc < 20.0 / theta) throw UsageError("truncation horizon must be at least 20 / theta");
  const std::size_t n = n_quad;
  const double h = t_trunc / static_cast<double>(n);
  std::vector<double> w = quad::trapezoid_weights(n, h);
  for (std::size_t i = 0; i <= n; ++i) w[i] *= std::exp(-theta * static_cast<double>(i) * h);
  const GridTables tables(spec, h, 0.0, n + 1);

  ZInfinity out{};
  out.t_trunc = t_trunc;
  out.variance = tables.cov_form(w);
  const double gamma = spec.growth_exponent;
  const double tail = boost::math::tgamma(gamma + 1.0, theta * t_trunc) / std::pow(theta, gamma + 1.0);
  out.tail_bound = spec.growth_constant * tail * tail;
  return out;
}

double a4_cross(const KernelSpec& spec, double theta, double s, double t, std::size_t n_quad) {
  spec.validate();
  if (!(theta > 0.0)) throw DomainError("theta must be positive");
  if (!(s >= 0.0) || !(s < t)) throw DomainError("a4_cross requires 0 <= s < t");
  if (n_quad < kMinQuadrature) {
    throw UsageError("quadrature size must be at least " + std::to_string(kMinQuadrature));
  }
  if (s == 0.0) return 0.0;  // G_0 = 0

  // Integration by parts on [s, t] with cov = g - kappa |s - r|^{2 lambda'}:
  //   e^{-theta (t-s)} cov(s,s) + int_s^t e^{-theta(t-r)} dg/dr(s,r) dr
  //   - 2 kappa lambda' int_0^{t-s} u^{2 lambda' - 1} e^{-theta(t-s-u)} du
  //   - theta int_0^s e^{-theta(t-r)} cov(s,r) dr
  const SingularPart sp = singular_part(spec);
  const double diag = std::exp(-theta * (t - s)) * cov(spec, s, s);
  const double smooth = quad::smooth_integral(
      [&](double r) { return std::exp(-theta * (t - r)) * smooth_part_gs(spec, r, s); }, s, t,
      n_quad);
  const double singular =
      sp.kappa * sp.exponent *
      quad::power_exp_integral(sp.exponent - 1.0, theta, -theta * (t - s), t - s, n_quad);
  const double before = quad::smooth_integral(
      [&](double r) { return std::exp(-theta * (t - r)) * cov(spec, s, r); }, 0.0, s, n_quad);
  return diag + smooth - singular - theta * before;
}

std::vector<LimitRow> limit_report(const KernelSpec& spec, double theta, std::size_t n_quad) {
  spec.validate();
  const std::string kernel(to_string(spec.family));
  std::vector<LimitRow> rows;
  auto rel = [](double value, double ref) {
    return std::abs(value - ref) / std::max(std::abs(ref), 1e-300);
  };

  const SingularPart sp = singular_part(spec);
  std::vector<double> lambdas{0.0, 1.0};
  if (sp.exponent != 0.0 && sp.exponent != 1.0) lambdas.push_back(sp.exponent);
  const std::size_t n_1d = std::max<std::size_t>(n_quad, 4096);
  for (double lambda : lambdas) {
    std::ostringstream extra;
    extra << "lambda=" << lambda;
    const double j = j_lambda(theta, lambda, 30.0, n_1d);
    const double limit = j_lambda_limit(theta, lambda);
    rows.push_back({"j_lambda_limit", kernel, format_params(spec, theta, extra.str()), 30.0, j,
                    limit, std::abs(j - limit), std::abs(j - limit) <= 1e-5});
    const double i_over = i_lambda(theta, lambda, 30.0, n_1d) / theta;
    rows.push_back({"j_minus_i_over_theta", kernel, format_params(spec, theta, extra.str()), 30.0, j,
                    i_over, std::abs(j - i_over), std::abs(j - i_over) <= 1e-6});
  }

  const DeltaGIdentity l41 = lemma41_check(spec, theta, 5.0, n_quad);
  rows.push_back({"delta_g_identity", kernel, format_params(spec, theta), 5.0, l41.lhs, l41.rhs,
                  l41.relative_gap(), l41.relative_gap() <= 1e-3});

  const VarianceCurve v5 = variance_curve(spec, theta, 5.0, n_quad);
  rows.push_back({"variance_routes", kernel, format_params(spec, theta), 5.0, v5.direct, v5.split,
                  rel(v5.direct, v5.split), rel(v5.direct, v5.split) <= 1e-3});

  const double sigma2 = sigma_limit(spec, theta);
  const VarianceCurve v20 = variance_curve(spec, theta, 20.0, n_quad);
  rows.push_back({"a3_limiting_variance", kernel, format_params(spec, theta), 20.0, v20.direct,
                  sigma2, rel(v20.direct, sigma2), rel(v20.direct, sigma2) <= 1e-2});

  const double t_trunc = default_truncation(theta);
  const ZInfinity zi = z_infinity_variance(spec, theta, t_trunc, n_quad);
  const double scaled = theta * theta * zi.variance;
  rows.push_back({"z_infinity_relation", kernel, format_params(spec, theta), t_trunc, scaled,
                  sigma2, rel(scaled, sigma2), rel(scaled, sigma2) <= 1e-2});

  double previous = INFINITY;
  for (double t : {10.0, 20.0, 30.0}) {
    const double a4 = a4_cross(spec, theta, 1.0, t, n_quad);
    const bool decreasing = std::abs(a4) <= previous;
    const bool pass = t < 30.0 ? decreasing : (decreasing && std::abs(a4) <= 1e-2);
    rows.push_back({"a4_decorrelation", kernel, format_params(spec, theta, "s=1"), t, a4, 0.0,
                    std::abs(a4), pass});
    previous = std::abs(a4);
  }
  return rows;
}

namespace reference {

double variance_direct(const KernelSpec& spec, double theta, double t, std::size_t n_quad) {
  const std::size_t n = n_quad;
  const double h = t / static_cast<double>(n);
  const std::vector<double> w = discounted_trapezoid(theta, t, n);
  double row = 0.0;
  double square = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    const double si = static_cast<double>(i) * h;
    row += w[i] * cov(spec, si, t);
    for (std::size_t j = 0; j <= n; ++j) {
      square += w[i] * w[j] * cov(spec, si, static_cast<double>(j) * h);
    }
  }
  return cov(spec, t, t) - 2.0 * theta * row + theta * theta * square;
}

double delta_g_lhs(const KernelSpec& spec, double theta, double t, std::size_t n_quad) {
  const std::size_t n = n_quad;
  const double h = t / static_cast<double>(n);
  const std::vector<double> w = discounted_trapezoid(theta, t, n);
  double row = 0.0;
  double square = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    const double si = static_cast<double>(i) * h;
    row += w[i] * smooth_part_g(spec, si, t);
    for (std::size_t j = 0; j <= n; ++j) {
      square += w[i] * w[j] * smooth_part_g(spec, si, static_cast<double>(j) * h);
    }
  }
  return smooth_part_g(spec, t, t) - 2.0 * theta * row + theta * theta * square;
}

double z_infinity(const KernelSpec& spec, double theta, double t_trunc, std::size_t n_quad) {
  const std::size_t n = n_quad;
  const double h = t_trunc / static_cast<double>(n);
  std::vector<double> w = quad::trapezoid_weights(n, h);
  for (std::size_t i = 0; i <= n; ++i) w[i] *= std::exp(-theta * static_cast<double>(i) * h);
  double total = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = 0; j <= n; ++j) {
      total += w[i] * w[j] * cov(spec, static_cast<double>(i) * h, static_cast<double>(j) * h);
    }
  }
  return total;
}

}  // namespace reference

}  // namespace ouestim
