#include "ouestim/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <algorithm>
#include <cmath>

#include "ouestim/errors.hpp"

namespace ouestim::quad {

namespace {
using Rule = boost::math::quadrature::gauss<double, 8>;
}

double power_exp_integral(double beta, double rate, double shift, double t,
                          std::size_t panels) {
  if (!(beta > -1.0)) throw DomainError("power_exp_integral needs beta > -1");
  if (panels == 0) throw UsageError("power_exp_integral needs at least one panel");
  if (t <= 0.0) return 0.0;
  const double h = t / static_cast<double>(panels);
  auto f = [&](double u) { return std::pow(u, beta) * std::exp(rate * u + shift); };
  // Near the origin: term-by-term integration of the exponential series,
  // sum_k (rate a)^k / (k! (beta + k + 1)), kept to |rate a| <= 1.
  const double a = rate == 0.0 ? h : std::min(h, 1.0 / std::abs(rate));
  const double x = rate * a;
  double term = 1.0;
  double series = 1.0 / (beta + 1.0);
  for (int k = 1; k < 60 && std::abs(term) > 1e-18; ++k) {
    term *= x / k;
    series += term / (beta + k + 1.0);
  }
  double total = std::exp(shift) * std::pow(a, beta + 1.0) * series;
  if (a < h) total += Rule::integrate(f, a, h);
  for (std::size_t p = 1; p < panels; ++p) {
    total += Rule::integrate(f, static_cast<double>(p) * h, static_cast<double>(p + 1) * h);
  }
  return total;
}

double smooth_integral(const std::function<double(double)>& f, double a, double b,
                       std::size_t panels) {
  if (panels == 0) throw UsageError("smooth_integral needs at least one panel");
  const double h = (b - a) / static_cast<double>(panels);
  double total = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    total += Rule::integrate(f, a + static_cast<double>(p) * h, a + static_cast<double>(p + 1) * h);
  }
  return total;
}

std::vector<double> trapezoid_weights(std::size_t n, double h) {
  std::vector<double> w(n + 1, h);
  w.front() = 0.5 * h;
  w.back() = 0.5 * h;
  return w;
}

}  // namespace ouestim::quad
