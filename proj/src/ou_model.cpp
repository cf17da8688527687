#include "ouestim/ou_model.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <string>

#include "ouestim/errors.hpp"

namespace ouestim {

namespace {

// (e^z - 1) / z
double phi1(double z) {
  if (z == 0.0) return 1.0;
  return std::expm1(z) / z;
}

// (e^z - 1 - z) / z^2
double phi2(double z) {
  if (std::abs(z) > 0.5) return (std::expm1(z) - z) / (z * z);
  double term = 0.5;
  double sum = 0.5;
  for (int n = 1; n < 30; ++n) {
    term *= z / static_cast<double>(n + 2);
    sum += term;
  }
  return sum;
}

template <class F>
double integrate_step(F&& f, double step, double rate) {
  using Rule = boost::math::quadrature::gauss<double, 20>;
  const auto panels = static_cast<int>(std::max(1.0, std::ceil(2.0 * rate * step)));
  const double width = step / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    total += Rule::integrate(f, p * width, (p + 1) * width);
  }
  return total;
}

}  // namespace

IntervalWeights IntervalWeights::compute(double theta, double step) {
  const double a = theta;
  auto h = [a](double u) { return u * phi1(-a * u); };
  auto l = [a](double u) { return u * u * phi2(-a * u); };
  auto wz = [a](double u) { return std::exp(-a * u); };
  auto wa = [a, step](double u) { return std::exp(-a * (step - u)); };
  auto wd = [a, step](double u) { return std::exp(-2.0 * a * (step - u)); };

  IntervalWeights w{};
  w.decay = std::exp(-a * step);
  w.decay2 = std::exp(-2.0 * a * step);
  w.z0 = integrate_step(wz, step, a);
  w.z1 = integrate_step([&](double u) { return wz(u) * u; }, step, a);
  w.a0 = integrate_step(wa, step, a);
  w.a1 = integrate_step([&](double u) { return wa(u) * u; }, step, a);
  w.d0 = integrate_step(wd, step, a);
  w.d1 = integrate_step([&](double u) { return wd(u) * h(u); }, step, a);
  w.d2 = integrate_step([&](double u) { return wd(u) * h(u) * h(u); }, step, a);
  w.h0 = integrate_step(h, step, a);
  w.h1 = integrate_step([&](double u) { return u * h(u); }, step, a);
  w.l0 = integrate_step(l, step, a);
  w.l1 = integrate_step([&](double u) { return u * l(u); }, step, a);
  return w;
}

ScaledTrajectory build_trajectory(const SamplePath& path, double theta) {
  return build_trajectory(path.grid, path.values, theta);
}

ScaledTrajectory build_trajectory(const TimeGrid& grid, std::span<const double> g,
                                  double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw DomainError("theta must be positive");
  }
  if (g.size() != grid.size()) {
    throw DataError("driver has " + std::to_string(g.size()) + " values, grid needs " +
                    std::to_string(grid.size()));
  }
  for (double v : g) {
    if (!std::isfinite(v)) throw DataError("driver path contains non-finite values");
  }
  if (g[0] != 0.0) throw DataError("driver path must start at zero");

  const std::size_t n = grid.steps();
  const double dt = grid.step();
  const double a = theta;
  const IntervalWeights w = IntervalWeights::compute(theta, dt);

  ScaledTrajectory out{grid, theta, {}, {}, {}, {}, {}};
  out.xi.assign(n + 1, 0.0);
  out.z.assign(n + 1, 0.0);
  out.psi.assign(n + 1, 0.0);
  out.d.assign(n + 1, 0.0);
  out.r_scaled.assign(n + 1, 0.0);


  double conv = 0.0;     // int_0^t e^{-theta (t-s)} G_s ds
  double sq = 0.0;       // int_0^t G_s^2 ds
  double cross = 0.0;    // int_0^t G_s conv_s ds
  for (std::size_t k = 0; k < n; ++k) {
    const double g0 = g[k];
    const double g1 = g[k + 1];
    const double slope = (g1 - g0) / dt;
    const double scale = std::exp(-a * grid.time(k));
    const double scale_next = std::exp(-a * grid.time(k + 1));

    const double z_inc = g0 * w.z0 + slope * w.z1;
    out.z[k + 1] = out.z[k] + scale * z_inc;
    out.xi[k + 1] = scale_next * g1 + a * out.z[k + 1];

    // On the step xi(u) = xi_k + q h(u).
    const double q = slope * scale;
    const double xk = out.xi[k];
    out.d[k + 1] = w.decay2 * out.d[k] + xk * xk * w.d0 + 2.0 * xk * q * w.d1 + q * q * w.d2;

    // conv(u) = e^{-theta u} conv_k + G_k h(u) + slope l(u)
    cross += conv * z_inc + g0 * g0 * w.h0 + g0 * slope * (w.h1 + w.l0) + slope * slope * w.l1;
    conv = w.decay * conv + g0 * w.a0 + slope * w.a1;
    sq += dt * (g0 * g0 + g0 * g1 + g1 * g1) / 3.0;

    out.psi[k + 1] = g1 - a * conv;
    out.r_scaled[k + 1] = scale_next * (0.5 * g1 * g1 - a * sq + a * a * cross);
  }
  return out;
}

std::vector<double> materialize_x(const ScaledTrajectory& traj) {
  if (traj.theta * traj.grid.horizon() > kMaterializeLimit) {
    throw RangeError("theta * T exceeds " + std::to_string(kMaterializeLimit) +
                     "; X overflows double precision, use the scaled quantities");
  }
  std::vector<double> x(traj.xi.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    x[k] = std::exp(traj.theta * traj.grid.time(k)) * traj.xi[k];
  }
  return x;
}

double identity_residual(const ScaledTrajectory& traj, std::size_t k) {
  const double a = traj.theta;
  const double discount = std::exp(-a * traj.grid.time(k));
  return 0.5 * traj.xi[k] * traj.xi[k] - a * traj.d[k] -
         discount * (a * traj.z[k] * traj.psi[k] + traj.r_scaled[k]);
}

}  // namespace ouestim
