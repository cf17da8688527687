#pragma once

// Quadrature building blocks shared by the limit verifiers.
//
// The 2D forms are the hot loops: rows are distributed over OpenMP threads,
// each row sum lands in its own slot and the slots are folded in index
// order, so results do not depend on the thread count.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace ouestim::quad {

// int_0^t u^beta exp(rate * u + shift) du, beta > -1. The first panel is
// integrated through the exponential series (exact up to rounding); the
// remaining panels use 8-point Gauss-Legendre.
double power_exp_integral(double beta, double rate, double shift, double t, std::size_t panels);

// Composite 8-point Gauss-Legendre on [a, b].
double smooth_integral(const std::function<double(double)>& f, double a, double b,
                       std::size_t panels);

// Composite trapezoid weights for nodes i*h, i = 0..n.
std::vector<double> trapezoid_weights(std::size_t n, double h);

// sum_i sum_j w_i w_j f(i, j) for symmetric f.
template <class Pair>
double symmetric_form(std::span<const double> w, const Pair& f) {
  const auto n = static_cast<std::ptrdiff_t>(w.size());
  std::vector<double> rows(w.size(), 0.0);
#pragma omp parallel for schedule(dynamic, 32)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < ui; ++j) acc += w[j] * f(ui, j);
    rows[ui] = w[ui] * (2.0 * acc + w[ui] * f(ui, ui));
  }
  double total = 0.0;
  for (double r : rows) total += r;
  return total;
}

// sum_{i>j} w_i w_j f(i, j) + 1/2 sum_i w_i^2 f(i, i): the midpoint rule over
// the triangle {r < s} for f smooth across the diagonal.
template <class Pair>
double lower_triangle_form(std::span<const double> w, const Pair& f) {
  const auto n = static_cast<std::ptrdiff_t>(w.size());
  std::vector<double> rows(w.size(), 0.0);
#pragma omp parallel for schedule(dynamic, 32)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < ui; ++j) acc += w[j] * f(ui, j);
    rows[ui] = w[ui] * (acc + 0.5 * w[ui] * f(ui, ui));
  }
  double total = 0.0;
  for (double r : rows) total += r;
  return total;
}

}  // namespace ouestim::quad
