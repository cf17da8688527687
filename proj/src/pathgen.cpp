#include "ouestim/pathgen.hpp"

#include <fftw3.h>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <iostream>
#include <mutex>

#include "ouestim/errors.hpp"
#include "ouestim/rng.hpp"

namespace ouestim {

namespace {

// The FFTW planner is not thread-safe; execution is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

CholeskySampler::CholeskySampler(const KernelSpec& spec, const TimeGrid& grid,
                                 std::size_t max_steps)
    : PathSampler(spec, grid) {
  spec.validate();
  const std::size_t n = grid.steps();
  if (n > max_steps) {
    throw UsageError("Cholesky sampler limited to " + std::to_string(max_steps) +
                     " steps (requested " + std::to_string(n) + ")");
  }
  // t_0 = 0 is left out: G_0 = 0 deterministically and the full matrix is singular.
  Eigen::MatrixXd c(n, n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(n); ++j) {
    const double tj = grid.time(static_cast<std::size_t>(j) + 1);
    for (std::ptrdiff_t i = j; i < static_cast<std::ptrdiff_t>(n); ++i) {
      c(i, j) = cov(spec, grid.time(static_cast<std::size_t>(i) + 1), tj);
    }
  }
  const double max_diag = c.diagonal().maxCoeff();

  Eigen::LLT<Eigen::MatrixXd> llt;
  const double escalation[] = {0.0, 1e-12, 1e-10, 1e-8};
  bool ok = false;
  for (double eps : escalation) {
    if (eps > 0.0) {
      Eigen::MatrixXd jittered = c;
      jittered.diagonal().array() += eps * max_diag;
      llt.compute(jittered);
    } else {
      llt.compute(c);
    }
    if (llt.info() == Eigen::Success) {
      jitter_ = eps;
      ok = true;
      break;
    }
  }
  if (!ok) {
    throw NumericalError("Cholesky factorization failed for " + spec.describe() +
                         " even with 1e-8 relative jitter");
  }
  const Eigen::MatrixXd& l = llt.matrixLLT();
  packed_.resize(n * (n + 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    double* row = packed_.data() + i * (i + 1) / 2;
    for (std::size_t j = 0; j <= i; ++j) row[j] = l(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
}

SamplePath CholeskySampler::sample(std::uint64_t seed, std::uint64_t replicate) const {
  const std::size_t n = grid().steps();
  RandomStream rng(seed, replicate);
  std::vector<double> z(n);
  for (double& v : z) v = rng.normal();

  std::vector<double> values(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = packed_.data() + i * (i + 1) / 2;
    double acc = 0.0;
#pragma omp simd reduction(+ : acc)
    for (std::size_t j = 0; j <= i; ++j) acc += row[j] * z[j];
    values[i + 1] = acc;
  }
  return SamplePath{grid(), std::move(values), PathMeta{kernel(), std::string(id()), seed, replicate}};
}

double fgn_autocovariance(double hurst, std::size_t lag) {
  const double h2 = 2.0 * hurst;
  const double k = static_cast<double>(lag);
  if (lag == 0) return 1.0;
  return 0.5 * (std::pow(k + 1.0, h2) + std::pow(k - 1.0, h2) - 2.0 * std::pow(k, h2));
}

struct CirculantFbmSampler::Plan {
  fftw_plan plan = nullptr;
  std::size_t size = 0;
};

CirculantFbmSampler::CirculantFbmSampler(const KernelSpec& spec, const TimeGrid& grid)
    : PathSampler(spec, grid), plan_(std::make_unique<Plan>()) {
  if (spec.family != Family::kFbm && spec.family != Family::kBm) {
    throw UsageError("circulant sampler requires stationary increments (fbm or bm)");
  }
  const double hurst = spec.effective_hurst();
  const std::size_t n = grid.steps();
  const std::size_t m = 2 * n;
  increment_scale_ = std::pow(grid.step(), hurst);

  auto* buf_in = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * m));
  auto* buf_out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * m));
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan_->plan = fftw_plan_dft_1d(static_cast<int>(m), buf_in, buf_out, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  plan_->size = m;

  // First row of the circulant: rho(0..n), rho(n-1..1).
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t lag = j <= n ? j : m - j;
    buf_in[j][0] = fgn_autocovariance(hurst, lag);
    buf_in[j][1] = 0.0;
  }
  fftw_execute_dft(plan_->plan, buf_in, buf_out);

  double max_eig = 0.0;
  double min_eig = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    max_eig = std::max(max_eig, buf_out[j][0]);
    min_eig = std::min(min_eig, buf_out[j][0]);
  }
  if (min_eig < -1e-8 * max_eig) {
    fftw_free(buf_in);
    fftw_free(buf_out);
    {
      std::lock_guard<std::mutex> lock(fftw_planner_mutex());
      fftw_destroy_plan(plan_->plan);
    }
    plan_->plan = nullptr;
    throw NumericalError("circulant embedding is not positive semidefinite");
  }
  amplitude_.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    amplitude_[j] = std::sqrt(std::max(buf_out[j][0], 0.0) / static_cast<double>(m));
  }
  fftw_free(buf_in);
  fftw_free(buf_out);
}

CirculantFbmSampler::~CirculantFbmSampler() {
  if (plan_ && plan_->plan != nullptr) {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan_->plan);
  }
}

SamplePath CirculantFbmSampler::sample(std::uint64_t seed, std::uint64_t replicate) const {
  const std::size_t n = grid().steps();
  const std::size_t m = plan_->size;
  RandomStream rng(seed, replicate);

  // fftw_malloc keeps the alignment the plan was created with.
  auto* in = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * m));
  auto* out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * m));
  for (std::size_t j = 0; j < m; ++j) {
    const double re = rng.normal();
    const double im = rng.normal();
    in[j][0] = amplitude_[j] * re;
    in[j][1] = amplitude_[j] * im;
  }
  fftw_execute_dft(plan_->plan, in, out);

  std::vector<double> values(n + 1, 0.0);
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    acc += increment_scale_ * out[k][0];
    values[k + 1] = acc;
  }
  fftw_free(in);
  fftw_free(out);
  return SamplePath{grid(), std::move(values), PathMeta{kernel(), std::string(id()), seed, replicate}};
}

std::string_view to_string(SamplerChoice choice) {
  switch (choice) {
    case SamplerChoice::kAuto:
      return "auto";
    case SamplerChoice::kCholesky:
      return "cholesky";
    case SamplerChoice::kCirculant:
      return "circulant";
  }
  return "unknown";
}

SamplerChoice sampler_from_string(std::string_view name) {
  if (name == "auto") return SamplerChoice::kAuto;
  if (name == "cholesky") return SamplerChoice::kCholesky;
  if (name == "circulant") return SamplerChoice::kCirculant;
  throw UsageError("unknown sampler '" + std::string(name) +
                   "' (expected auto, cholesky or circulant)");
}

std::unique_ptr<PathSampler> make_sampler(const KernelSpec& spec, const TimeGrid& grid,
                                          SamplerChoice choice, std::size_t cholesky_cap) {
  spec.validate();
  const bool stationary_increments = spec.family == Family::kFbm || spec.family == Family::kBm;
  if (choice == SamplerChoice::kCirculant && !stationary_increments) {
    throw UsageError("circulant sampler requires stationary increments (fbm or bm), got " +
                     spec.describe());
  }
  if (choice == SamplerChoice::kCholesky || !stationary_increments) {
    return std::make_unique<CholeskySampler>(spec, grid, cholesky_cap);
  }
  try {
    return std::make_unique<CirculantFbmSampler>(spec, grid);
  } catch (const NumericalError& e) {
    std::clog << "warning: " << e.what() << "; falling back to the Cholesky sampler\n";
    return std::make_unique<CholeskySampler>(spec, grid, cholesky_cap);
  }
}

SamplePath sample_cholesky(const KernelSpec& spec, const TimeGrid& grid, std::uint64_t seed,
                           std::uint64_t replicate) {
  return CholeskySampler(spec, grid).sample(seed, replicate);
}

SamplePath sample_fbm_circulant(double hurst, const TimeGrid& grid, std::uint64_t seed,
                                std::uint64_t replicate) {
  return make_sampler(KernelSpec::fbm(hurst), grid, SamplerChoice::kCirculant)
      ->sample(seed, replicate);
}

}  // namespace ouestim
