#pragma once

// Exact sampling of the Gaussian driver on a uniform grid.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ouestim/grid.hpp"
#include "ouestim/kernels.hpp"

namespace ouestim {

inline constexpr std::size_t kDefaultCholeskyCap = 8192;

struct PathMeta {
  KernelSpec kernel;
  std::string sampler;
  std::uint64_t seed = 0;
  std::uint64_t replicate = 0;
};

struct SamplePath {
  TimeGrid grid;
  std::vector<double> values;  // g_0 = 0, length grid.size()
  PathMeta meta;
};

class PathSampler {
 public:
  PathSampler(KernelSpec spec, TimeGrid grid) : spec_(spec), grid_(grid) {}
  virtual ~PathSampler() = default;
  PathSampler(const PathSampler&) = delete;
  PathSampler& operator=(const PathSampler&) = delete;

  // Pure function of (kernel, grid, seed, replicate, sampler id); safe to call
  // concurrently.
  virtual SamplePath sample(std::uint64_t seed, std::uint64_t replicate) const = 0;
  virtual std::string_view id() const = 0;

  const KernelSpec& kernel() const { return spec_; }
  const TimeGrid& grid() const { return grid_; }

 private:
  KernelSpec spec_;
  TimeGrid grid_;
};

// Dense sampler: Cholesky factor of [cov(t_i, t_j)]_{i,j>=1}, computed once.
// On factorization failure the diagonal is inflated by eps * max(diag) with
// eps = 1e-12, 1e-10, 1e-8 before giving up with NumericalError.
class CholeskySampler final : public PathSampler {
 public:
  CholeskySampler(const KernelSpec& spec, const TimeGrid& grid,
                  std::size_t max_steps = kDefaultCholeskyCap);

  SamplePath sample(std::uint64_t seed, std::uint64_t replicate) const override;
  std::string_view id() const override { return "cholesky"; }

  // Relative jitter that was needed (0 when the plain factorization worked).
  double jitter() const { return jitter_; }

 private:
  std::vector<double> packed_;  // row-major lower triangle
  double jitter_ = 0.0;
};

// Davies-Harte circulant embedding of fractional Gaussian noise, summed into
// an fBm path. O(n log n) per path.
class CirculantFbmSampler final : public PathSampler {
 public:
  // spec must be fBm or BM. Throws NumericalError when the embedding has
  // eigenvalues below -1e-8 * max eigenvalue.
  CirculantFbmSampler(const KernelSpec& spec, const TimeGrid& grid);
  ~CirculantFbmSampler() override;

  SamplePath sample(std::uint64_t seed, std::uint64_t replicate) const override;
  std::string_view id() const override { return "circulant"; }

 private:
  struct Plan;
  std::vector<double> amplitude_;  // sqrt(lambda_j / M)
  std::unique_ptr<Plan> plan_;
  double increment_scale_;
};

enum class SamplerChoice { kAuto, kCholesky, kCirculant };

std::string_view to_string(SamplerChoice choice);
SamplerChoice sampler_from_string(std::string_view name);

// kAuto picks the circulant sampler for fBm/BM and Cholesky otherwise.
// A failed circulant embedding falls back to Cholesky with a warning.
std::unique_ptr<PathSampler> make_sampler(const KernelSpec& spec, const TimeGrid& grid,
                                          SamplerChoice choice,
                                          std::size_t cholesky_cap = kDefaultCholeskyCap);

SamplePath sample_cholesky(const KernelSpec& spec, const TimeGrid& grid, std::uint64_t seed,
                           std::uint64_t replicate);
SamplePath sample_fbm_circulant(double hurst, const TimeGrid& grid, std::uint64_t seed,
                                std::uint64_t replicate);

// Autocovariance of unit-step fractional Gaussian noise at integer lag.
double fgn_autocovariance(double hurst, std::size_t lag);

}  // namespace ouestim
