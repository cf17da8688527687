#pragma once

// Replicated experiments for the consistency and Cauchy-limit statements,
// plus the small amount of statistics they need (Cauchy CDF, KS, quantiles).
//
// Replicates run concurrently; every replicate writes its own slot and the
// summaries are folded in replicate order, so the result is bit-identical
// for any worker count.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ouestim/estimator.hpp"
#include "ouestim/kernels.hpp"
#include "ouestim/pathgen.hpp"

namespace ouestim {

enum class Distribution { kStandardCauchy, kStandardNormal };

double cauchy_cdf(double x);
double normal_cdf(double x);

// sup_x |F_N(x) - F(x)|; DataError on an empty or non-finite sample.
double ks_distance(std::span<const double> sample, Distribution dist);
// Two-sample statistic sup_x |F_N(x) - G_M(x)|.
double ks_two_sample(std::span<const double> a, std::span<const double> b);
// Asymptotic KS critical constant c(alpha) = sqrt(-ln(alpha / 2) / 2); 1.628 at 1%.
double ks_critical_constant(double alpha);

// Linear-interpolation (type 7) quantile of an already sorted sample.
double sorted_quantile(std::span<const double> sorted, double p);

struct MCConfig {
  KernelSpec kernel = KernelSpec::fbm(0.7);
  double theta = 1.0;
  std::vector<double> horizons{10.0};
  double points_per_unit = 409.6;
  std::size_t replicates = 1000;
  std::uint64_t seed = 0;
  SamplerChoice sampler = SamplerChoice::kAuto;
  std::size_t cholesky_cap = kDefaultCholeskyCap;
  // 0: OUESTIM_THREADS if set, else the OpenMP default.
  int threads = 0;
  // Test hook applied to every sampled driver before the OU functionals are
  // built (e.g. scaling, or forcing a degenerate path).
  std::function<void(std::size_t replicate, std::vector<double>& driver)> path_transform;

  void validate() const;
  // Grid steps n = round(T_max * points_per_unit).
  std::size_t steps() const;
};

struct HorizonSummary {
  double horizon = 0.0;
  std::size_t index = 0;  // grid index of the horizon
  std::size_t valid = 0;
  std::size_t degenerate = 0;
  // NaN when no replicate is valid.
  double median_abs_error = 0.0;
  double mean_abs_error = 0.0;
  double q25 = 0.0;  // quartiles of S_stable / (2 theta)
  double q50 = 0.0;
  double q75 = 0.0;
  double ks_cauchy = 0.0;
  double mean_abs_r_scaled = 0.0;
};

struct MCSummary {
  std::string sampler_used;
  std::size_t steps = 0;
  std::vector<HorizonSummary> horizons;
};

struct MCResult {
  MCSummary summary;
  // records[h][replicate]
  std::vector<std::vector<EstimateReport>> records;
};

// One driver path per replicate on [0, T_max]; each horizon reads the
// estimator at its grid index.
MCResult run_consistency(const MCConfig& cfg);
// Same, restricted to a single horizon.
MCResult run_cauchy(const MCConfig& cfg);

HorizonSummary summarize(double horizon, std::size_t index, double theta,
                         std::span<const EstimateReport> records);

int resolve_threads(int requested);

namespace reference {

// Serial loop over replicates, no OpenMP.
MCResult run_consistency(const MCConfig& cfg);

}  // namespace reference

}  // namespace ouestim
