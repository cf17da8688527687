#include "ouestim/montecarlo.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <string>

#include "ouestim/errors.hpp"
#include "ouestim/ou_model.hpp"

namespace ouestim {

double cauchy_cdf(double x) { return 0.5 + std::atan(x) / std::numbers::pi; }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double ks_distance(std::span<const double> sample, Distribution dist) {
  if (sample.empty()) throw DataError("KS distance of an empty sample");
  std::vector<double> x(sample.begin(), sample.end());
  for (double v : x) {
    if (!std::isfinite(v)) throw DataError("KS distance requires finite values");
  }
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = dist == Distribution::kStandardCauchy ? cauchy_cdf(x[i]) : normal_cdf(x[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return std::clamp(d, 0.0, 1.0);
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw DataError("KS distance of an empty sample");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  for (double v : x) {
    if (!std::isfinite(v)) throw DataError("KS distance requires finite values");
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw DataError("KS distance requires finite values");
  }
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n = static_cast<double>(x.size());
  const double m = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= v) ++i;
    while (j < y.size() && y[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  return d;
}

double ks_critical_constant(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  return std::sqrt(-0.5 * std::log(alpha / 2.0));
}

double sorted_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

void MCConfig::validate() const {
  kernel.validate();
  if (!(theta > 0.0)) throw UsageError("theta must be positive");
  if (replicates < 1) throw UsageError("replicates must be at least 1");
  if (horizons.empty()) throw UsageError("at least one horizon is required");
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    if (!(horizons[i] > 0.0)) throw UsageError("horizons must be positive");
    if (i > 0 && !(horizons[i] > horizons[i - 1])) {
      throw UsageError("horizons must be strictly increasing");
    }
  }
  if (!(points_per_unit > 0.0)) throw UsageError("points per unit time must be positive");
  if (steps() < 2) throw UsageError("grid needs at least 2 steps");
}

std::size_t MCConfig::steps() const {
  return static_cast<std::size_t>(std::llround(horizons.back() * points_per_unit));
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("OUESTIM_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return omp_get_max_threads();
}

HorizonSummary summarize(double horizon, std::size_t index, double theta,
                         std::span<const EstimateReport> records) {
  HorizonSummary s;
  s.horizon = horizon;
  s.index = index;
  std::vector<double> err;
  std::vector<double> norm;
  double err_sum = 0.0;
  double r_sum = 0.0;
  for (const EstimateReport& r : records) {
    if (r.degenerate) {
      ++s.degenerate;
      continue;
    }
    const double e = std::abs(r.theta_hat - theta);
    err.push_back(e);
    err_sum += e;
    r_sum += std::abs(r.r_scaled);
    norm.push_back(r.s_stable / (2.0 * theta));
  }
  s.valid = err.size();
  if (err.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    s.median_abs_error = s.mean_abs_error = s.q25 = s.q50 = s.q75 = nan;
    s.ks_cauchy = s.mean_abs_r_scaled = nan;
    return s;
  }
  const double n = static_cast<double>(err.size());
  std::sort(err.begin(), err.end());
  s.median_abs_error = sorted_quantile(err, 0.5);
  s.mean_abs_error = err_sum / n;
  s.mean_abs_r_scaled = r_sum / n;
  s.ks_cauchy = ks_distance(norm, Distribution::kStandardCauchy);
  std::sort(norm.begin(), norm.end());
  s.q25 = sorted_quantile(norm, 0.25);
  s.q50 = sorted_quantile(norm, 0.5);
  s.q75 = sorted_quantile(norm, 0.75);
  return s;
}

namespace {

struct Plan {
  TimeGrid grid;
  std::vector<std::size_t> indices;
};

Plan plan_for(const MCConfig& cfg) {
  cfg.validate();
  const double t_max = cfg.horizons.back();
  Plan p{TimeGrid(t_max, cfg.steps()), {}};
  for (double t : cfg.horizons) {
    const std::size_t k = p.grid.index_of(t);
    if (k < 1) throw UsageError("horizon " + std::to_string(t) + " falls below the first grid step");
    p.indices.push_back(k);
  }
  return p;
}

void run_one(const MCConfig& cfg, const PathSampler& sampler, const Plan& plan, std::size_t rep,
             std::vector<std::vector<EstimateReport>>& records) {
  SamplePath path = sampler.sample(cfg.seed, rep);
  if (cfg.path_transform) cfg.path_transform(rep, path.values);
  const ScaledTrajectory traj = build_trajectory(path, cfg.theta);
  for (std::size_t h = 0; h < plan.indices.size(); ++h) {
    records[h][rep] = make_report(traj, plan.indices[h]);
  }
}

MCResult finish(const MCConfig& cfg, const Plan& plan, const PathSampler& sampler,
                std::vector<std::vector<EstimateReport>> records) {
  MCResult out;
  out.summary.sampler_used = std::string(sampler.id());
  out.summary.steps = plan.grid.steps();
  for (std::size_t h = 0; h < plan.indices.size(); ++h) {
    out.summary.horizons.push_back(
        summarize(cfg.horizons[h], plan.indices[h], cfg.theta, records[h]));
  }
  out.records = std::move(records);
  return out;
}

}  // namespace

MCResult run_consistency(const MCConfig& cfg) {
  const Plan plan = plan_for(cfg);
  const auto sampler = make_sampler(cfg.kernel, plan.grid, cfg.sampler, cfg.cholesky_cap);
  std::vector<std::vector<EstimateReport>> records(
      plan.indices.size(), std::vector<EstimateReport>(cfg.replicates));

  const auto n = static_cast<std::ptrdiff_t>(cfg.replicates);
  const int threads = resolve_threads(cfg.threads);
  std::ptrdiff_t failed_at = n;
  std::string message;
  int kind = 0;
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
  for (std::ptrdiff_t rep = 0; rep < n; ++rep) {
    try {
      run_one(cfg, *sampler, plan, static_cast<std::size_t>(rep), records);
    } catch (const std::exception& e) {
#pragma omp critical(ouestim_mc_error)
      {
        // Keep the lowest-index failure so the report is deterministic.
        if (rep < failed_at) {
          failed_at = rep;
          message = e.what();
          kind = dynamic_cast<const DataError*>(&e) ? 1 : 2;
        }
      }
    }
  }
  if (failed_at < n) {
    if (kind == 1) throw DataError(message);
    throw NumericalError(message);
  }
  return finish(cfg, plan, *sampler, std::move(records));
}

MCResult run_cauchy(const MCConfig& cfg) {
  if (cfg.horizons.size() != 1) throw UsageError("the Cauchy experiment takes a single horizon");
  return run_consistency(cfg);
}

namespace reference {

MCResult run_consistency(const MCConfig& cfg) {
  const Plan plan = plan_for(cfg);
  const auto sampler = make_sampler(cfg.kernel, plan.grid, cfg.sampler, cfg.cholesky_cap);
  std::vector<std::vector<EstimateReport>> records(
      plan.indices.size(), std::vector<EstimateReport>(cfg.replicates));
  for (std::size_t rep = 0; rep < cfg.replicates; ++rep) {
    run_one(cfg, *sampler, plan, rep, records);
  }
  return finish(cfg, plan, *sampler, std::move(records));
}

}  // namespace reference

}  // namespace ouestim
