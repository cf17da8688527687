#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "ouestim/errors.hpp"
#include "ouestim/estimator.hpp"
#include "ouestim/pathgen.hpp"

using namespace ouestim;

TEST_CASE("degenerate path is flagged, not a crash") {
  const TimeGrid grid(2.0, 16);
  const ScaledTrajectory tr = build_trajectory(grid, std::vector<double>(17, 0.0), 1.0);
  CHECK_FALSE(estimate(tr, 16).has_value());
  CHECK_FALSE(error_statistic(tr, 16).has_value());
  const EstimateReport r = make_report(tr, 16);
  CHECK(r.degenerate);
  CHECK(std::isnan(r.theta_hat));
  CHECK_THROWS_AS(estimate(tr, 0), DomainError);
  CHECK_THROWS_AS(estimate(tr, 17), DomainError);
}

TEST_CASE("linear driver oracle") {
  const TimeGrid grid(1.0, 4096);
  std::vector<double> g(grid.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = grid.time(i);
  const ScaledTrajectory tr = build_trajectory(grid, g, 1.0);
  const double theta_hat = *estimate(tr, 4096);
  CHECK(std::abs(theta_hat - 1.947646) <= 1e-4);
  const auto s = error_statistic(tr, 4096);
  REQUIRE(s.has_value());
  REQUIRE(s->naive.has_value());
  CHECK(*s->naive == doctest::Approx(std::numbers::e * (theta_hat - 1.0)).epsilon(1e-14));
  CHECK(*s->naive == doctest::Approx(2.576).epsilon(1e-3));
  CHECK(std::abs(*s->naive - s->stable) <= 1e-4);
}

TEST_CASE("stable and naive statistics agree on 100 fBm paths, theta t <= 10") {
  const TimeGrid grid(10.0, 4096);
  const auto sampler = make_sampler(KernelSpec::fbm(0.7), grid, SamplerChoice::kAuto);
  double worst = 0.0;
  for (std::uint64_t r = 0; r < 100; ++r) {
    const ScaledTrajectory tr = build_trajectory(sampler->sample(808, r), 1.0);
    for (std::size_t k : {std::size_t{1024}, std::size_t{4096}}) {
      const auto s = error_statistic(tr, k);
      REQUIRE(s.has_value());
      REQUIRE(s->naive.has_value());
      worst = std::max(worst, std::abs(*s->naive - s->stable) / (1.0 + std::abs(s->stable)));
    }
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("naive statistic is withheld beyond theta t = 35") {
  const TimeGrid grid(50.0, 2000);
  const auto sampler = make_sampler(KernelSpec::fbm(0.7), grid, SamplerChoice::kAuto);
  const ScaledTrajectory tr = build_trajectory(sampler->sample(1, 0), 1.0);
  const auto s = error_statistic(tr, 2000);
  REQUIRE(s.has_value());
  CHECK_FALSE(s->naive.has_value());
  CHECK(std::isfinite(s->stable));
  CHECK(error_statistic(tr, 1400)->naive.has_value());   // t = 35
  CHECK_FALSE(error_statistic(tr, 1401)->naive.has_value());
}

TEST_CASE("scale equivariance of theta_hat") {
  const TimeGrid grid(8.0, 1024);
  const auto sampler = make_sampler(KernelSpec::sfbm(0.4), grid, SamplerChoice::kAuto);
  SamplePath p = sampler->sample(4, 2);
  const double base = *estimate(build_trajectory(p, 0.7), 1024);
  for (double c : {-1.0, 3.5, 1e-3}) {
    std::vector<double> scaled = p.values;
    for (double& v : scaled) v *= c;
    CHECK(*estimate(build_trajectory(grid, scaled, 0.7), 1024) ==
          doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("single-path accuracy, fBm H=0.7, T=15") {
  const TimeGrid grid(15.0, 15 * 256);
  const auto sampler = make_sampler(KernelSpec::fbm(0.7), grid, SamplerChoice::kAuto);
  int good = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const ScaledTrajectory tr = build_trajectory(sampler->sample(seed, 0), 1.0);
    if (std::abs(*estimate(tr, grid.steps()) - 1.0) < 0.1) ++good;
  }
  CHECK(good >= 95);
}
