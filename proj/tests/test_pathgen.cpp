#include <doctest.h>

#include <cmath>
#include <vector>

#include "ouestim/errors.hpp"
#include "ouestim/montecarlo.hpp"
#include "ouestim/pathgen.hpp"

using namespace ouestim;

namespace {

// Sample mean of g_i g_j and its standard error over `paths` draws.
struct Moment {
  double mean;
  double se;
};

Moment cross_moment(const PathSampler& s, std::size_t i, std::size_t j, std::size_t paths,
                    std::uint64_t seed) {
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t r = 0; r < paths; ++r) {
    const SamplePath p = s.sample(seed, r);
    const double v = p.values[i] * p.values[j];
    sum += v;
    sum2 += v * v;
  }
  const double n = static_cast<double>(paths);
  const double mean = sum / n;
  return {mean, std::sqrt((sum2 / n - mean * mean) / n)};
}

}  // namespace

TEST_CASE("time grid") {
  const TimeGrid g(2.0, 8);
  CHECK(g.size() == 9);
  CHECK(g.step() == 0.25);
  CHECK(g.time(0) == 0.0);
  CHECK(g.time(8) == 2.0);
  CHECK(g.index_of(1.0) == 4);
  CHECK_THROWS_AS(TimeGrid(1.0, 1), DomainError);
  CHECK_THROWS_AS(TimeGrid(0.0, 4), DomainError);
}

TEST_CASE("paths start at zero and are reproducible") {
  const TimeGrid grid(3.0, 64);
  for (const auto& k : {KernelSpec::fbm(0.3), KernelSpec::sfbm(0.7), KernelSpec::bifbm(0.6, 0.8),
                        KernelSpec::bm()}) {
    for (auto choice : {SamplerChoice::kCholesky, SamplerChoice::kAuto}) {
      const auto s = make_sampler(k, grid, choice);
      const SamplePath a = s->sample(11, 5);
      const SamplePath b = s->sample(11, 5);
      const SamplePath c = s->sample(11, 6);
      CHECK(a.values.size() == grid.size());
      CHECK(a.values[0] == 0.0);
      CHECK(a.values == b.values);
      CHECK(a.values != c.values);
      CHECK(a.meta.replicate == 5);
      CHECK(a.meta.seed == 11);
      CHECK(a.meta.sampler == std::string(s->id()));
    }
  }
  // Order of sampling does not matter.
  const auto s = make_sampler(KernelSpec::fbm(0.7), grid, SamplerChoice::kCirculant);
  const SamplePath late = s->sample(3, 9);
  for (std::uint64_t r = 0; r < 9; ++r) s->sample(3, r);
  CHECK(s->sample(3, 9).values == late.values);
}

TEST_CASE("sampler selection") {
  const TimeGrid grid(1.0, 32);
  CHECK(make_sampler(KernelSpec::fbm(0.7), grid, SamplerChoice::kAuto)->id() == "circulant");
  CHECK(make_sampler(KernelSpec::bm(), grid, SamplerChoice::kAuto)->id() == "circulant");
  CHECK(make_sampler(KernelSpec::sfbm(0.7), grid, SamplerChoice::kAuto)->id() == "cholesky");
  CHECK_THROWS_AS(make_sampler(KernelSpec::sfbm(0.7), grid, SamplerChoice::kCirculant), UsageError);
  CHECK_THROWS_AS(make_sampler(KernelSpec::sfbm(0.7), TimeGrid(1.0, 100), SamplerChoice::kCholesky, 64),
                  UsageError);
  CHECK(sampler_from_string("cholesky") == SamplerChoice::kCholesky);
  CHECK_THROWS_AS(sampler_from_string("euler"), UsageError);
  CholeskySampler ch(KernelSpec::fbm(0.7), grid);
  CHECK(ch.jitter() == 0.0);
}

TEST_CASE("fGn autocovariance") {
  CHECK(fgn_autocovariance(0.5, 0) == doctest::Approx(1.0));
  CHECK(fgn_autocovariance(0.5, 1) == doctest::Approx(0.0));
  CHECK(fgn_autocovariance(0.8, 1) == doctest::Approx(0.5 * (std::pow(2.0, 1.6) - 2.0)));
}

TEST_CASE("Cholesky: BM variance at T=1, n=1024") {
  const TimeGrid grid(1.0, 1024);
  CholeskySampler s(KernelSpec::fbm(0.5), grid);
  const Moment m = cross_moment(s, 1024, 1024, 4000, 2024);
  CHECK(std::abs(m.mean - 1.0) <= 0.05);
}

TEST_CASE("Cholesky: bifBm cross moment against cov(1, 2)") {
  const KernelSpec k = KernelSpec::bifbm(0.6, 0.8);
  const TimeGrid grid(2.0, 512);
  CholeskySampler s(k, grid);
  const Moment m = cross_moment(s, 256, 512, 4000, 77);
  CHECK(std::abs(m.mean - cov(k, 1.0, 2.0)) <= 3.0 * m.se);
}

TEST_CASE("circulant: BM increments uncorrelated") {
  const TimeGrid grid(1.0, 1000);
  CirculantFbmSampler s(KernelSpec::fbm(0.5), grid);
  double num = 0.0, den = 0.0;
  std::size_t count = 0;
  for (std::uint64_t r = 0; r < 100; ++r) {
    const SamplePath p = s.sample(5, r);
    for (std::size_t i = 1; i + 1 < p.values.size(); ++i) {
      const double a = p.values[i] - p.values[i - 1];
      const double b = p.values[i + 1] - p.values[i];
      num += a * b;
      den += a * a;
      ++count;
    }
  }
  CHECK(count >= 99000);
  CHECK(std::abs(num / den) <= 0.02);
}

TEST_CASE("circulant: fBm H=0.8 terminal variance") {
  const TimeGrid grid(2.0, 1024);
  CirculantFbmSampler s(KernelSpec::fbm(0.8), grid);
  const Moment m = cross_moment(s, 1024, 1024, 4000, 9);
  CHECK(std::abs(m.mean / std::pow(2.0, 1.6) - 1.0) <= 0.05);
}

TEST_CASE("circulant vs Cholesky: two-sample KS on g_n") {
  for (double h : {0.3, 0.8}) {
    const TimeGrid grid(1.0, 256);
    const KernelSpec k = KernelSpec::fbm(h);
    CirculantFbmSampler a(k, grid);
    CholeskySampler b(k, grid);
    std::vector<double> xa, xb;
    for (std::uint64_t r = 0; r < 2000; ++r) {
      xa.push_back(a.sample(100, r).values.back());
      xb.push_back(b.sample(200, r).values.back());
    }
    const double crit = ks_critical_constant(0.01) * std::sqrt(2.0 / 2000.0);
    INFO("H=", h);
    CHECK(ks_two_sample(xa, xb) < crit);
  }
}

TEST_CASE("exactness: 8-point grid covariance over 1e5 paths") {
  const TimeGrid grid(2.0, 8);
  for (const auto& k : {KernelSpec::fbm(0.3), KernelSpec::sfbm(0.7), KernelSpec::bifbm(0.7, 0.8),
                        KernelSpec::bm()}) {
    CholeskySampler s(k, grid);
    const std::size_t paths = 100000;
    std::vector<double> sum(81, 0.0), sum2(81, 0.0);
    for (std::size_t r = 0; r < paths; ++r) {
      const SamplePath p = s.sample(31, r);
      for (std::size_t i = 1; i <= 8; ++i) {
        for (std::size_t j = 1; j <= i; ++j) {
          const double v = p.values[i] * p.values[j];
          sum[i * 9 + j] += v;
          sum2[i * 9 + j] += v * v;
        }
      }
    }
    int bad = 0;
    for (std::size_t i = 1; i <= 8; ++i) {
      for (std::size_t j = 1; j <= i; ++j) {
        const double n = static_cast<double>(paths);
        const double mean = sum[i * 9 + j] / n;
        const double se = std::sqrt((sum2[i * 9 + j] / n - mean * mean) / n);
        if (std::abs(mean - cov(k, grid.time(i), grid.time(j))) > 5.0 * se) ++bad;
      }
    }
    INFO(k.describe());
    CHECK(bad == 0);
  }
}
