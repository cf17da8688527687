#include <doctest.h>

#include <omp.h>

#include <cmath>
#include <vector>

#include "ouestim/errors.hpp"
#include "ouestim/limit_theory.hpp"
#include "ouestim/quadrature.hpp"

using namespace ouestim;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

const std::vector<KernelSpec> kTested{KernelSpec::fbm(0.3), KernelSpec::fbm(0.7),
                                      KernelSpec::sfbm(0.3), KernelSpec::sfbm(0.7),
                                      KernelSpec::bifbm(0.7, 0.8)};

}  // namespace

TEST_CASE("sigma_limit") {
  CHECK(sigma_limit(KernelSpec::fbm(0.5), 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(sigma_limit(KernelSpec::fbm(0.7), 1.0) == doctest::Approx(0.621085).epsilon(1e-6));
  CHECK(sigma_limit(KernelSpec::sfbm(0.7), 1.0) == sigma_limit(KernelSpec::fbm(0.7), 1.0));
  CHECK(sigma_limit(KernelSpec::bm(), 2.0) == 0.25);
  // HK = 1/2: 2^{1-K} HK Gamma(2HK) = 2^{1/3} / 2
  CHECK(sigma_limit(KernelSpec::bifbm(0.75, 2.0 / 3.0), 1.0) ==
        doctest::Approx(0.629961).epsilon(1e-6));
  CHECK(sigma_limit(KernelSpec::bifbm(0.7, 1.0), 1.3) ==
        doctest::Approx(sigma_limit(KernelSpec::fbm(0.7), 1.3)).epsilon(1e-14));
}

TEST_CASE("power_exp_integral against closed forms") {
  // int_0^t e^{-u} = 1 - e^{-t}; int_0^t u e^{u - t} = t - 1 + e^{-t}
  CHECK(quad::power_exp_integral(0.0, -1.0, 0.0, 7.0, 50) ==
        doctest::Approx(1.0 - std::exp(-7.0)).epsilon(1e-15));
  CHECK(quad::power_exp_integral(1.0, 1.0, -7.0, 7.0, 50) ==
        doctest::Approx(6.0 + std::exp(-7.0)).epsilon(1e-14));
  // int_0^inf u^{-1/2} e^{-u} = sqrt(pi)
  CHECK(quad::power_exp_integral(-0.5, -1.0, 0.0, 60.0, 400) ==
        doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
  CHECK_THROWS_AS(quad::power_exp_integral(-1.0, 1.0, 0.0, 1.0, 10), DomainError);
}

TEST_CASE("J_lambda and I_lambda limits") {
  CHECK(std::abs(j_lambda(2.0, 0.0, 30.0, 4096) - 0.25) <= 1e-9);
  CHECK(std::abs(j_lambda(1.0, 1.0, 30.0, 4096) - 1.0) <= 1e-6);
  CHECK(std::abs(j_lambda(1.0, 0.4, 30.0, 4096) - std::tgamma(1.4)) <= 1e-5);
  for (double lambda : {0.0, 0.4, 1.0, 1.4, -0.5}) {
    CHECK(std::abs(j_lambda(1.0, lambda, 30.0, 4096) - i_lambda(1.0, lambda, 30.0, 4096)) <= 1e-6);
  }
  CHECK_THROWS_AS(j_lambda(1.0, -1.0, 5.0, 512), DomainError);
  CHECK_THROWS_AS(i_lambda(1.0, -2.0, 5.0, 512), DomainError);
}

TEST_CASE("J_lambda: single-integral reduction vs the double integral") {
  for (double lambda : {-0.5, 0.0, 0.6, 1.4}) {
    for (double t : {1.0, 5.0}) {
      INFO("lambda=", lambda, " t=", t);
      // the midpoint rule converges like h^{min(2, 1 + lambda)} near the diagonal
      const double tol = lambda < 0.0 ? 1e-2 : 2e-3;
      CHECK(rel(j_lambda_direct(1.0, lambda, t, 2048), j_lambda(1.0, lambda, t, 2048)) <= tol);
    }
  }
  // J_0 has the closed form (1 - e^{-theta t})^2 / theta^2.
  CHECK(j_lambda_direct(1.5, 0.0, 3.0, 1024) ==
        doctest::Approx(std::pow(1 - std::exp(-4.5), 2) / 2.25).epsilon(1e-5));
}

TEST_CASE("variance curve: Brownian closed form") {
  for (double t : {1.0, 5.0, 10.0}) {
    const VarianceCurve v = variance_curve(KernelSpec::bm(), 1.0, t, 4096);
    CHECK(std::abs(v.split - bm_variance_curve(1.0, t)) <= 1e-10);
    CHECK(std::abs(v.direct - bm_variance_curve(1.0, t)) <= 1e-5);
  }
  CHECK(bm_variance_curve(1.0, 10.0) == doctest::Approx(0.5 * (1 - std::exp(-20.0))).epsilon(1e-15));
}

TEST_CASE("quadrature error halves when n doubles (Brownian cases)") {
  double prev = 0.0;
  for (std::size_t n : {256, 512, 1024}) {
    const double err = std::abs(variance_curve(KernelSpec::bm(), 1.0, 5.0, n).direct -
                                bm_variance_curve(1.0, 5.0));
    if (prev > 0.0) CHECK(prev / err >= 1.7);
    prev = err;
  }
  prev = 0.0;
  for (std::size_t n : {256, 512, 1024}) {
    const double err = std::abs(z_infinity_variance(KernelSpec::bm(), 1.0, 40.0, n).variance - 0.5);
    if (prev > 0.0) CHECK(prev / err >= 1.7);
    prev = err;
  }
}

TEST_CASE("variance curve: two routes agree at t=5") {
  for (const auto& k : kTested) {
    const VarianceCurve v = variance_curve(k, 1.0, 5.0, 2048);
    INFO(k.describe());
    CHECK(rel(v.direct, v.split) <= 1e-3);
  }
}

TEST_CASE("variance curve: fBm H=0.7 at t=20 within 1% of the limit") {
  const VarianceCurve v = variance_curve(KernelSpec::fbm(0.7), 1.0, 20.0, 4096);
  CHECK(rel(v.direct, 0.621085) <= 1e-2);
}

TEST_CASE("delta_g identity") {
  SUBCASE("H = 1/2, t = 3, both sides to 1e-6") {
    const DeltaGIdentity l = lemma41_check(KernelSpec::fbm(0.5), 1.0, 3.0, 8192);
    // rhs = 2 e^{-2t} int_0^t e^{s} / 2 ds = e^{-t} - e^{-2t}
    CHECK(l.rhs == doctest::Approx(std::exp(-3.0) - std::exp(-6.0)).epsilon(1e-12));
    CHECK(std::abs(l.lhs - l.rhs) <= 1e-6);
  }
  SUBCASE("fBm rhs is the single integral 2H e^{-2 theta t} int s^{2H-1} e^{theta s}") {
    const double t = 5.0;
    const double single = 2 * 0.7 * quad::power_exp_integral(0.4, 1.0, -2.0 * t, t, 4096);
    const DeltaGIdentity l = lemma41_check(KernelSpec::fbm(0.7), 1.0, t, 4096);
    CHECK(l.rhs == doctest::Approx(single).epsilon(1e-13));
    CHECK(l.relative_gap() <= 1e-3);
  }
  SUBCASE("all kernels at (theta, t) = (1, 5)") {
    for (const auto& k : kTested) {
      INFO(k.describe());
      CHECK(lemma41_check(k, 1.0, 5.0, 4096).relative_gap() <= 1e-3);
    }
  }
}

TEST_CASE("Delta_g decays") {
  CHECK(std::abs(delta_g(KernelSpec::fbm(0.7), 1.0, 20.0, 4096)) <= 1e-3);
  for (const auto& k : {KernelSpec::sfbm(0.7), KernelSpec::bifbm(0.7, 0.8)}) {
    double prev = INFINITY;
    for (double t : {5.0, 10.0, 20.0, 40.0}) {
      const double d = std::abs(delta_g(k, 1.0, t, 2048));
      CHECK(d < prev);
      prev = d;
    }
  }
}

TEST_CASE("Z_infinity") {
  const ZInfinity bm = z_infinity_variance(KernelSpec::bm(), 1.0, 40.0, 4096);
  CHECK(rel(bm.variance, 0.5) <= 1e-2);
  const ZInfinity f7 = z_infinity_variance(KernelSpec::fbm(0.7), 1.0, 40.0, 4096);
  CHECK(rel(f7.variance, 0.621085) <= 1e-2);
  CHECK(f7.tail_bound <= 1e-30);
  CHECK(f7.tail_bound > 0.0);
  CHECK(default_truncation(0.5) == 80.0);
  CHECK(default_truncation(4.0) == 40.0);
  CHECK_THROWS_AS(z_infinity_variance(KernelSpec::bm(), 1.0, 10.0, 1024), UsageError);
  // theta^2 E[Z_inf^2] = 2(1 - H) sigma^2 for sfBm (no stationary increments)
  const ZInfinity s7 = z_infinity_variance(KernelSpec::sfbm(0.7), 1.0, 40.0, 4096);
  CHECK(rel(s7.variance, 0.6 * sigma_limit(KernelSpec::sfbm(0.7), 1.0)) <= 1e-3);
}

TEST_CASE("A4 cross-covariance") {
  CHECK(std::abs(a4_cross(KernelSpec::bm(), 1.0, 1.0, 20.0, 4096)) <= 1e-8);
  // BM, theta = 1: E[G_1 Psi_t] = 1 - e^{-t} (int_0^1 r e^r dr + int_1^t e^r dr) = (e - 1) e^{-t}
  CHECK(a4_cross(KernelSpec::bm(), 1.0, 1.0, 3.0, 4096) ==
        doctest::Approx((M_E - 1.0) * std::exp(-3.0)).epsilon(1e-10));
  CHECK(a4_cross(KernelSpec::fbm(0.7), 1.0, 0.0, 3.0, 1024) == 0.0);
  CHECK_THROWS_AS(a4_cross(KernelSpec::fbm(0.7), 1.0, 3.0, 3.0, 1024), DomainError);

  // Integration-by-parts route vs the plain definition (cusp on a panel edge).
  for (const auto& k : kTested) {
    const double s = 1.0, t = 6.0, th = 1.0;
    const double def =
        cov(k, s, t) -
        th * (quad::smooth_integral([&](double r) { return std::exp(-th * (t - r)) * cov(k, s, r); },
                                    0.0, s, 256) +
              quad::smooth_integral([&](double r) { return std::exp(-th * (t - r)) * cov(k, s, r); },
                                    s, t, 2048));
    INFO(k.describe());
    CHECK(std::abs(a4_cross(k, th, s, t, 4096) - def) <= 1e-6);
  }

  SUBCASE("decay over t = 10, 20, 30") {
    for (const auto& [k, s] : std::vector<std::pair<KernelSpec, double>>{
             {KernelSpec::fbm(0.3), 1.0}, {KernelSpec::fbm(0.7), 1.0}, {KernelSpec::sfbm(0.3), 2.0},
             {KernelSpec::sfbm(0.7), 1.0}, {KernelSpec::bifbm(0.7, 0.8), 1.0}}) {
      const double a = std::abs(a4_cross(k, 1.0, s, 10.0, 4096));
      const double b = std::abs(a4_cross(k, 1.0, s, 20.0, 4096));
      const double c = std::abs(a4_cross(k, 1.0, s, 30.0, 4096));
      INFO(k.describe());
      CHECK(a > b);
      CHECK(b > c);
    }
    CHECK(std::abs(a4_cross(KernelSpec::sfbm(0.3), 1.0, 2.0, 30.0, 4096)) <= 1e-2);
    // fBm H > 1/2 decays like H(2H-1) s t^{2H-2} / theta
    const double t = 30.0;
    CHECK(rel(a4_cross(KernelSpec::fbm(0.7), 1.0, 1.0, t, 4096), 0.7 * 0.4 * std::pow(t, -0.6)) <=
          0.05);
  }
}

TEST_CASE("parallel kernels match the serial reference and do not depend on thread count") {
  const int saved = omp_get_max_threads();
  for (const auto& k : {KernelSpec::fbm(0.3), KernelSpec::sfbm(0.7), KernelSpec::bifbm(0.7, 0.8),
                        KernelSpec::bm()}) {
    omp_set_num_threads(1);
    const VarianceCurve one = variance_curve(k, 1.0, 5.0, 600);
    const double z_one = z_infinity_variance(k, 1.0, 40.0, 600).variance;
    const double l_one = lemma41_check(k, 1.0, 5.0, 600).lhs;
    omp_set_num_threads(4);
    const VarianceCurve four = variance_curve(k, 1.0, 5.0, 600);
    CHECK(one.direct == four.direct);
    CHECK(one.split == four.split);
    CHECK(z_one == z_infinity_variance(k, 1.0, 40.0, 600).variance);
    CHECK(l_one == lemma41_check(k, 1.0, 5.0, 600).lhs);

    INFO(k.describe());
    CHECK(rel(four.direct, reference::variance_direct(k, 1.0, 5.0, 600)) <= 1e-12);
    CHECK(rel(z_one, reference::z_infinity(k, 1.0, 40.0, 600)) <= 1e-12);
    CHECK(rel(l_one, reference::delta_g_lhs(k, 1.0, 5.0, 600)) <= 1e-10);
  }
  omp_set_num_threads(saved);
}

TEST_CASE("limit report") {
  CHECK_THROWS_AS(variance_curve(KernelSpec::fbm(0.7), 1.0, 5.0, 100), UsageError);
  const auto rows = limit_report(KernelSpec::fbm(0.5), 1.0, 1024);
  bool saw_j0 = false;
  for (const auto& r : rows) {
    INFO(r.check_name, " ", r.params, " t=", r.t);
    CHECK(r.pass);
    CHECK(r.params.find(',') == std::string::npos);
    if (r.check_name == "j_lambda_limit" && r.params.find("lambda=0") != std::string::npos &&
        r.params.find("lambda=0.") == std::string::npos) {
      saw_j0 = true;
      CHECK(r.reference == 1.0);
      CHECK(r.gap <= 1e-6);
    }
  }
  CHECK(saw_j0);
}
