#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "airylab/errors.hpp"
#include "airylab/spectra.hpp"
#include "oracles.hpp"

using namespace airylab;
using spectra::AirySpectrumMode;

TEST_CASE("airy zeros: oracle pins the classical values") {
  // frozen from the long-double series oracle
  CHECK(oracles::airy_zero(1) == doctest::Approx(2.3381074104597670).epsilon(1e-11));
  CHECK(oracles::airy_zero(2) == doctest::Approx(4.0879494441309706).epsilon(1e-11));
  CHECK(oracles::airy_zero(3) == doctest::Approx(5.5205598280955510).epsilon(1e-11));
}

TEST_CASE("airy_eigenvalue exact mode matches the series oracle") {
  for (int i = 1; i <= 6; ++i) {
    const double impl = spectra::airy_eigenvalue(i, AirySpectrumMode::Exact);
    CHECK(impl == doctest::Approx(oracles::airy_zero(i)).epsilon(1e-8));
  }
}

TEST_CASE("exact and asymptotic eigenvalues stay within C/i of each other") {
  for (int i = 1; i <= 50; ++i) {
    const double ex = spectra::airy_eigenvalue(i, AirySpectrumMode::Exact);
    const double as = spectra::airy_eigenvalue(i, AirySpectrumMode::Asymptotic);
    CHECK(std::fabs(ex - as) * i <= 0.05);
  }
}

TEST_CASE("series and asymptotic Ai branches agree at the seam") {
  const double s = spectra::detail::ai_series(-7.0);
  const double a = spectra::detail::ai_asymptotic(-7.0);
  CHECK(std::fabs(s - a) <= 1e-9 * std::fabs(s));
  // and both match the independent oracle
  CHECK(s == doctest::Approx(static_cast<double>(oracles::airy_ai_series(-7.0L)))
                 .epsilon(1e-10));
}

TEST_CASE("airy_count small and large arguments") {
  for (auto mode : {AirySpectrumMode::Asymptotic, AirySpectrumMode::Exact}) {
    CHECK(spectra::airy_count(0.0, mode) == 0);
    CHECK(spectra::airy_count(2.0, mode) == 0);
    CHECK(spectra::airy_count(2.5, mode) == 1);
    CHECK(spectra::airy_count(5.0, mode) == 2);
    CHECK(spectra::airy_count(10.0, mode) == 6);
    // exact/asymptotic consistency of the inversion at depth
    const long long c = spectra::airy_count(1000.0, mode);
    CHECK(spectra::airy_eigenvalue(static_cast<int>(c), mode) <= 1000.0);
    CHECK(spectra::airy_eigenvalue(static_cast<int>(c) + 1, mode) > 1000.0);
  }
  // count at an eigenvalue includes it
  const double g3 = spectra::airy_eigenvalue(3, AirySpectrumMode::Asymptotic);
  CHECK(spectra::airy_count(g3, AirySpectrumMode::Asymptotic) == 3);
  CHECK(spectra::airy_count(std::nextafter(g3, 0.0),
                            AirySpectrumMode::Asymptotic) == 2);
}

TEST_CASE("semicircle cdf closed form vs quadrature") {
  CHECK(spectra::semicircle_cdf(-2.0) == 0.0);
  CHECK(spectra::semicircle_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(spectra::semicircle_cdf(2.0) == 1.0);
  // substitute u = -2 + s^2 so the sqrt endpoint singularity disappears
  auto rho = [](double s) { return s * s * std::sqrt(4.0 - s * s) / M_PI; };
  for (double x : {-1.5, -0.5, 0.7, 1.9}) {
    const double q = oracles::gl_integrate(rho, 0.0, std::sqrt(x + 2.0), 64);
    CHECK(spectra::semicircle_cdf(x) == doctest::Approx(q).epsilon(1e-11));
  }
}

TEST_CASE("classical locations solve the quantile equation") {
  CHECK(spectra::classical_location(1, 2) == doctest::Approx(0.0).scale(1.0).epsilon(1e-11));
  CHECK(spectra::classical_location(100, 100) ==
        doctest::Approx(-2.0).epsilon(1e-10));
  // j=1, n=100 lands in the analytic bracket
  const double g = spectra::classical_location(1, 100);
  CHECK(g >= 2.0 - std::pow(3.0 * M_PI / (std::sqrt(2.0) * 100.0), 2.0 / 3.0));
  CHECK(g <= 2.0 - std::pow(3.0 * M_PI / 200.0, 2.0 / 3.0));
  for (long long j : {1LL, 7LL, 50LL, 93LL}) {
    const double x = spectra::classical_location(j, 100);
    CHECK(spectra::semicircle_cdf(x) ==
          doctest::Approx(1.0 - j / 100.0).epsilon(1e-10));
  }
  CHECK_THROWS_AS(spectra::classical_location(0, 5), DomainError);
  CHECK_THROWS_AS(spectra::classical_location(6, 5), DomainError);
}

TEST_CASE("xi closed form") {
  CHECK(spectra::xi(2.0) == 0.0);
  CHECK(spectra::xi(-1.3) == 0.0);
  CHECK(spectra::xi(3.0) == doctest::Approx(0.7146273330).epsilon(1e-9));
  CHECK(spectra::xi(-3.0) == spectra::xi(3.0));
  // substitute u = 2 + s^2 to regularize the endpoint
  auto integrand = [](double s) { return s * s * std::sqrt(4.0 + s * s); };
  for (double t : {2.5, 3.0, 4.0, 9.0}) {
    const double q = oracles::gl_integrate(integrand, 0.0, std::sqrt(t - 2.0), 64);
    CHECK(spectra::xi(t) == doctest::Approx(q).epsilon(1e-10));
  }
}

TEST_CASE("xi_tilde pushes through the edge rescaling") {
  CHECK(spectra::xi_tilde(0.0, 8, 2) == 0.0);
  // inside the rescaled bulk the potential vanishes
  CHECK(spectra::xi_tilde(1.0, 8, 2) == 0.0);
  CHECK(spectra::xi_tilde(4.0 * std::pow(4.0, 2.0 / 3.0) - 1e-9, 8, 2) == 0.0);
  // left of zero it is strictly positive and matches the definition
  const double nn = 8, kk = 2, x = -1.5;
  const double direct =
      (nn / kk) * spectra::xi(2.0 - std::pow(kk / nn, 2.0 / 3.0) * x);
  CHECK(spectra::xi_tilde(x, nn, kk) == doctest::Approx(direct));
  CHECK(spectra::xi_tilde(-1e-6, nn, kk) > 0.0);
  CHECK_THROWS_AS(spectra::xi_tilde(0.0, 0.0, 1.0), DomainError);
}

TEST_CASE("noiseless blow-up: frozen drift hits pi/sqrt(a)") {
  for (double a : {1.0, 4.0, 16.0, 100.0}) {
    const double want = M_PI / std::sqrt(a);
    const double got = spectra::riccati_ode_blowup(a, true);
    CHECK(got == doctest::Approx(want).epsilon(1e-6));
  }
}

TEST_CASE("noiseless blow-up: full drift vs RK4 oracle and analytic window") {
  for (double a : {16.0, 64.0, 256.0}) {
    const double got = spectra::riccati_ode_blowup(a, false);
    const double ref = oracles::ode_blowup_rk4(a, false, 1e-6);
    CHECK(got == doctest::Approx(ref).epsilon(1e-6));
    const double lo = M_PI / std::sqrt(a);
    const double hi = M_PI / std::sqrt(a - 2.0 * M_PI / std::sqrt(a));
    CHECK(got >= lo);
    CHECK(got <= hi);
  }
}

TEST_CASE("noiseless blow-up: degenerate inputs") {
  CHECK_THROWS_AS(spectra::riccati_ode_blowup(-1.0, true), DomainError);
  // below the first Airy level the full drift never blows up
  CHECK_THROWS_AS(spectra::riccati_ode_blowup(1.0, false), NumericalError);
}
