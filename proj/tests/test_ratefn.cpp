#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "airylab/errors.hpp"
#include "airylab/measures.hpp"
#include "airylab/ratefn.hpp"
#include "airylab/rng.hpp"
#include "airylab/spectra.hpp"
#include "oracles.hpp"

using namespace airylab;
using measures::SignedMeasure;
using ratefn::RateParams;

namespace {

constexpr double kPi = 3.14159265358979323846;

SignedMeasure atomic(std::vector<std::pair<double, double>> atoms, double R) {
  SignedMeasure m;
  m.atoms = std::move(atoms);
  m.lo = -R;
  m.hi = R;
  return m;
}

SignedMeasure random_atomic(Stream& s, int count, double R, bool positive) {
  std::vector<std::pair<double, double>> a;
  for (int i = 0; i < count; ++i) {
    double w = positive ? 0.2 + s.uniform() : 2.0 * s.uniform() - 1.0;
    a.emplace_back(-0.95 * R + 1.9 * R * s.uniform(), w);
  }
  std::sort(a.begin(), a.end());
  return atomic(std::move(a), R);
}

double atom_potential(const SignedMeasure& m) {
  double s = 0.0;
  for (const auto& [x, w] : m.atoms)
    if (x < 0.0) s += w * (4.0 / 3.0) * std::pow(-x, 1.5);
  return s;
}

double atom_interaction(const SignedMeasure& m, double R0, double R1) {
  double eps = std::pow(R1, -3.0);
  double s = 0.0;
  for (const auto& [xi, wi] : m.atoms)
    for (const auto& [xj, wj] : m.atoms) {
      if (std::abs(xi) > R0 || std::abs(xj) > R0) continue;
      s += wi * wj * -std::log(std::max(std::abs(xi - xj), eps));
    }
  return s;
}

}  // namespace

TEST_CASE("rate params validation") {
  CHECK_THROWS_AS(ratefn::validate(RateParams{0.5, 10.0, 1.0}), DomainError);
  CHECK_THROWS_AS(ratefn::validate(RateParams{1.0, 0.9, 1.0}), DomainError);
  CHECK_THROWS_AS(ratefn::validate(RateParams{1.0, 10.0, 0.0}), DomainError);
  CHECK_NOTHROW(ratefn::validate(RateParams{}));
}

TEST_CASE("rate_I atomic closed forms") {
  // single unit atom at the origin: pure truncated self-interaction
  SignedMeasure d0 = atomic({{0.0, 1.0}}, 1.0);
  RateParams p{1.0, 10.0, 1.0};
  CHECK(ratefn::rate_I(d0, p) ==
        doctest::Approx(3.0 * std::log(10.0)).epsilon(1e-13));

  // symmetric pair at +-1: two self terms, one cross pair, one potential atom
  SignedMeasure pair = atomic({{-1.0, 0.5}, {1.0, 0.5}}, 1.0);
  RateParams p2{1.0, 1000.0, 1.0};
  double expect = 2.0 * 0.25 * 3.0 * std::log(1000.0) -
                  2.0 * 0.25 * std::log(2.0) + (4.0 / 3.0) * 0.5;
  CHECK(ratefn::rate_I(pair, p2) == doctest::Approx(expect).epsilon(1e-13));

  // empty measure
  CHECK(ratefn::rate_I(atomic({}, 1.0), p) == 0.0);

  // window must cover [-R0, R0]
  SignedMeasure narrow = atomic({{0.0, 1.0}}, 0.5);
  CHECK_THROWS_AS(ratefn::rate_I(narrow, p), DomainError);
}

TEST_CASE("rate_I matches brute-force sums on random atomic measures") {
  Stream s(0x4a7e, 0);
  RateParams p{1.0, 25.0, 1.0};
  for (int rep = 0; rep < 8; ++rep) {
    SignedMeasure m = random_atomic(s, 6, 1.4, false);
    double brute = atom_interaction(m, p.R0, p.R1) + atom_potential(m);
    CHECK(ratefn::rate_I(m, p) == doctest::Approx(brute).epsilon(1e-12));
  }
}

TEST_CASE("rate_I with density matches independent quadrature") {
  RateParams p{1.0, 10.0, 1.0};
  double eps = std::pow(p.R1, -3.0);

  // pure negated Airy reference on [-1.5, 1.5]
  SignedMeasure ref = measures::nu_k({}, 3, 1.5);
  auto rho = [&](double y) { return measures::density_value(ref, y); };
  auto [s0, s1] = measures::density_support(ref);
  double a = std::max(s0, -p.R0), b = std::min(s1, p.R0);
  double brute_dd = oracles::gl_integrate(
      [&](double x) {
        return rho(x) * oracles::floored_inner_gl(rho, a, b, x, eps, 160);
      },
      a, b, 160);
  CHECK(ratefn::rate_I(ref, p) == doctest::Approx(brute_dd).epsilon(2e-7));

  // atoms plus density
  SignedMeasure mix = measures::nu_k({-2.5, -40.0}, 2, 1.5);
  auto rho2 = [&](double y) { return measures::density_value(mix, y); };
  double cross = 0.0;
  for (const auto& [x, w] : mix.atoms)
    if (std::abs(x) <= p.R0)
      cross += 2.0 * w * oracles::floored_inner_gl(rho2, a, b, x, eps, 160);
  double brute = atom_interaction(mix, p.R0, p.R1) + cross +
                 oracles::gl_integrate(
                     [&](double x) {
                       return rho2(x) *
                              oracles::floored_inner_gl(rho2, a, b, x, eps, 160);
                     },
                     a, b, 160) +
                 atom_potential(mix);
  CHECK(ratefn::rate_I(mix, p) == doctest::Approx(brute).epsilon(2e-7));
}

TEST_CASE("rate_I interaction part is reflection invariant") {
  Stream s(0x5ef1, 0);
  RateParams p{1.0, 12.0, 1.0};
  for (int rep = 0; rep < 6; ++rep) {
    SignedMeasure m = random_atomic(s, 5, 1.3, false);
    SignedMeasure r = m;
    for (auto& [x, w] : r.atoms) x = -x;
    std::sort(r.atoms.begin(), r.atoms.end());
    double im = ratefn::rate_I(m, p) - atom_potential(m);
    double ir = ratefn::rate_I(r, p) - atom_potential(r);
    CHECK(im == doctest::Approx(ir).epsilon(1e-8));
  }
}

TEST_CASE("floored kernel makes atomic energy non-decreasing in R1") {
  // the kernel -log(max{|x-y|, R1^-3}) is pointwise non-decreasing in R1, so
  // sums over non-negative atomic measures inherit that direction
  Stream s(0x31f2, 0);
  for (int rep = 0; rep < 6; ++rep) {
    SignedMeasure m = random_atomic(s, 5, 1.2, true);
    double prev = -std::numeric_limits<double>::infinity();
    for (double r1 : {2.0, 5.0, 20.0, 200.0}) {
      RateParams p{1.0, r1, 1.0};
      double v = ratefn::rate_I(m, p);
      CHECK(v >= prev - 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("psi piecewise formula") {
  RateParams p{1.0, 10.0, 1.0};
  // hand value on the x >= 0 branch
  double expect = 0.01 / (8.0 * std::log(10.0));
  CHECK(ratefn::psi_value(1.0, 0.1, p) == doctest::Approx(expect).epsilon(1e-13));
  CHECK(ratefn::psi_value(1.0, 0.1, p) == doctest::Approx(0.000543).epsilon(2e-3));
  // negative branch is (2/3)|x|^{3/2}|phi|
  CHECK(ratefn::psi_value(-1.0, 0.25, p) ==
        doctest::Approx((2.0 / 3.0) * 0.25).epsilon(1e-13));
  CHECK(ratefn::psi_value(-4.0, -0.5, p) ==
        doctest::Approx((2.0 / 3.0) * 8.0 * 0.5).epsilon(1e-13));
  // zero deviation and the x = 0 corner give zero
  CHECK(ratefn::psi_value(3.0, 0.0, p) == 0.0);
  CHECK(ratefn::psi_value(0.0, 0.4, p) == 0.0);
  // large R0 cap picks the other branch
  RateParams big{4.0, 10.0, 1.0};
  double cap = (2.0 / 3.0) * std::pow(4.0, 1.5) * 0.1;
  CHECK(ratefn::psi_value(1.0, 0.1, big) ==
        doctest::Approx(std::min(cap, expect)).epsilon(1e-13));
}

TEST_CASE("psi trace and I2") {
  RateParams p{3.0, 10.0, 1.0};
  // single atom of weight w at -2: phi = w right of the atom, so psi peaks
  // at the atom position on the negative branch
  double w = 0.6;
  SignedMeasure m = atomic({{-2.0, w}}, 3.0);
  auto tr = ratefn::psi_and_I2(m, p);
  CHECK(tr.x.size() == tr.psi.size());
  CHECK(tr.x.size() >= 2048);
  for (std::size_t i = 1; i < tr.x.size(); ++i) CHECK(tr.x[i] > tr.x[i - 1]);
  CHECK(tr.i2 ==
        doctest::Approx((2.0 / 3.0) * std::pow(2.0, 1.5) * w).epsilon(1e-12));
  // the quoted x < 0 example: psi at -1 with phi = w
  double phi = measures::mass(m, -3.0, -1.0);
  CHECK(phi == w);
  CHECK(ratefn::psi_value(-1.0, phi, p) ==
        doctest::Approx((2.0 / 3.0) * w).epsilon(1e-13));

  // empty measure: identically zero
  auto tz = ratefn::psi_and_I2(atomic({}, 3.0), p);
  CHECK(tz.i2 == 0.0);
  for (double v : tz.psi) CHECK(v == 0.0);

  // nonzero positive measures have strictly positive I2
  Stream s(0x77aa, 0);
  for (int rep = 0; rep < 10; ++rep) {
    SignedMeasure r = random_atomic(s, 4, 3.0, true);
    CHECK(ratefn::psi_and_I2(r, p).i2 > 0.0);
  }

  SignedMeasure narrow = atomic({}, 1.0);
  CHECK_THROWS_AS(ratefn::psi_and_I2(narrow, p), DomainError);
}

TEST_CASE("phi_minus closed form") {
  CHECK(ratefn::phi_minus(0.0) == 0.0);
  CHECK(ratefn::phi_minus(-1.0) == doctest::Approx(0.05026).epsilon(5e-4));
  // derivative vanishes at 0 (one-sided difference; z > 0 is out of domain)
  double h = 1e-6;
  double d = (ratefn::phi_minus(0.0) - ratefn::phi_minus(-h)) / h;
  CHECK(std::abs(d) <= 1e-8);
  // non-negative and convex on [-10, 0]
  int n = 1001;
  double step = 10.0 / (n - 1);
  std::vector<double> vals(n);
  for (int i = 0; i < n; ++i) vals[i] = ratefn::phi_minus(-10.0 + i * step);
  for (double v : vals) CHECK(v >= 0.0);
  for (int i = 1; i + 1 < n; ++i)
    CHECK(vals[i - 1] - 2.0 * vals[i] + vals[i + 1] >= -1e-8);
  CHECK_THROWS_AS(ratefn::phi_minus(0.5), DomainError);
}

TEST_CASE("log energy J closed forms and coincidence guard") {
  SignedMeasure unit = atomic({{0.0, 1.0}, {1.0, 1.0}}, 2.0);
  CHECK(ratefn::log_energy_J(unit) == 0.0);
  SignedMeasure espaced = atomic({{0.0, 1.0}, {std::exp(1.0), 1.0}}, 4.0);
  CHECK(ratefn::log_energy_J(espaced) == doctest::Approx(-2.0).epsilon(1e-13));
  SignedMeasure coincident = atomic({{0.5, 1.0}, {0.5, 1.0}}, 1.0);
  CHECK_THROWS_AS(ratefn::log_energy_J(coincident), DomainError);

  // mixed pair across measures
  SignedMeasure a = atomic({{0.0, 0.7}}, 2.0);
  SignedMeasure b = atomic({{0.5, 1.2}}, 2.0);
  CHECK(ratefn::cross_J(a, b) ==
        doctest::Approx(-0.7 * 1.2 * std::log(0.5)).epsilon(1e-13));
  CHECK_THROWS_AS(ratefn::cross_J(a, a), DomainError);
}

TEST_CASE("uniform density log energy is 3/2") {
  double J = ratefn::log_energy_J([](double) { return 1.0; }, 0.0, 1.0);
  CHECK(J == doctest::Approx(1.5).epsilon(1e-6));
}

TEST_CASE("J with reference density matches substituted quadrature") {
  SignedMeasure mix = measures::nu_k({-2.0, -30.0}, 2, 1.2);
  auto rho = [&](double y) { return measures::density_value(mix, y); };
  auto [s0, s1] = measures::density_support(mix);
  double brute = 0.0;
  const auto& A = mix.atoms;
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = i + 1; j < A.size(); ++j)
      brute += -2.0 * A[i].second * A[j].second *
               std::log(std::abs(A[i].first - A[j].first));
  for (const auto& [x, w] : A)
    brute += -2.0 * w * oracles::log_inner_gl(rho, s0, s1, x, 160);
  brute += oracles::log_energy_density_gl(rho, s0, s1, 160);
  CHECK(ratefn::log_energy_J(mix) == doctest::Approx(brute).epsilon(2e-7));

  // cross energy between two density measures, against the same oracle family
  SignedMeasure ref = measures::nu_k({}, 3, 1.2);
  auto rho_ref = [&](double y) { return measures::density_value(ref, y); };
  double cross_brute =
      -oracles::gl_integrate(
          [&](double x) {
            return rho(x) * oracles::log_inner_gl(rho_ref, s0, s1, x, 160);
          },
          s0, s1, 160);
  for (const auto& [x, w] : A)
    cross_brute += -w * oracles::log_inner_gl(rho_ref, s0, s1, x, 160);
  CHECK(ratefn::cross_J(mix, ref) == doctest::Approx(cross_brute).epsilon(2e-7));
}

TEST_CASE("J0 adds twice the xi-tilde potential") {
  SignedMeasure m = atomic({{-1.2, 0.7}, {-0.5, 0.3}, {0.4, 0.5}}, 2.0);
  double n = 64.0, k = 4.0;
  double pot = 0.7 * spectra::xi_tilde(-1.2, n, k) +
               0.3 * spectra::xi_tilde(-0.5, n, k);
  CHECK(ratefn::log_energy_J0(m, n, k) ==
        doctest::Approx(ratefn::log_energy_J(m) + 2.0 * pot).epsilon(1e-12));
  CHECK_THROWS_AS(ratefn::log_energy_J0(m, 2.0, 4.0), DomainError);
}

TEST_CASE("i1_upper: infinite with atoms, density energy without") {
  SignedMeasure with_atom = atomic({{0.3, 0.5}}, 1.0);
  CHECK(std::isinf(ratefn::i1_upper(with_atom)));
  SignedMeasure ref = measures::nu_k({}, 3, 1.2);
  CHECK(ratefn::i1_upper(ref) ==
        doctest::Approx(ratefn::log_energy_J(ref)).epsilon(1e-12));
}
