#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <utility>
#include <vector>

#include "airylab/errors.hpp"
#include "airylab/measures.hpp"
#include "airylab/rng.hpp"
#include "airylab/spectra.hpp"
#include "oracles.hpp"

using namespace airylab;
using measures::Density;
using measures::DensityKind;
using measures::SignedMeasure;

namespace {

constexpr double kPi = 3.14159265358979323846;

SignedMeasure atoms_only(std::vector<std::pair<double, double>> atoms,
                         double R) {
  SignedMeasure m;
  m.atoms = std::move(atoms);
  m.lo = -R;
  m.hi = R;
  return m;
}

SignedMeasure random_atomic(Stream& s, int count, double R) {
  std::vector<std::pair<double, double>> a;
  for (int i = 0; i < count; ++i)
    a.emplace_back(-0.9 * R + 1.8 * R * s.uniform(), 2.0 * s.uniform() - 1.0);
  std::sort(a.begin(), a.end());
  return atoms_only(std::move(a), R);
}

}  // namespace

TEST_CASE("nu_k maps points, truncates, and rejects short lists") {
  long long k = 8;
  double R = 1.5;
  // descending Airy-type points a_i = -gamma_i
  std::vector<double> pts;
  for (int i = 1; i <= 6; ++i)
    pts.push_back(-spectra::airy_eigenvalue(i, spectra::AirySpectrumMode::Exact));
  SignedMeasure m = measures::nu_k(pts, k, R);
  CHECK(m.lo == -R);
  CHECK(m.hi == R);
  CHECK(m.density.kind == DensityKind::AiryReference);
  CHECK(m.density.sign == -1);
  // gamma_i / k^{2/3} <= 1.5 holds for the first three zeros only
  REQUIRE(m.atoms.size() == 3);
  double kc = std::pow(static_cast<double>(k), -2.0 / 3.0);
  for (std::size_t i = 0; i < m.atoms.size(); ++i) {
    CHECK(m.atoms[i].first == doctest::Approx(-kc * pts[i]).epsilon(1e-14));
    CHECK(m.atoms[i].second == 1.0 / 8.0);
    if (i) CHECK(m.atoms[i].first > m.atoms[i - 1].first);
  }

  // a_1 = -k^{2/3} lands exactly at +1
  SignedMeasure one = measures::nu_k({-4.0, -32.0}, 8, 2.0);
  REQUIRE(one.atoms.size() == 1);
  CHECK(one.atoms[0].first == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(one.atoms[0].second == 0.125);

  // empty list: pure negated reference
  SignedMeasure ref = measures::nu_k({}, 5, 2.0);
  CHECK(ref.atoms.empty());
  CHECK(ref.density.kind == DensityKind::AiryReference);

  // list stopping inside the window is an error, as is a non-descending list
  CHECK_THROWS_AS(measures::nu_k({pts[0], pts[1], pts[2]}, k, R), DomainError);
  CHECK_THROWS_AS(measures::nu_k({-5.0, -4.0, -100.0}, k, R), DomainError);
  CHECK_THROWS_AS(measures::nu_k(pts, 0, R), DomainError);
  CHECK_THROWS_AS(measures::nu_k(pts, k, -1.0), DomainError);
}

TEST_CASE("airy reference mass: closed form, additivity, quadrature oracle") {
  SignedMeasure m = measures::nu_k({}, 5, 2.0);
  CHECK(measures::mass(m, 0.0, 1.0) ==
        doctest::Approx(-2.0 / (3.0 * kPi)).epsilon(1e-12));
  double R = 2.0;
  CHECK(measures::mass(m, -R, R) ==
        doctest::Approx(-2.0 / (3.0 * kPi) * std::pow(R, 1.5)).epsilon(1e-12));
  // additivity at an interior cut
  double c = 0.37;
  CHECK(measures::mass(m, -R, c) + measures::mass(m, c, R) ==
        doctest::Approx(measures::mass(m, -R, R)).epsilon(1e-13));
  // independent quadrature (kink removed by x = s^2)
  double q = oracles::gl_integrate(
      [](double s) { return 2.0 * s * s / kPi; }, 0.0, std::sqrt(2.0), 32);
  CHECK(measures::mass(m, 0.0, 2.0) == doctest::Approx(-q).epsilon(1e-11));

  CHECK_THROWS_AS(measures::mass(m, -3.0, 0.0), DomainError);
  CHECK_THROWS_AS(measures::mass(m, 1.0, 0.5), DomainError);

  // interval ends are inclusive for atoms
  SignedMeasure a = atoms_only({{0.5, 0.25}}, 1.0);
  CHECK(measures::mass(a, 0.5, 0.6) == 0.25);
  CHECK(measures::mass(a, 0.4, 0.5) == 0.25);
  CHECK(measures::mass(a, 0.51, 0.6) == 0.0);
}

TEST_CASE("mu_nk geometry and equilibrium density mass") {
  long long n = 64, k = 4;
  double R = 30.0;
  // lambda = 2 sqrt(n) maps to the origin
  SignedMeasure one = measures::mu_nk({2.0 * std::sqrt(64.0)}, n, k, R);
  REQUIRE(one.atoms.size() == 1);
  CHECK(one.atoms[0].first == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(one.atoms[0].second == 0.25);
  CHECK(one.density.kind == DensityKind::SemicircleRescaled);
  CHECK(one.density.sign == -1);

  // density vanishes at both support ends and total mass is n/k
  SignedMeasure m = measures::mu_nk({}, n, k, R);
  double c = std::pow(static_cast<double>(k) / n, 2.0 / 3.0);
  double top = 4.0 / c;
  CHECK(measures::density_value(m, 0.0) == 0.0);
  CHECK(std::abs(measures::density_value(m, top)) < 1e-12);
  CHECK(std::abs(measures::density_value(m, top - 1e-9)) < 1e-4);
  CHECK(measures::mass(m, -R, R) ==
        doctest::Approx(-static_cast<double>(n) / k).epsilon(1e-12));

  // partial mass vs quadrature with the sqrt kinks substituted away:
  // x = (4/c) sin^2(theta) turns the density integral into
  // (16 / (pi c^{3/2})) sin^2 cos^2 dtheta.
  double x2 = 10.0;
  double t2 = std::asin(std::sqrt(c * x2 / 4.0));
  double q = oracles::gl_integrate(
      [&](double t) {
        double sc = std::sin(t) * std::cos(t);
        return 16.0 / (kPi * std::pow(c, 1.5)) * sc * sc;
      },
      0.0, t2, 32);
  CHECK(measures::mass(m, 0.0, x2) == doctest::Approx(-q).epsilon(1e-10));

  CHECK_THROWS_AS(measures::mu_nk({}, 3, 4, R), DomainError);
  CHECK_THROWS_AS(measures::mu_nk({1.0, 2.0}, n, k, R), DomainError);
}

TEST_CASE("measure validation rejects malformed inputs") {
  SignedMeasure bad = atoms_only({{0.5, 1.0}, {0.2, 1.0}}, 1.0);
  CHECK_THROWS_AS(measures::validate(bad), DomainError);
  SignedMeasure outside = atoms_only({{2.0, 1.0}}, 1.0);
  CHECK_THROWS_AS(measures::validate(outside), DomainError);
  SignedMeasure sgn = atoms_only({}, 1.0);
  sgn.density = {DensityKind::AiryReference, 3, 0.0, 0.0};
  CHECK_THROWS_AS(measures::validate(sgn), DomainError);
  SignedMeasure semi = atoms_only({}, 1.0);
  semi.density = {DensityKind::SemicircleRescaled, 1, 2.0, 4.0};
  CHECK_THROWS_AS(measures::validate(semi), DomainError);
}

TEST_CASE("grid weights: atom interpolation and density mass preservation") {
  double R = 2.0;
  int m = 128;
  double h = 2.0 * R / m;
  // on-node atom stays whole
  SignedMeasure a = atoms_only({{-R + 37 * h, 0.7}}, R);
  SignedMeasure zero = atoms_only({}, R);
  auto w = measures::grid_weights(a, zero, R, m);
  CHECK(w[37] == doctest::Approx(0.7).epsilon(1e-12));
  double sum = 0.0;
  for (double x : w) sum += x;
  CHECK(sum == doctest::Approx(0.7).epsilon(1e-12));
  // mid-cell atom splits in half
  SignedMeasure b = atoms_only({{-R + 10.5 * h, 1.0}}, R);
  w = measures::grid_weights(b, zero, R, m);
  CHECK(w[10] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(w[11] == doctest::Approx(0.5).epsilon(1e-9));
  // density projection preserves total mass
  SignedMeasure ref = measures::nu_k({}, 3, R);
  w = measures::grid_weights(ref, zero, R, m);
  sum = 0.0;
  for (double x : w) sum += x;
  CHECK(sum == doctest::Approx(measures::mass(ref, -R, R)).epsilon(1e-9));
}

TEST_CASE("bl distance: two-atom closed forms and exact self-distance") {
  double R = 4.0;
  int m = 256;
  double h = 2.0 * R / m;
  SignedMeasure d0 = atoms_only({{0.0, 1.0}}, R);
  for (double t : {0.5, 1.0, 3.0}) {
    SignedMeasure dt = atoms_only({{t, 1.0}}, R);
    auto r = measures::bl_distance(d0, dt, R, m);
    // both atoms sit on grid nodes here, so the value is exact
    CHECK(r.value == doctest::Approx(std::min(t, 2.0)).epsilon(1e-10));
    CHECK(r.err_bound == doctest::Approx(2.0 * h).epsilon(1e-12));
    // off-grid atom: within the documented 2h
    SignedMeasure off = atoms_only({{t + h / 3.0, 1.0}}, R);
    auto r2 = measures::bl_distance(d0, off, R, m);
    CHECK(std::abs(r2.value - std::min(t + h / 3.0, 2.0)) <= 2.0 * h);
  }
  // d(w delta_0, 0) = w
  SignedMeasure wd = atoms_only({{0.0, 0.7}}, R);
  SignedMeasure zero = atoms_only({}, R);
  CHECK(measures::bl_distance(wd, zero, R, m).value ==
        doctest::Approx(0.7).epsilon(1e-12));
  // identical arguments give exactly zero
  SignedMeasure mu = measures::nu_k({-3.0, -40.0}, 2, R);
  CHECK(measures::bl_distance(mu, mu, R, m).value == 0.0);

  // resolution warning
  SignedMeasure close1 = atoms_only({{0.0, 1.0}, {h / 3.0, 1.0}}, R);
  CHECK(measures::bl_distance(close1, zero, R, m).atoms_unresolved);
  SignedMeasure apart = atoms_only({{0.0, 1.0}, {2.0 * h, 1.0}}, R);
  CHECK_FALSE(measures::bl_distance(apart, zero, R, m).atoms_unresolved);

  CHECK_THROWS_AS(measures::bl_distance(d0, zero, R, 32), DomainError);
  SignedMeasure wide = atoms_only({}, 2.0 * R);
  CHECK_THROWS_AS(measures::bl_distance(wide, zero, R, m), DomainError);
}

TEST_CASE("bl distance matches the lattice dynamic program") {
  double R = 2.0;
  int m = 128;
  double h = 2.0 * R / m;     // 1/32
  int levels = 4097;          // step 1/2048 divides h exactly
  double step = 2.0 / (levels - 1);
  Stream s(0xb1d0, 0);
  for (int rep = 0; rep < 12; ++rep) {
    SignedMeasure mu = random_atomic(s, 5, R);
    SignedMeasure nu = random_atomic(s, 4, R);
    if (rep % 3 == 0) nu = measures::nu_k({}, 2 + rep, R);
    auto w = measures::grid_weights(mu, nu, R, m);
    double tv = 0.0;
    for (double x : w) tv += std::abs(x);
    for (bool pinned : {false, true}) {
      auto r = measures::bl_distance(mu, nu, R, m, pinned);
      double lat = oracles::bl_lattice_dp(w, h, levels, pinned);
      CHECK(r.value >= lat - 1e-9);
      CHECK(r.value <= lat + step * (1.0 + tv));
    }
  }
}

TEST_CASE("bl distance metric axioms") {
  double R = 2.0;
  int m = 64;
  Stream s(0xaeab, 0);
  for (int rep = 0; rep < 30; ++rep) {
    SignedMeasure a = random_atomic(s, 4, R);
    SignedMeasure b = random_atomic(s, 3, R);
    SignedMeasure c = random_atomic(s, 5, R);
    double dab = measures::bl_distance(a, b, R, m).value;
    double dba = measures::bl_distance(b, a, R, m).value;
    double dbc = measures::bl_distance(b, c, R, m).value;
    double dac = measures::bl_distance(a, c, R, m).value;
    CHECK(dab >= 0.0);
    CHECK(std::abs(dab - dba) <= 1e-12);
    CHECK(dac <= dab + dbc + 1e-12);
    CHECK(measures::bl_distance(a, a, R, m).value == 0.0);
  }
}

TEST_CASE("bl distance is translation-equivariant on the grid") {
  double R = 2.0;
  int m = 128;
  double h = 2.0 * R / m;
  SignedMeasure a = atoms_only({{-R + 20 * h, 0.8}, {-R + 33 * h, -0.4}}, R);
  SignedMeasure b = atoms_only({{-R + 25 * h, 0.5}}, R);
  double d0 = measures::bl_distance(a, b, R, m).value;
  int shift = 16;
  auto move = [&](const SignedMeasure& src) {
    SignedMeasure out = src;
    for (auto& [x, w] : out.atoms) x = x + shift * h;
    return out;
  };
  double d1 = measures::bl_distance(move(a), move(b), R, m).value;
  CHECK(std::abs(d0 - d1) <= 1e-12);
}

TEST_CASE("pinned variant never exceeds the free one and binds at the edge") {
  double R = 2.0;
  int m = 128;
  double h = 2.0 * R / m;
  Stream s(0x9177, 0);
  for (int rep = 0; rep < 10; ++rep) {
    SignedMeasure mu = random_atomic(s, 4, R);
    SignedMeasure nu = random_atomic(s, 4, R);
    double free_d = measures::bl_distance(mu, nu, R, m).value;
    double pin_d = measures::bl_distance(mu, nu, R, m, true).value;
    CHECK(pin_d <= free_d + 1e-12);
  }
  // an atom 4 cells from the pinned right end can only be lifted to 4h
  SignedMeasure edge = atoms_only({{R - 4 * h, 1.0}}, R);
  SignedMeasure zero = atoms_only({}, R);
  auto r = measures::bl_distance(edge, zero, R, m, true);
  CHECK(r.value == doctest::Approx(4.0 * h).epsilon(1e-10));
}

TEST_CASE("json round-trip is exact") {
  SignedMeasure m = measures::mu_nk({15.3, 14.9, 12.0}, 64, 4, 27.5);
  std::string text = measures::to_json(m);
  SignedMeasure back = measures::from_json(text);
  REQUIRE(back.atoms.size() == m.atoms.size());
  for (std::size_t i = 0; i < m.atoms.size(); ++i) {
    CHECK(back.atoms[i].first == m.atoms[i].first);
    CHECK(back.atoms[i].second == m.atoms[i].second);
  }
  CHECK(back.density.kind == m.density.kind);
  CHECK(back.density.sign == m.density.sign);
  CHECK(back.density.n == m.density.n);
  CHECK(back.density.k == m.density.k);
  CHECK(back.lo == m.lo);
  CHECK(back.hi == m.hi);

  SignedMeasure ref = measures::nu_k({-2.3381074104597674, -40.0}, 7, 1.25);
  SignedMeasure ref2 = measures::from_json(measures::to_json(ref));
  CHECK(ref2.atoms[0].first == ref.atoms[0].first);
  CHECK(ref2.density.kind == DensityKind::AiryReference);

  CHECK_THROWS_AS(measures::from_json("{ not json"), DomainError);
  CHECK_THROWS_AS(measures::from_json("{\"atoms\":[]}"), DomainError);
  CHECK_THROWS_AS(
      measures::from_json("{\"atoms\":[],\"density\":{\"kind\":\"nope\"},"
                          "\"window\":[0,1]}"),
      DomainError);
  CHECK_THROWS_AS(
      measures::from_json("{\"atoms\":[[5,1]],\"density\":{\"kind\":\"none\"},"
                          "\"window\":[0,1]}"),
      DomainError);
}
