#include "airylab/ratefn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "airylab/errors.hpp"
#include "airylab/spectra.hpp"

namespace airylab::ratefn {

namespace {

constexpr double kPi = 3.14159265358979323846;

double simpson_recurse(const std::function<double(double)>& f, double a,
                       double b, double fa, double fm, double fb, double whole,
                       double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol) {
  if (!(b > a)) return 0.0;
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_recurse(f, a, b, fa, fm, fb, whole, tol, 48);
}

// t * (log t - 1), continuously extended by 0 at t = 0: the antiderivative
// of log at the singular end.
double tlog(double t) { return t > 0.0 ? t * (std::log(t) - 1.0) : 0.0; }

// integral of rho(y) log|x-y| dy over [a, b].  When x lies inside, the
// singular part is subtracted analytically so the quadrature only ever sees
// the bounded remainder (rho(y) - rho(x)) log|x-y|.
double log_inner(const std::function<double(double)>& rho, double a, double b,
                 double x, double tol) {
  if (!(b > a)) return 0.0;
  if (x < a || x > b) {
    return adaptive_simpson(
        [&](double y) { return rho(y) * std::log(std::abs(y - x)); }, a, b,
        tol);
  }
  double rx = rho(x);
  double closed = rx * (tlog(b - x) + tlog(x - a));
  auto g = [&](double y) {
    if (y == x) return 0.0;
    return (rho(y) - rx) * std::log(std::abs(y - x));
  };
  return closed + adaptive_simpson(g, a, x, 0.5 * tol) +
         adaptive_simpson(g, x, b, 0.5 * tol);
}

// integral of rho(y) * (-log(max(|x-y|, eps))) dy over [a, b] for the
// floored kernel: the plateau |y-x| <= eps is exact via density_mass, the
// two smooth flanks go to the adaptive rule.
double floored_inner(const measures::SignedMeasure& mu, double a, double b,
                     double x, double eps, double tol) {
  if (!(b > a)) return 0.0;
  double out = 0.0;
  double ml = std::max(a, x - eps), mr = std::min(b, x + eps);
  if (mr > ml) out += -std::log(eps) * measures::density_mass(mu, ml, mr);
  double left_hi = std::min(b, x - eps);
  if (left_hi > a)
    out += adaptive_simpson(
        [&](double y) { return -measures::density_value(mu, y) * std::log(x - y); },
        a, left_hi, tol);
  double right_lo = std::max(a, x + eps);
  if (b > right_lo)
    out += adaptive_simpson(
        [&](double y) { return -measures::density_value(mu, y) * std::log(y - x); },
        right_lo, b, tol);
  return out;
}

// (4/3)|x|^{3/2} over the negative axis.  Both reference density families
// vanish below 0, so only atoms contribute.
double negative_axis_potential(const measures::SignedMeasure& mu) {
  double s = 0.0;
  for (const auto& [x, w] : mu.atoms)
    if (x < 0.0) s += w * (4.0 / 3.0) * std::pow(-x, 1.5);
  return s;
}

}  // namespace

void validate(const RateParams& p) {
  if (!(p.R0 >= 1.0) || !std::isfinite(p.R0))
    throw DomainError("rate params: R0 must be finite and >= 1");
  if (!(p.R1 >= 1.0) || !std::isfinite(p.R1))
    throw DomainError("rate params: R1 must be finite and >= 1");
  if (!(p.c_prop22 > 0.0)) throw DomainError("rate params: c_prop22 must be > 0");
}

double rate_I(const measures::SignedMeasure& mu, const RateParams& p) {
  validate(p);
  measures::validate(mu);
  if (mu.lo > -p.R0 || mu.hi < p.R0)
    throw DomainError("rate_I: measure window must cover [-R0, R0]");
  double eps = std::pow(p.R1, -3.0);
  std::vector<std::pair<double, double>> in;
  for (const auto& [x, w] : mu.atoms)
    if (std::abs(x) <= p.R0) in.emplace_back(x, w);

  double inter = 0.0;
  for (const auto& [xi, wi] : in)
    for (const auto& [xj, wj] : in)
      inter += wi * wj * -std::log(std::max(std::abs(xi - xj), eps));

  auto [s0, s1] = measures::density_support(mu);
  double a = std::max(s0, -p.R0), b = std::min(s1, p.R0);
  if (b > a) {
    for (const auto& [xi, wi] : in)
      inter += 2.0 * wi * floored_inner(mu, a, b, xi, eps, 1e-9);
    inter += adaptive_simpson(
        [&](double x) {
          return measures::density_value(mu, x) *
                 floored_inner(mu, a, b, x, eps, 1e-10);
        },
        a, b, 1e-8);
  }
  return inter + negative_axis_potential(mu);
}

double psi_value(double x, double phi, const RateParams& p) {
  double aphi = std::abs(phi);
  if (aphi == 0.0) return 0.0;
  if (x < 0.0) return (2.0 / 3.0) * std::pow(-x, 1.5) * aphi;
  double cap = (2.0 / 3.0) * std::pow(p.R0, 1.5) * aphi;
  double num = std::min(aphi * aphi, x * x * x / 6.0);
  double larg = std::max(2.0, std::pow(x, 1.5) / aphi);
  double alt = (p.c_prop22 / 8.0) * num / std::log(larg);
  return std::min(cap, alt);
}

PsiTrace psi_and_I2(const measures::SignedMeasure& mu, const RateParams& p,
                    int grid_points) {
  validate(p);
  measures::validate(mu);
  if (mu.lo > -p.R0 || mu.hi < p.R0)
    throw DomainError("psi_and_I2: measure window must cover [-R0, R0]");
  if (grid_points < 2) throw DomainError("psi_and_I2: need >= 2 grid points");
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(grid_points) + 2 * mu.atoms.size());
  double step = 2.0 * p.R0 / (grid_points - 1);
  for (int i = 0; i < grid_points; ++i) xs.push_back(-p.R0 + i * step);
  for (const auto& [x, w] : mu.atoms) {
    if (std::abs(x) > p.R0) continue;
    xs.push_back(x);
    double left = std::nextafter(x, -std::numeric_limits<double>::infinity());
    if (left >= -p.R0) xs.push_back(left);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  PsiTrace out;
  out.x = xs;
  out.psi.reserve(xs.size());
  for (double x : xs) {
    double phi = measures::mass(mu, -p.R0, x);
    double v = psi_value(x, phi, p);
    out.psi.push_back(v);
    out.i2 = std::max(out.i2, v);
  }
  return out;
}

double phi_minus(double z) {
  if (z > 0.0) throw DomainError("phi_minus: defined for z <= 0 only");
  double p2 = kPi * kPi;
  double p4 = p2 * p2;
  double p6 = p4 * p2;
  return 4.0 / (15.0 * p6) * std::pow(1.0 - p2 * z, 2.5) - 4.0 / (15.0 * p6) +
         2.0 / (3.0 * p4) * z - z * z / (2.0 * p2);
}

double log_energy_J(const measures::SignedMeasure& mu) {
  measures::validate(mu);
  double J = 0.0;
  const auto& A = mu.atoms;
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = i + 1; j < A.size(); ++j) {
      double d = std::abs(A[i].first - A[j].first);
      if (d == 0.0)
        throw DomainError("log_energy_J: coincident atoms have infinite energy");
      J += -2.0 * A[i].second * A[j].second * std::log(d);
    }
  auto [s0, s1] = measures::density_support(mu);
  if (s1 > s0) {
    auto rho = [&](double y) { return measures::density_value(mu, y); };
    for (const auto& [x, w] : A)
      J += -2.0 * w * log_inner(rho, s0, s1, x, 1e-9);
    J += -adaptive_simpson(
        [&](double x) { return rho(x) * log_inner(rho, s0, s1, x, 1e-10); },
        s0, s1, 1e-8);
  }
  return J;
}

double log_energy_J(const std::function<double(double)>& rho, double a,
                    double b) {
  if (!(b > a)) throw DomainError("log_energy_J: need a < b");
  return -adaptive_simpson(
      [&](double x) { return rho(x) * log_inner(rho, a, b, x, 1e-10); }, a, b,
      1e-8);
}

double log_energy_J0(const measures::SignedMeasure& mu, double n, double k) {
  if (!(n >= k && k >= 1.0)) throw DomainError("log_energy_J0: need n >= k >= 1");
  double pot = 0.0;
  for (const auto& [x, w] : mu.atoms)
    if (x < 0.0) pot += w * spectra::xi_tilde(x, n, k);
  return log_energy_J(mu) + 2.0 * pot;
}

double cross_J(const measures::SignedMeasure& mu1,
               const measures::SignedMeasure& mu2) {
  measures::validate(mu1);
  measures::validate(mu2);
  double J = 0.0;
  for (const auto& [x1, w1] : mu1.atoms)
    for (const auto& [x2, w2] : mu2.atoms) {
      double d = std::abs(x1 - x2);
      if (d == 0.0)
        throw DomainError("cross_J: coincident atoms have infinite energy");
      J += -w1 * w2 * std::log(d);
    }
  auto [a1, b1] = measures::density_support(mu1);
  auto [a2, b2] = measures::density_support(mu2);
  auto rho1 = [&](double y) { return measures::density_value(mu1, y); };
  auto rho2 = [&](double y) { return measures::density_value(mu2, y); };
  if (b2 > a2)
    for (const auto& [x, w] : mu1.atoms)
      J += -w * log_inner(rho2, a2, b2, x, 1e-9);
  if (b1 > a1)
    for (const auto& [x, w] : mu2.atoms)
      J += -w * log_inner(rho1, a1, b1, x, 1e-9);
  if (b1 > a1 && b2 > a2)
    J += -adaptive_simpson(
        [&](double x) { return rho1(x) * log_inner(rho2, a2, b2, x, 1e-10); },
        a1, b1, 1e-8);
  return J;
}

double i1_upper(const measures::SignedMeasure& extension) {
  measures::validate(extension);
  for (const auto& [x, w] : extension.atoms)
    if (w != 0.0) return std::numeric_limits<double>::infinity();
  // no atoms: untruncated energy of the density, plus the negative-axis
  // potential (structurally zero for the built-in density families)
  return log_energy_J(extension) + negative_axis_potential(extension);
}

}  // namespace airylab::ratefn
