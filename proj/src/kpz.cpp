#include "airylab/kpz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "airylab/errors.hpp"

namespace airylab::kpz {

namespace {

constexpr double kPi = 3.14159265358979323846;

double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

void check_descending(const std::vector<double>& pts, const char* who) {
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (pts[i] > pts[i - 1])
      throw DomainError(std::string(who) + ": points must be descending");
}

// Geometric tail extrapolation at the list's mean gap; the honest answer for
// an empty list is "unknown".
double tail_bound(const std::vector<double>& pts, double last_z, double t13) {
  if (pts.empty()) return std::numeric_limits<double>::infinity();
  double g = pts.size() >= 2
                 ? (pts.front() - pts.back()) / static_cast<double>(pts.size() - 1)
                 : 1.0;
  g = std::max(g, 1e-3);
  double r = std::exp(-t13 * g);
  if (!(r < 1.0)) return std::numeric_limits<double>::infinity();
  return std::exp(last_z) * r / (1.0 - r);
}

// log-sum-exp plus the linear value exp(m) * sum, which is exact when all
// terms coincide (sum of identical exponentials, no log/exp round trip)
void lse(const double* t, int n, double& log_out, double& lin_out) {
  double m = t[0];
  for (int i = 1; i < n; ++i) m = std::max(m, t[i]);
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += std::exp(t[i] - m);
  log_out = m + std::log(s);
  lin_out = std::exp(m) * s;
}

}  // namespace

double KpzParams::t13() const { return std::cbrt(T); }

void validate(const KpzParams& p) {
  if (!(p.s >= 0.0) || !std::isfinite(p.s))
    throw DomainError("kpz params: s must be finite and >= 0");
  if (!(p.T > 0.0) || !std::isfinite(p.T))
    throw DomainError("kpz params: T must be finite and > 0");
  if (!(p.epsilon > 0.0 && p.epsilon < 1.0 / 3.0))
    throw DomainError("kpz params: epsilon must lie in (0, 1/3)");
  if (!(p.C > 0.0) || !std::isfinite(p.C))
    throw DomainError("kpz params: C must be finite and > 0");
  if (!(p.K > 0.0) || !std::isfinite(p.K))
    throw DomainError("kpz params: K must be finite and > 0");
}

LaplaceResult laplace_product(const std::vector<double>& points_desc, double s,
                              double T, bool require_depth) {
  if (!(T > 0.0) || !std::isfinite(T))
    throw DomainError("laplace_product: T must be finite and > 0");
  if (!(s >= 0.0) || !std::isfinite(s))
    throw DomainError("laplace_product: s must be finite and >= 0");
  check_descending(points_desc, "laplace_product");
  double t13 = std::cbrt(T);
  double thr = -s - 40.0 / t13;
  if (require_depth && (points_desc.empty() || !(points_desc.back() < thr))) {
    // depth estimate from the eigenvalue growth law gamma_k ~ (3 pi k / 2)^{2/3}
    double need = 2.0 / (3.0 * kPi) * std::pow(std::abs(thr), 1.5) + 1.0;
    throw DomainError(
        "laplace_product: point list too shallow for s, T; need points below " +
        std::to_string(thr) + " (roughly " +
        std::to_string(static_cast<long long>(std::ceil(need))) + " points)");
  }
  double logp = 0.0;
  for (double a : points_desc) logp -= softplus(t13 * (s + a));
  LaplaceResult out;
  out.log_value = logp;
  out.value = std::exp(logp);
  out.trunc_bound = points_desc.empty()
                        ? std::numeric_limits<double>::infinity()
                        : tail_bound(points_desc,
                                     t13 * (s + points_desc.back()), t13);
  return out;
}

LaplaceResult laplace_product_halfspace(const std::vector<double>& points_desc,
                                        double u, double T,
                                        bool require_depth) {
  if (!(T > 0.0) || !std::isfinite(T))
    throw DomainError("laplace_product_halfspace: T must be finite and > 0");
  if (!(u > 0.0) || !std::isfinite(u))
    throw DomainError("laplace_product_halfspace: u must be finite and > 0");
  check_descending(points_desc, "laplace_product_halfspace");
  double t13 = std::cbrt(T);
  double l4u = std::log(4.0 * u);
  double thr = (l4u - 40.0) / t13;
  if (require_depth && (points_desc.empty() || !(points_desc.back() < thr))) {
    double need = 2.0 / (3.0 * kPi) * std::pow(std::abs(thr), 1.5) + 1.0;
    throw DomainError(
        "laplace_product_halfspace: point list too shallow for u, T; need "
        "points below " +
        std::to_string(thr) + " (roughly " +
        std::to_string(static_cast<long long>(std::ceil(need))) + " points)");
  }
  // 1 + 4u e^{t13 a} = 1 + e^{log(4u) + t13 a}
  double logp = 0.0;
  for (double a : points_desc) logp -= 0.5 * softplus(l4u + t13 * a);
  LaplaceResult out;
  out.log_value = logp;
  out.value = std::exp(logp);
  out.trunc_bound =
      points_desc.empty()
          ? std::numeric_limits<double>::infinity()
          : 0.5 * tail_bound(points_desc, l4u + t13 * points_desc.back(), t13);
  return out;
}

namespace {

TailBounds assemble(double c52, double c3, const KpzParams& p) {
  validate(p);
  if (!(p.C * p.epsilon < 1.0))
    throw DomainError("kpz bounds: need C * epsilon < 1");
  double t13 = p.t13();
  double s52 = std::pow(p.s, 2.5), s3 = p.s * p.s * p.s;
  double ce = p.C * p.epsilon;
  double lo[2] = {-c52 * (1.0 + ce) * t13 * s52, -(1.0 + ce) / c3 * s3};
  double up[3] = {-c52 * (1.0 - ce) * t13 * s52,
                  -p.K * s3 - p.epsilon * t13 * p.s, -(1.0 - ce) / c3 * s3};
  TailBounds b;
  lse(lo, 2, b.log_lower, b.lower);
  lse(up, 3, b.log_upper, b.upper);
  b.degenerate = b.lower >= 1.0 || b.upper >= 1.0;
  return b;
}

}  // namespace

TailBounds kpz1_bounds(const KpzParams& p) {
  return assemble(4.0 / (15.0 * kPi), 12.0, p);
}

TailBounds kpz2_bounds(const KpzParams& p) {
  return assemble(2.0 / (15.0 * kPi), 24.0, p);
}

}  // namespace airylab::kpz
