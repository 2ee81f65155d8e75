#include "airylab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "airylab/errors.hpp"
#include "airylab/spectra.hpp"

namespace airylab::measures {

namespace {

constexpr double kPi = 3.14159265358979323846;

double semi_scale(const Density& d) {
  // (k/n)^{2/3}; support of the rescaled equilibrium density is [0, 4/c].
  return std::pow(d.k / d.n, 2.0 / 3.0);
}

}  // namespace

void validate(const SignedMeasure& m) {
  if (!std::isfinite(m.lo) || !std::isfinite(m.hi) || m.lo > m.hi)
    throw DomainError("measure: window must be a finite interval");
  double prev = m.lo;
  for (const auto& [x, w] : m.atoms) {
    if (!std::isfinite(x) || !std::isfinite(w))
      throw DomainError("measure: atom position/weight must be finite");
    if (x < m.lo || x > m.hi)
      throw DomainError("measure: atom outside the window");
    if (x < prev) throw DomainError("measure: atoms must be sorted ascending");
    prev = x;
  }
  if (m.density.kind != DensityKind::None) {
    if (m.density.sign != 1 && m.density.sign != -1)
      throw DomainError("measure: density sign must be +1 or -1");
    if (m.density.kind == DensityKind::SemicircleRescaled &&
        !(m.density.n >= m.density.k && m.density.k >= 1.0))
      throw DomainError("measure: semicircle density needs n >= k >= 1");
  }
}

std::pair<double, double> density_support(const SignedMeasure& m) {
  switch (m.density.kind) {
    case DensityKind::None:
      return {1.0, 0.0};
    case DensityKind::AiryReference:
      return {std::max(0.0, m.lo), m.hi};
    case DensityKind::SemicircleRescaled: {
      double top = 4.0 / semi_scale(m.density);
      return {std::max(0.0, m.lo), std::min(top, m.hi)};
    }
  }
  return {1.0, 0.0};
}

double density_value(const SignedMeasure& m, double x) {
  auto [s0, s1] = density_support(m);
  if (!(x >= s0 && x <= s1)) return 0.0;
  switch (m.density.kind) {
    case DensityKind::None:
      return 0.0;
    case DensityKind::AiryReference:
      return m.density.sign * std::sqrt(x) / kPi;
    case DensityKind::SemicircleRescaled: {
      double c = semi_scale(m.density);
      double inner = 1.0 - c * x / 4.0;
      if (inner < 0.0) inner = 0.0;
      return m.density.sign * std::sqrt(x) * std::sqrt(inner) / kPi;
    }
  }
  return 0.0;
}

double density_mass(const SignedMeasure& m, double a, double b) {
  auto [s0, s1] = density_support(m);
  a = std::max(a, s0);
  b = std::min(b, s1);
  if (!(b > a)) return 0.0;
  switch (m.density.kind) {
    case DensityKind::None:
      return 0.0;
    case DensityKind::AiryReference:
      // antiderivative of sqrt(x)/pi
      return m.density.sign * 2.0 / (3.0 * kPi) *
             (std::pow(b, 1.5) - std::pow(a, 1.5));
    case DensityKind::SemicircleRescaled: {
      // Under lambda = 2 - c x the density pushes forward to n/k copies of
      // the semicircle law, so the mass reduces to its cdf.
      double c = semi_scale(m.density);
      double ratio = m.density.n / m.density.k;
      double fa = spectra::semicircle_cdf(2.0 - c * a);
      double fb = spectra::semicircle_cdf(2.0 - c * b);
      return m.density.sign * ratio * (fa - fb);
    }
  }
  return 0.0;
}

SignedMeasure nu_k(const std::vector<double>& points_desc, long long k,
                   double R) {
  if (k < 1) throw DomainError("nu_k: k must be >= 1");
  if (!(R > 0.0) || !std::isfinite(R)) throw DomainError("nu_k: R must be positive");
  for (std::size_t i = 1; i < points_desc.size(); ++i)
    if (points_desc[i] > points_desc[i - 1])
      throw DomainError("nu_k: points must be descending");
  double kc = std::pow(static_cast<double>(k), -2.0 / 3.0);
  if (!points_desc.empty() && !(-kc * points_desc.back() > R))
    throw DomainError(
        "nu_k: point list stops inside the window [-R, R]; supply more "
        "points so the truncated tail lies beyond R");
  SignedMeasure m;
  m.lo = -R;
  m.hi = R;
  double w = 1.0 / static_cast<double>(k);
  for (double a : points_desc) {
    double pos = -kc * a;
    if (pos >= -R && pos <= R) m.atoms.emplace_back(pos, w);
  }
  m.density = {DensityKind::AiryReference, -1, 0.0, 0.0};
  validate(m);
  return m;
}

SignedMeasure mu_nk(const std::vector<double>& eigs_desc, long long n,
                    long long k, double R) {
  if (!(n >= k && k >= 1)) throw DomainError("mu_nk: need n >= k >= 1");
  if (!(R > 0.0) || !std::isfinite(R))
    throw DomainError("mu_nk: R must be positive");
  for (std::size_t i = 1; i < eigs_desc.size(); ++i)
    if (eigs_desc[i] > eigs_desc[i - 1])
      throw DomainError("mu_nk: eigenvalues must be descending");
  double nd = static_cast<double>(n), kd = static_cast<double>(k);
  double scale = std::pow(nd / kd, 2.0 / 3.0);
  double rt = std::sqrt(nd);
  SignedMeasure m;
  m.lo = -R;
  m.hi = R;
  double w = 1.0 / kd;
  for (double lam : eigs_desc) {
    double pos = scale * (2.0 - lam / rt);
    if (pos >= -R && pos <= R) m.atoms.emplace_back(pos, w);
  }
  m.density = {DensityKind::SemicircleRescaled, -1, nd, kd};
  validate(m);
  return m;
}

double mass(const SignedMeasure& m, double a, double b) {
  validate(m);
  if (!(a <= b)) throw DomainError("mass: need a <= b");
  if (a < m.lo || b > m.hi)
    throw DomainError("mass: [a, b] must lie inside the window");
  double s = 0.0;
  for (const auto& [x, w] : m.atoms)
    if (x >= a && x <= b) s += w;
  return s + density_mass(m, a, b);
}

namespace {

// Signed zeroth and first moments of the density over [a, b], by the same
// closed-form antiderivatives that back density_mass.
std::pair<double, double> density_moments(const SignedMeasure& m, double a,
                                          double b) {
  switch (m.density.kind) {
    case DensityKind::None:
      return {0.0, 0.0};
    case DensityKind::AiryReference: {
      double m0 = 2.0 / (3.0 * kPi) * (std::pow(b, 1.5) - std::pow(a, 1.5));
      double m1 = 2.0 / (5.0 * kPi) * (std::pow(b, 2.5) - std::pow(a, 2.5));
      return {m.density.sign * m0, m.density.sign * m1};
    }
    case DensityKind::SemicircleRescaled: {
      double c = semi_scale(m.density);
      double ratio = m.density.n / m.density.k;
      double la = 2.0 - c * a, lb = 2.0 - c * b;  // la >= lb
      double dF = spectra::semicircle_cdf(la) - spectra::semicircle_cdf(lb);
      // antiderivative of lambda * sqrt(4 - lambda^2) / (2 pi)
      auto g = [](double l) {
        double inner = std::max(0.0, 4.0 - l * l);
        return -std::pow(inner, 1.5) / (6.0 * kPi);
      };
      double m0 = ratio * dF;
      double m1 = ratio / c * (2.0 * dF - (g(la) - g(lb)));
      return {m.density.sign * m0, m.density.sign * m1};
    }
  }
  return {0.0, 0.0};
}

// Projection of one measure onto the grid nodes: atoms by linear
// interpolation, density by exact per-cell moments against the hat weights.
std::vector<double> node_weights(const SignedMeasure& m, double R, int cells) {
  std::vector<double> w(static_cast<std::size_t>(cells) + 1, 0.0);
  double h = 2.0 * R / cells;
  for (const auto& [x, wt] : m.atoms) {
    double t = (x + R) / h;
    int j = static_cast<int>(std::floor(t));
    if (j < 0) j = 0;
    if (j >= cells) j = cells - 1;
    double frac = t - j;
    if (frac < 0.0) frac = 0.0;
    if (frac > 1.0) frac = 1.0;
    w[j] += wt * (1.0 - frac);
    w[j + 1] += wt * frac;
  }
  auto [s0, s1] = density_support(m);
  if (s1 > s0) {
    for (int j = 0; j < cells; ++j) {
      double gl = -R + j * h, gr = -R + (j + 1) * h;
      double a = std::max(gl, s0), b = std::min(gr, s1);
      if (!(b > a)) continue;
      auto [m0, m1] = density_moments(m, a, b);
      w[j] += (m0 * gr - m1) / h;
      w[j + 1] += (m1 - m0 * gl) / h;
    }
  }
  return w;
}

double total_variation(const SignedMeasure& m) {
  double s = 0.0;
  for (const auto& [x, w] : m.atoms) s += std::abs(w);
  auto [s0, s1] = density_support(m);
  if (s1 > s0) s += std::abs(density_mass(m, s0, s1));
  return s;
}

// Concave piecewise-linear function as (node, value) pairs. Supports the
// value-function recursion V_j(t) = w_j t + max over |t'-t| <= h of
// V_{j-1}(t') restricted to [-1, 1].
struct PL {
  std::vector<double> x, v;
};

void add_linear(PL& f, double c) {
  for (std::size_t i = 0; i < f.x.size(); ++i) f.v[i] += c * f.x[i];
}

void spread_clip(PL& f, double h) {
  const std::size_t n = f.x.size();
  double vm = f.v[0];
  for (std::size_t i = 1; i < n; ++i) vm = std::max(vm, f.v[i]);
  std::size_t i0 = 0, i1 = n - 1;
  while (f.v[i0] != vm) ++i0;
  while (f.v[i1] != vm) --i1;
  std::vector<double> nx, nv;
  nx.reserve(n + 2);
  nv.reserve(n + 2);
  for (std::size_t i = 0; i <= i0; ++i) {
    nx.push_back(f.x[i] - h);
    nv.push_back(f.v[i]);
  }
  for (std::size_t i = i1; i < n; ++i) {
    nx.push_back(f.x[i] + h);
    nv.push_back(f.v[i]);
  }
  // restrict the widened domain back to [-1, 1]
  std::size_t lo = 0;
  while (lo + 1 < nx.size() && nx[lo + 1] <= -1.0) ++lo;
  std::size_t hi = nx.size() - 1;
  while (hi > 0 && nx[hi - 1] >= 1.0) --hi;
  f.x.clear();
  f.v.clear();
  if (nx[lo] < -1.0) {
    double t = (-1.0 - nx[lo]) / (nx[lo + 1] - nx[lo]);
    f.x.push_back(-1.0);
    f.v.push_back(nv[lo] + t * (nv[lo + 1] - nv[lo]));
    ++lo;
  }
  for (std::size_t i = lo; i <= hi; ++i) {
    if (nx[i] < -1.0 || nx[i] > 1.0) continue;
    f.x.push_back(nx[i]);
    f.v.push_back(nv[i]);
  }
  if (nx[hi] > 1.0) {
    double t = (1.0 - nx[hi - 1]) / (nx[hi] - nx[hi - 1]);
    f.x.push_back(1.0);
    f.v.push_back(nv[hi - 1] + t * (nv[hi] - nv[hi - 1]));
  }
}

double pl_at(const PL& f, double t) {
  if (t <= f.x.front()) return f.v.front();
  if (t >= f.x.back()) return f.v.back();
  auto it = std::upper_bound(f.x.begin(), f.x.end(), t);
  std::size_t i = static_cast<std::size_t>(it - f.x.begin());
  double u = (t - f.x[i - 1]) / (f.x[i] - f.x[i - 1]);
  return f.v[i - 1] + u * (f.v[i] - f.v[i - 1]);
}

}  // namespace

std::vector<double> grid_weights(const SignedMeasure& mu,
                                 const SignedMeasure& nu, double R, int m) {
  if (m < 1) throw DomainError("grid_weights: need m >= 1");
  // Project each side separately and subtract, so identical measures cancel
  // to exact zeros and d(mu, mu) comes out exactly 0.
  std::vector<double> w = node_weights(mu, R, m);
  std::vector<double> wn = node_weights(nu, R, m);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] -= wn[i];
  return w;
}

BlResult bl_distance(const SignedMeasure& mu, const SignedMeasure& nu,
                     double R, int m, bool pinned) {
  validate(mu);
  validate(nu);
  if (!(R > 0.0)) throw DomainError("bl_distance: R must be positive");
  if (m < 64) throw DomainError("bl_distance: need m >= 64 grid cells");
  if (mu.lo < -R || mu.hi > R || nu.lo < -R || nu.hi > R)
    throw DomainError("bl_distance: both measures must be windowed to [-R, R]");
  double h = 2.0 * R / m;
  std::vector<double> w = grid_weights(mu, nu, R, m);

  BlResult out;
  out.err_bound = h * (total_variation(mu) + total_variation(nu));

  std::vector<double> pos;
  pos.reserve(mu.atoms.size() + nu.atoms.size());
  for (const auto& [x, wt] : mu.atoms) pos.push_back(x);
  for (const auto& [x, wt] : nu.atoms) pos.push_back(x);
  std::sort(pos.begin(), pos.end());
  for (std::size_t i = 1; i < pos.size(); ++i) {
    if (pos[i] == pos[i - 1]) continue;
    if (std::floor((pos[i - 1] + R) / h) == std::floor((pos[i] + R) / h)) {
      out.atoms_unresolved = true;
      break;
    }
  }

  PL f;
  if (pinned) {
    f.x = {0.0};
    f.v = {0.0};
  } else {
    f.x = {-1.0, 1.0};
    f.v = {0.0, 0.0};
  }
  add_linear(f, w[0]);
  for (int j = 1; j <= m; ++j) {
    spread_clip(f, h);
    add_linear(f, w[static_cast<std::size_t>(j)]);
  }
  if (pinned) {
    out.value = pl_at(f, 0.0);
  } else {
    double best = f.v[0];
    for (double v : f.v) best = std::max(best, v);
    out.value = best;
  }
  return out;
}

std::string to_json(const SignedMeasure& m) {
  validate(m);
  nlohmann::ordered_json j;
  j["atoms"] = nlohmann::ordered_json::array();
  for (const auto& [x, w] : m.atoms) j["atoms"].push_back({x, w});
  nlohmann::ordered_json d;
  switch (m.density.kind) {
    case DensityKind::None:
      d["kind"] = "none";
      break;
    case DensityKind::AiryReference:
      d["kind"] = "airy_reference";
      d["sign"] = m.density.sign;
      break;
    case DensityKind::SemicircleRescaled:
      d["kind"] = "semicircle_rescaled";
      d["sign"] = m.density.sign;
      d["n"] = m.density.n;
      d["k"] = m.density.k;
      break;
  }
  j["density"] = d;
  j["window"] = {m.lo, m.hi};
  return j.dump(2);
}

SignedMeasure from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("measure JSON parse error: ") + e.what());
  }
  SignedMeasure m;
  try {
    for (const auto& a : j.at("atoms"))
      m.atoms.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
    const auto& d = j.at("density");
    std::string kind = d.at("kind").get<std::string>();
    if (kind == "none") {
      m.density.kind = DensityKind::None;
    } else if (kind == "airy_reference") {
      m.density.kind = DensityKind::AiryReference;
      m.density.sign = d.at("sign").get<int>();
    } else if (kind == "semicircle_rescaled") {
      m.density.kind = DensityKind::SemicircleRescaled;
      m.density.sign = d.at("sign").get<int>();
      m.density.n = d.at("n").get<double>();
      m.density.k = d.at("k").get<double>();
    } else {
      throw DomainError("measure JSON: unknown density kind '" + kind + "'");
    }
    m.lo = j.at("window").at(0).get<double>();
    m.hi = j.at("window").at(1).get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("measure JSON missing/ill-typed field: ") +
                      e.what());
  }
  validate(m);
  return m;
}

}  // namespace airylab::measures
