#include "airylab/tridiag.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "airylab/errors.hpp"
#include "airylab/mc.hpp"
#include "airylab/spectra.hpp"

namespace airylab::tridiag {

TridiagonalSym sample_gbeta(int n, double beta, Stream& rng) {
  if (n < 1) throw DomainError("sample_gbeta: n >= 1");
  if (!(beta > 0.0)) throw DomainError("sample_gbeta: beta > 0");
  TridiagonalSym T;
  T.diag.resize(n);
  T.offdiag.resize(n - 1);
  const double dscale = std::sqrt(2.0 / beta);
  for (int i = 0; i < n; ++i) T.diag[i] = dscale * rng.normal();
  const double oscale = 1.0 / std::sqrt(beta);
  for (int i = 1; i <= n - 1; ++i) {
    T.offdiag[i - 1] = oscale * rng.chi(beta * (n - i));
  }
  return T;
}

TridiagonalSym sample_gbeta(int n, double beta, std::uint64_t seed) {
  Stream s(seed);
  return sample_gbeta(n, beta, s);
}

long long count_below(const TridiagonalSym& T, double x) {
  if (std::isnan(x)) throw DomainError("count_below: x is NaN");
  const int n = T.n();
  if (n == 0) return 0;
  long long cnt = 0;
  double d = T.diag[0] - x;
  for (int i = 1; i <= n; ++i) {
    if (d == 0.0) d = -1e-300;  // tie policy: exact eigenvalue counts as below
    if (d < 0.0) ++cnt;
    if (i < n) d = T.diag[i] - x - T.offdiag[i - 1] * T.offdiag[i - 1] / d;
  }
  return cnt;
}

std::vector<double> top_k_eigenvalues(const TridiagonalSym& T, int k,
                                      double tol) {
  const int n = T.n();
  if (k < 1 || k > n) throw DomainError("top_k_eigenvalues: need 1 <= k <= n");
  if (!(tol > 0.0)) throw DomainError("top_k_eigenvalues: tol > 0");
  double hi = 4.0 * std::sqrt(static_cast<double>(n));
  double lo = -hi;
  for (int tries = 0; count_below(T, hi) < n; ++tries) {
    if (tries >= 10) throw NumericalError("top_k_eigenvalues: upper bracket");
    hi *= 2.0;
  }
  for (int tries = 0; count_below(T, lo) > 0; ++tries) {
    if (tries >= 10) throw NumericalError("top_k_eigenvalues: lower bracket");
    lo *= 2.0;
  }
  std::vector<double> out;
  out.reserve(k);
  for (int j = 1; j <= k; ++j) {
    const long long below_target = n - j;  // lambda_(j) has n-j below it
    double ub = hi, lb = lo;
    if (j > 1) {
      const double cand = out.back() + tol;
      if (count_below(T, cand) > below_target) ub = cand;
    }
    while (ub - lb > tol) {
      const double m = 0.5 * (ub + lb);
      if (count_below(T, m) > below_target) ub = m;
      else lb = m;
    }
    double est = 0.5 * (ub + lb);
    // independent bisections can disorder a degenerate pair at sub-tol scale
    if (j > 1 && est > out.back()) est = out.back();
    out.push_back(est);
  }
  return out;
}

std::vector<double> rescale_edge(const std::vector<double>& values, double n) {
  if (!(n > 0.0)) throw DomainError("rescale_edge: n > 0");
  const double shift = 2.0 * std::sqrt(n);
  const double scale = std::pow(n, 1.0 / 6.0);
  std::vector<double> out(values.size());
  for (size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - shift) * scale;
  return out;
}

namespace {

// One shifted solve (T - lambda I) y = b, Gaussian elimination with partial
// pivoting; the swap can introduce a second superdiagonal.
std::vector<double> solve_shifted(const TridiagonalSym& T, double lambda,
                                  std::vector<double> b) {
  const int n = T.n();
  std::vector<double> dd(n), cc(n, 0.0), ff(n, 0.0);
  for (int i = 0; i < n; ++i) dd[i] = T.diag[i] - lambda;
  for (int i = 0; i < n - 1; ++i) cc[i] = T.offdiag[i];
  for (int i = 0; i < n - 1; ++i) {
    // row i:   (p, q, r) over columns (i, i+1, i+2)
    // row i+1: (s, t, u)
    double p = dd[i], q = cc[i], r = ff[i];
    double s = T.offdiag[i], t = dd[i + 1];
    double u = (i + 1 < n - 1) ? cc[i + 1] : 0.0;
    if (std::fabs(p) < std::fabs(s)) {
      std::swap(p, s);
      std::swap(q, t);
      std::swap(r, u);
      std::swap(b[i], b[i + 1]);
    }
    if (p == 0.0) p = 1e-300;
    const double m = s / p;
    dd[i] = p;
    cc[i] = q;
    ff[i] = r;
    dd[i + 1] = t - m * q;
    if (i + 1 < n - 1) cc[i + 1] = u - m * r;
    b[i + 1] -= m * b[i];
  }
  if (dd[n - 1] == 0.0) dd[n - 1] = 1e-300;
  std::vector<double> y(n);
  for (int i = n - 1; i >= 0; --i) {
    double acc = b[i];
    if (i + 1 < n) acc -= cc[i] * y[i + 1];
    if (i + 2 < n) acc -= ff[i] * y[i + 2];
    y[i] = acc / dd[i];
  }
  return y;
}

double inf_norm(const TridiagonalSym& T) {
  const int n = T.n();
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = std::fabs(T.diag[i]);
    if (i > 0) row += std::fabs(T.offdiag[i - 1]);
    if (i + 1 < n) row += std::fabs(T.offdiag[i]);
    best = std::max(best, row);
  }
  return best;
}

void fix_sign(std::vector<double>& v) {
  double vmax = 0.0;
  for (double x : v) vmax = std::max(vmax, std::fabs(x));
  for (double x : v) {
    if (std::fabs(x) > 1e-8 * vmax) {
      if (x < 0.0) {
        for (double& y : v) y = -y;
      }
      return;
    }
  }
}

}  // namespace

std::vector<double> eigenvector(const TridiagonalSym& T, double lambda) {
  const int n = T.n();
  if (n < 1) throw DomainError("eigenvector: empty matrix");
  Stream start(0x5eedu, static_cast<std::uint64_t>(n));
  std::vector<double> v(n);
  double norm = 0.0;
  for (int i = 0; i < n; ++i) {
    v[i] = start.normal();
    norm += v[i] * v[i];
  }
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;

  const double tnorm = inf_norm(T);
  const double target = 1e-8 * (tnorm > 0.0 ? tnorm : 1.0);
  for (int sweep = 0; sweep < 20; ++sweep) {
    std::vector<double> y = solve_shifted(T, lambda, v);
    double ny = 0.0;
    for (double x : y) ny += x * x;
    ny = std::sqrt(ny);
    if (!(ny > 0.0) || !std::isfinite(ny)) {
      throw NumericalError("eigenvector: inverse iteration degenerated");
    }
    for (int i = 0; i < n; ++i) v[i] = y[i] / ny;
    // residual ||T v - lambda v||_2
    double res = 0.0;
    for (int i = 0; i < n; ++i) {
      double r = (T.diag[i] - lambda) * v[i];
      if (i > 0) r += T.offdiag[i - 1] * v[i - 1];
      if (i + 1 < n) r += T.offdiag[i] * v[i + 1];
      res += r * r;
    }
    if (sweep >= 1 && std::sqrt(res) <= target) {
      fix_sign(v);
      return v;
    }
  }
  throw NumericalError("eigenvector: no convergence in 20 sweeps");
}

std::vector<double> eigenvector_tail_refined(const TridiagonalSym& T,
                                             double lambda) {
  const int n = T.n();
  std::vector<double> v = eigenvector(T, lambda);
  if (n < 8) return v;

  double vmax = 0.0;
  for (double x : v) vmax = std::max(vmax, std::fabs(x));
  int stitch = n - 1;
  while (stitch > 0 && std::fabs(v[stitch]) < 1e-7 * vmax) --stitch;
  if (stitch >= n - 2) return v;  // no resolved decay window to rebuild

  // psi solves the eigenvalue recurrence backward from psi(n)=1, growing as
  // it walks down; mantissas are rescaled by 2^-996 when they pass 1e280 and
  // the cumulative exponent is tracked per index.
  std::vector<double> mant(n);
  std::vector<int> ex(n, 0);
  int e = 0;
  double cur = 1.0, above = 0.0;  // psi(i), psi(i+1) in the running scale
  mant[n - 1] = cur;
  ex[n - 1] = e;
  for (int i = n - 1; i > stitch; --i) {
    const double sub = T.offdiag[i - 1];
    if (sub == 0.0) return v;  // decoupled tail: keep the iterated vector
    const double upper = (i + 1 < n) ? T.offdiag[i] : 0.0;
    double nxt = ((lambda - T.diag[i]) * cur - upper * above) / sub;
    above = cur;
    cur = nxt;
    if (std::fabs(cur) > 1e280) {
      cur = std::ldexp(cur, -996);
      above = std::ldexp(above, -996);
      e += 996;
    }
    mant[i - 1] = cur;
    ex[i - 1] = e;
  }
  const double anchor = mant[stitch];
  if (anchor == 0.0 || !std::isfinite(anchor)) return v;
  const double ratio = v[stitch] / anchor;
  for (int i = stitch + 1; i < n; ++i) {
    v[i] = std::ldexp(mant[i] * ratio, ex[i] - ex[stitch]);
  }
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  fix_sign(v);
  return v;
}

std::vector<double> discrete_riccati(const std::vector<double>& phi, double n) {
  if (phi.size() < 2) throw DomainError("discrete_riccati: need >= 2 entries");
  if (!(n > 0.0)) throw DomainError("discrete_riccati: n > 0");
  const double scale = std::cbrt(n);
  std::vector<double> p(phi.size() - 1);
  for (size_t j = 0; j + 1 < phi.size(); ++j) {
    p[j] = (phi[j] == 0.0)
               ? std::numeric_limits<double>::quiet_NaN()
               : scale * (phi[j + 1] - phi[j]) / phi[j];
  }
  return p;
}

DecayDiagnostics decay_diagnostics(const std::vector<double>& phi, double n,
                                   int i_star) {
  const int N = static_cast<int>(phi.size());
  if (N < 2) throw DomainError("decay_diagnostics: need >= 2 entries");
  if (i_star < 1 || i_star > N - 1) {
    throw DomainError("decay_diagnostics: i_star out of range");
  }
  DecayDiagnostics out{};
  out.sign_constant = true;
  int sign = 0;
  for (int i = i_star; i <= N; ++i) {
    const double x = phi[i - 1];
    if (x == 0.0) continue;
    const int s = (x > 0.0) ? 1 : -1;
    if (sign == 0) sign = s;
    else if (s != sign) {
      out.sign_constant = false;
      break;
    }
  }
  out.last_ratio = (phi[N - 2] == 0.0)
                       ? std::numeric_limits<double>::infinity()
                       : std::fabs(phi[N - 1]) / std::fabs(phi[N - 2]);
  const double nm13 = 1.0 / std::cbrt(n);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long long cnt = 0;
  for (int i = i_star; i <= N - 1; ++i) {
    const double ph = phi[i - 1];
    if (ph == 0.0 || !std::isfinite(ph)) continue;
    const double x = std::pow(i * nm13, 1.5);
    const double y = std::log(std::fabs(ph));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  if (cnt >= 2 && sxx - sx * sx / cnt > 0.0) {
    out.decay_slope = (sxy - sx * sy / cnt) / (sxx - sx * sx / cnt);
  } else {
    out.decay_slope = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

ExperimentReport rigidity_stats(int n, double beta, double a, long long reps,
                                std::uint64_t seed, int workers) {
  if (n < 2) throw DomainError("rigidity_stats: n >= 2");
  if (!(beta > 0.0)) throw DomainError("rigidity_stats: beta > 0");
  if (!(a > 0.0 && a <= 1.0)) throw DomainError("rigidity_stats: a in (0, 1]");
  if (reps < 1) throw DomainError("rigidity_stats: reps >= 1");
  const auto t0 = std::chrono::steady_clock::now();

  // Fixed per-index brackets: the k-th largest eigenvalue violates iff it
  // leaves [sqrt(n)(gamma_k - thr_k), sqrt(n)(gamma_k + thr_k)], decided by
  // rank counts at the two endpoints.
  const double rt = std::sqrt(static_cast<double>(n));
  const double base = std::pow(static_cast<double>(n), -2.0 / 3.0 + a);
  std::vector<double> x_lo(n), x_hi(n);
  for (int k = 1; k <= n; ++k) {
    const double gamma = spectra::classical_location(k, n);
    const long long khat = std::min<long long>(k, n + 1 - k);
    const double thr = base / std::cbrt(static_cast<double>(khat));
    x_lo[k - 1] = rt * (gamma - thr);
    x_hi[k - 1] = rt * (gamma + thr);
  }

  std::vector<double> frac;
  mc::run_replicas(
      reps, seed, workers,
      [&](long long, Stream& s) {
        const TridiagonalSym T = sample_gbeta(n, beta, s);
        long long viol = 0;
        for (int k = 1; k <= n; ++k) {
          // lambda_k >= x_hi  <=>  count_below(x_hi) <= n - k
          // lambda_k <  x_lo  <=>  count_below(x_lo) >= n - k + 1
          if (count_below(T, x_hi[k - 1]) <= n - k ||
              count_below(T, x_lo[k - 1]) >= n - k + 1) {
            ++viol;
          }
        }
        return static_cast<double>(viol) / n;
      },
      frac);

  const mc::MeanStderr f = mc::mean_stderr(frac);
  double worst = 0.0;
  for (double x : frac) worst = std::max(worst, x);

  ExperimentReport rep;
  rep.reps = reps;
  rep.estimates = {{"violation_fraction", f.mean},
                   {"violation_fraction_max", worst}};
  rep.stderrs = {{"violation_fraction", f.se}};
  rep.config_echo = {{"experiment", "rigidity"},
                     {"n", std::to_string(n)},
                     {"beta", format_double(beta)},
                     {"a", format_double(a)},
                     {"reps", std::to_string(reps)},
                     {"seed", std::to_string(seed)}};
  rep.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rep;
}

}  // namespace airylab::tridiag
