#include "airylab/spectra.hpp"

#include <cmath>
#include <limits>

#include "airylab/errors.hpp"

namespace airylab::spectra {

namespace detail {

// Ai(x) = c1*f(x) + c2*g(x) with the classic 3-term hypergeometric pieces.
// Series converge everywhere; round-off cancellation keeps the usable range
// to about |x| <= 7 (worst case ~1e-11 relative there).
double ai_series(double x) {
  static const double c1 = 0.3550280538878172392600631860041831763980;   // Ai(0)
  static const double c2 = -0.2588194037928067984051835601892039634793;  // Ai'(0)
  const double x3 = x * x * x;
  double f = 1.0, tf = 1.0;
  double g = x, tg = x;
  for (int k = 0; k < 200; ++k) {
    tf *= x3 / ((3.0 * k + 2.0) * (3.0 * k + 3.0));
    tg *= x3 / ((3.0 * k + 3.0) * (3.0 * k + 4.0));
    f += tf;
    g += tg;
    if (std::fabs(tf) < 1e-20 * std::fabs(f) &&
        std::fabs(tg) < 1e-20 * (std::fabs(g) + 1e-300)) {
      break;
    }
  }
  return c1 * f + c2 * g;
}

double ai_asymptotic(double x) {
  if (x > -7.0) throw DomainError("ai_asymptotic: needs x <= -7");
  const double t = -x;
  const double zeta = (2.0 / 3.0) * t * std::sqrt(t);
  // u_0 = 1, u_{k+1} = u_k (6k+5)(6k+3)(6k+1) / (216 (2k+2)(2k+1)) ... kept
  // via the Gamma-ratio recurrence; truncated at the smallest term.
  double P = 1.0, Q = 0.0;
  double u = 1.0, zpow = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 40; ++k) {
    const double m = k - 1.0;
    u *= (3.0 * m + 2.5) * (3.0 * m + 1.5) * (3.0 * m + 0.5) /
         (54.0 * (m + 1.0) * (m + 0.5));
    zpow /= zeta;
    const double term = u * zpow;
    if (std::fabs(term) >= prev) break;  // divergence point reached
    prev = std::fabs(term);
    const int r = k % 4;
    if (r == 1) Q += term;
    else if (r == 2) P -= term;
    else if (r == 3) Q -= term;
    else P += term;
    if (std::fabs(term) < 1e-18) break;
  }
  const double phase = zeta + 0.25 * M_PI;
  return (std::sin(phase) * P - std::cos(phase) * Q) /
         (std::sqrt(M_PI) * std::pow(t, 0.25));
}

}  // namespace detail

double airy_ai(double x) {
  if (x > 7.0) throw DomainError("airy_ai: supported for x <= 7");
  return (x >= -7.0) ? detail::ai_series(x) : detail::ai_asymptotic(x);
}

namespace {

double gamma_asymptotic(double i) {
  return std::pow(1.5 * M_PI * (i - 0.25), 2.0 / 3.0);
}

double gamma_exact(int i) {
  const double mid = gamma_asymptotic(i);
  const double gap = gamma_asymptotic(i + 1.0) - mid;
  double lo = mid - 0.45 * gap, hi = mid + 0.45 * gap;
  double flo = airy_ai(-lo), fhi = airy_ai(-hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) {
    throw NumericalError("airy_eigenvalue: zero bracket failed");
  }
  while (hi - lo > 1e-10) {
    const double m = 0.5 * (lo + hi);
    const double fm = airy_ai(-m);
    if (fm == 0.0) return m;
    if ((fm > 0) == (flo > 0)) {
      lo = m;
      flo = fm;
    } else {
      hi = m;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double airy_eigenvalue(int i, AirySpectrumMode mode) {
  if (i < 1) throw DomainError("airy_eigenvalue: index must be >= 1");
  if (mode == AirySpectrumMode::Asymptotic) return gamma_asymptotic(i);
  return gamma_exact(i);
}

long long airy_count(double lambda, AirySpectrumMode mode) {
  if (!std::isfinite(lambda)) throw DomainError("airy_count: lambda not finite");
  if (lambda < airy_eigenvalue(1, mode)) return 0;
  long long i = static_cast<long long>(
      (2.0 / (3.0 * M_PI)) * std::pow(lambda, 1.5) + 0.25);
  if (i < 1) i = 1;
  while (i > 1 && airy_eigenvalue(static_cast<int>(i), mode) > lambda) --i;
  if (airy_eigenvalue(static_cast<int>(i), mode) > lambda) return 0;
  while (airy_eigenvalue(static_cast<int>(i + 1), mode) <= lambda) ++i;
  return i;
}

double semicircle_cdf(double x) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  return (x * std::sqrt(4.0 - x * x) / 4.0 + std::asin(0.5 * x)) / M_PI + 0.5;
}

double classical_location(long long j, long long n) {
  if (n < 1 || j < 1 || j > n) throw DomainError("classical_location: need 1 <= j <= n");
  // semicircle_cdf(gamma) = 1 - j/n
  const double target = 1.0 - static_cast<double>(j) / static_cast<double>(n);
  double lo = -2.0, hi = 2.0;
  while (hi - lo > 1e-12) {
    const double m = 0.5 * (lo + hi);
    if (semicircle_cdf(m) < target) lo = m;
    else hi = m;
  }
  return 0.5 * (lo + hi);
}

double xi(double x) {
  const double t = std::fabs(x);
  if (t <= 2.0) return 0.0;
  const double s = std::sqrt(t * t - 4.0);
  return t * s / 4.0 - std::log(0.5 * (t + s));
}

double xi_tilde(double x, double n, double k) {
  if (!(n > 0.0) || !(k > 0.0)) throw DomainError("xi_tilde: need n, k > 0");
  return (n / k) * xi(2.0 - std::pow(k / n, 2.0 / 3.0) * x);
}

namespace {

// One RK4 step of y' = drift(x) - y^2 (chart Q) or y' = drift(x)*y^2 - 1
// (chart W, w = -1/q).
template <bool kChartW>
double rk4_step(double x, double y, double h, double a, bool frozen) {
  auto f = [a, frozen](double xx, double yy) {
    const double d = frozen ? -a : xx - a;
    if constexpr (kChartW) return d * yy * yy - 1.0;
    else return d - yy * yy;
  };
  const double k1 = f(x, y);
  const double k2 = f(x + 0.5 * h, y + 0.5 * h * k1);
  const double k3 = f(x + 0.5 * h, y + 0.5 * h * k2);
  const double k4 = f(x + h, y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

double riccati_ode_blowup(double a, bool frozen_drift) {
  if (!(a > 0.0)) throw DomainError("riccati_ode_blowup: need a > 0");
  const double delta_est = M_PI / std::sqrt(a);
  const double h = std::min(1e-4, delta_est / 4000.0);
  const double x_max = 10.0 * delta_est + 10.0;

  bool chart_w = true;
  double x = 0.0, y = 0.0;  // w = 0 encodes q = infinity at the start
  bool left_start = false;
  while (x < x_max) {
    const double y_new = chart_w ? rk4_step<true>(x, y, h, a, frozen_drift)
                                 : rk4_step<false>(x, y, h, a, frozen_drift);
    if (chart_w && left_start && y > 0.0 && y_new <= 0.0) {
      // w crossed zero from above: q ran to -inf.  Refine inside the step.
      double slo = 0.0, shi = h;
      for (int it = 0; it < 60 && shi - slo > 1e-16 * (x + h); ++it) {
        const double sm = 0.5 * (slo + shi);
        const double wm = rk4_step<true>(x, y, sm, a, frozen_drift);
        if (wm > 0.0) slo = sm;
        else shi = sm;
      }
      return x + 0.5 * (slo + shi);
    }
    y = y_new;
    x += h;
    if (chart_w) {
      if (y < -1e-6) left_start = true;
      if (std::fabs(y) > 1.0) {
        y = -1.0 / y;  // q = -1/w
        chart_w = false;
      }
    } else {
      if (std::fabs(y) > 1.0) {
        left_start = true;  // reaching |q|>1 implies we are past the entry
        y = -1.0 / y;
        chart_w = true;
      }
    }
  }
  throw NumericalError("riccati_ode_blowup: no blow-up before safety horizon");
}

}  // namespace airylab::spectra
