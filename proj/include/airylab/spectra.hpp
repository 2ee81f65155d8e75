#pragma once

namespace airylab::spectra {

enum class AirySpectrumMode { Asymptotic, Exact };

namespace detail {
// Ai by Maclaurin series; accurate (rel ~1e-11 or better) for |x| <= 7.
double ai_series(double x);
// Ai by the oscillatory asymptotic expansion; usable for x <= -7 where the
// optimal truncation floor is below 1e-9 relative.
double ai_asymptotic(double x);
}  // namespace detail

// Airy function Ai(x) for x <= 7: series on [-7, 7], asymptotic below -7.
// The two branches agree to better than 1e-9 relative at the seam.
double airy_ai(double x);

// gamma_i: the i-th eigenvalue of -d^2/dx^2 + x on [0,inf) with Dirichlet
// boundary, i.e. the negated i-th zero of Ai.  Asymptotic mode evaluates
// (3*pi*(i - 1/4)/2)^(2/3); Exact mode bisects Ai to 1e-10.
double airy_eigenvalue(int i, AirySpectrumMode mode);

// #{ i : gamma_i <= lambda }.  O(1) via inversion of the asymptotic law
// plus a local walk.
long long airy_count(double lambda, AirySpectrumMode mode);

// Semicircle mass of [-2, x] (density sqrt(4-u^2)/(2*pi)); clamped outside.
double semicircle_cdf(double x);

// gamma_j^(n): the classical location solving integral from gamma to 2 of
// the semicircle density = j/n, found by bisection to 1e-12.  1 <= j <= n.
double classical_location(long long j, long long n);

// xi(x) = integral from 2 to |x| of sqrt(u^2-4)/2 du, zero inside [-2,2]:
// xi(x) = x*sqrt(x^2-4)/4 - log((x+sqrt(x^2-4))/2) evaluated at |x|.
double xi(double x);

// xi_tilde(x) = (n/k) * xi(2 - (k/n)^(2/3) * x).
double xi_tilde(double x, double n, double k);

// First blow-up time of the noiseless Riccati flow q' = drift - q^2 with
// q(0) = +inf, where drift = -a (frozen_drift) or x - a.  Integrated by RK4
// in the chart w = -1/q near the poles (w' = drift*w^2 - 1 is regular
// there), switching charts at |q| = 1; relative accuracy ~1e-9.
// Frozen drift blows up at exactly pi/sqrt(a).  The full drift is
// guaranteed to blow up for a >= (4*pi)^(2/3); below the first Airy
// eigenvalue there is no blow-up and the call raises NumericalError.
double riccati_ode_blowup(double a, bool frozen_drift);

}  // namespace airylab::spectra
