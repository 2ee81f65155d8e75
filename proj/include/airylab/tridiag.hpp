#pragma once

#include <cstdint>
#include <vector>

#include "airylab/report.hpp"
#include "airylab/rng.hpp"

namespace airylab::tridiag {

struct TridiagonalSym {
  std::vector<double> diag;     // n entries
  std::vector<double> offdiag;  // n-1 entries
  int n() const { return static_cast<int>(diag.size()); }
};

// Gaussian beta-ensemble tridiagonal: diag_i ~ sqrt(2/beta) N(0,1),
// offdiag_i ~ chi_{beta*(n-i)} / sqrt(beta), i = 1..n-1, all independent.
TridiagonalSym sample_gbeta(int n, double beta, Stream& rng);
TridiagonalSym sample_gbeta(int n, double beta, std::uint64_t seed);

// #{ eigenvalues < x } by the LDL^T pivot recursion
//   d_1 = diag_1 - x,  d_{i+1} = diag_{i+1} - x - offdiag_i^2 / d_i,
// counting negative pivots.  A zero pivot is perturbed to -1e-300, i.e.
// ties count as below; IEEE infinities propagate harmlessly.
long long count_below(const TridiagonalSym& T, double x);

// Largest k eigenvalues in descending order, each bisected to width tol.
// The initial bracket [-4 sqrt(n), 4 sqrt(n)] is doubled up to 10 times if
// it fails to enclose the spectrum.
std::vector<double> top_k_eigenvalues(const TridiagonalSym& T, int k,
                                      double tol = 1e-10);

// Edge rescaling lambda -> (lambda - 2 sqrt(n)) n^{1/6}.
std::vector<double> rescale_edge(const std::vector<double>& values, double n);

// Unit eigenvector for an eigenvalue estimate: inverse iteration with a
// partially pivoted tridiagonal solve, 2..20 sweeps until the residual
// ||T v - lambda v|| <= 1e-8 ||T||_inf.  Sign fixed so the first entry
// above noise level is positive.
std::vector<double> eigenvector(const TridiagonalSym& T, double lambda);

// Same vector with the decaying tail rebuilt by the backward three-term
// recurrence from index n.  Inverse iteration alone carries an orthogonal
// round-off floor (~1e-14 of the norm) that buries the true tail, whose
// entries reach ~exp(-n/12); the stitched vector is accurate in relative
// terms all the way down and satisfies the recurrence rowwise beyond the
// stitch index.
std::vector<double> eigenvector_tail_refined(const TridiagonalSym& T,
                                             double lambda);

// Discrete Riccati ratios p(i) = n^{1/3} (phi(i) - phi(i-1)) / phi(i-1) for
// i = 2..size; entry j holds i = j+2 (0-based j).  A zero phi(i-1) yields a
// NaN gap, not an error.
std::vector<double> discrete_riccati(const std::vector<double>& phi, double n);

struct DecayDiagnostics {
  bool sign_constant;   // phi keeps one sign on [i_star, n] (zeros ignored)
  double last_ratio;    // |phi(n)| / |phi(n-1)|
  double decay_slope;   // OLS slope of log|phi(i)| vs (i n^{-1/3})^{3/2}
};

// Tail-decay summary of an eigenvector on the window [i_star, n] (1-based);
// the slope is fit on [i_star, n-1].
DecayDiagnostics decay_diagnostics(const std::vector<double>& phi, double n,
                                   int i_star);

// Edge-rigidity violation statistics: per replica, the fraction of indices k
// whose eigenvalue strays from its classical location by at least
// n^{-2/3+a} khat^{-1/3} on the sqrt(n)-normalized scale, khat = min(k, n+1-k).
// Each index is decided by two Sturm counts against fixed thresholds, so no
// eigenvalue is ever extracted; the events are identical up to ties, which
// have probability zero. a in (0, 1]; workers <= 0 means the OpenMP default.
ExperimentReport rigidity_stats(int n, double beta, double a, long long reps,
                                std::uint64_t seed, int workers = 0);

}  // namespace airylab::tridiag
