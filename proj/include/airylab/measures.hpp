#pragma once

#include <string>
#include <utility>
#include <vector>

namespace airylab::measures {

enum class DensityKind { None, AiryReference, SemicircleRescaled };

// Reference density component: sign * (1/pi) sqrt(x) on x >= 0 for
// AiryReference, sign * (1/pi) sqrt(x) sqrt(1 - (k/n)^{2/3} x / 4) on
// [0, 4 (n/k)^{2/3}] for SemicircleRescaled.
struct Density {
  DensityKind kind = DensityKind::None;
  int sign = 1;
  double n = 0.0;
  double k = 0.0;
};

struct SignedMeasure {
  std::vector<std::pair<double, double>> atoms;  // (position, weight) ascending
  Density density;
  double lo = -1.0;  // window
  double hi = 1.0;
};

// Throws DomainError if window, atom order, atom range, or density params
// are inconsistent.
void validate(const SignedMeasure& m);

// Signed density value at x (0 outside the support or the window).
double density_value(const SignedMeasure& m, double x);

// Density support clipped to the window; first > second means empty.
std::pair<double, double> density_support(const SignedMeasure& m);

// Signed density mass over [a, b] by closed-form antiderivatives.
double density_mass(const SignedMeasure& m, double a, double b);

// Empirical measure of a descending point list under x -> -k^{-2/3} x with
// weight 1/k, minus the Airy reference density, windowed to [-R, R]. The
// list must extend past the window (or be empty).
SignedMeasure nu_k(const std::vector<double>& points_desc, long long k,
                   double R);

// Rescaled eigenvalue measure: atoms at (n/k)^{2/3} (2 - lambda_i / sqrt(n))
// with weight 1/k, minus the rescaled equilibrium density.
SignedMeasure mu_nk(const std::vector<double>& eigs_desc, long long n,
                    long long k, double R);

// Atom weights plus density mass over [a, b] (inclusive ends); requires
// [a, b] inside the window.
double mass(const SignedMeasure& m, double a, double b);

struct BlResult {
  double value = 0.0;
  double err_bound = 0.0;       // h * (TV(mu) + TV(nu))
  bool atoms_unresolved = false;  // two distinct atom positions share a cell
};

// Net (mu - nu) weights projected onto the m+1 nodes of the uniform grid on
// [-R, R]: atoms by linear interpolation (on-node atoms stay whole), density
// by per-cell moments.
std::vector<double> grid_weights(const SignedMeasure& mu,
                                 const SignedMeasure& nu, double R, int m);

// Bounded-Lipschitz distance on [-R, R]: sup of sum w_j f_j over |f_j| <= 1,
// |f_{j+1} - f_j| <= h with h = 2R/m, solved exactly by a concave
// piecewise-linear value-function recursion. pinned forces f(-R) = f(R) = 0
// (the compact-support variant).
BlResult bl_distance(const SignedMeasure& mu, const SignedMeasure& nu,
                     double R, int m = 1024, bool pinned = false);

std::string to_json(const SignedMeasure& m);
SignedMeasure from_json(const std::string& text);

}  // namespace airylab::measures
