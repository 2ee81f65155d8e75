#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "airylab/report.hpp"
#include "airylab/rng.hpp"

namespace airylab::riccati {

enum class HorizonMode { Auto, Fixed };

// Euler-Maruyama configuration for dp = (x - lambda - p^2) dx + (2/sqrt(beta)) dB,
// p(0) = +infinity. The pole is handled by a finite cap with analytic
// 1/p_cap time corrections on entry and on each blow-up tail.
struct DiffusionConfig {
  double beta = 2.0;
  double lambda = 0.0;
  double h0 = 1e-3;     // base step; shrinks like h0*100/(1+p^2) near poles
  double p_cap = 1e4;
  HorizonMode horizon_mode = HorizonMode::Auto;
  double x_max = 0.0;   // only read when horizon_mode == Fixed
};

struct BlowupRecord {
  std::vector<double> blowup_times;  // strictly increasing, within [0, terminal_x]
  double terminal_x = 0.0;
  double terminal_p = 0.0;
  std::uint64_t path_seed = 0;
};

// max(2*lambda, lambda + 10), floored at 0.
double auto_horizon(double lambda);

BlowupRecord simulate_path(const DiffusionConfig& cfg, std::uint64_t seed);
BlowupRecord simulate_path(const DiffusionConfig& cfg, Stream& rng,
                           std::uint64_t seed_label);

// Blow-up count over the Auto horizon with default stepping: realizes the
// eigenvalue counting function N(lambda) of one noise realization.
long long count_below(double lambda, double beta, std::uint64_t seed);
long long count_below(double lambda, double beta, Stream& rng);

// Counts for two spectral parameters driven by one Brownian path sampled on
// a common fixed lattice (blow-up dead time is spent consuming lattice noise
// so the alignment never shifts). Used for monotonicity-in-lambda checks.
std::pair<long long, long long> coupled_counts(double lambda1, double lambda2,
                                               double beta,
                                               std::uint64_t seed);

// First blow-up time of the diffusion with drift (x - a - p^2), i.e. the
// transit from +infinity to -infinity under a strongly negative drift well.
// Censored at x_censor when the path escapes without blowing up.
double first_blowup(double a, double beta, Stream& rng, double x_censor,
                    double h0 = 1e-3, double p_cap = 1e4);

// Empirical distribution of the first blow-up time for a >= 15: mean,
// quantiles, the fraction falling outside the concentration window with
// epsilon = delta = 1/4, and the fraction beyond the far-tail threshold
// 8*pi/sqrt(a). workers <= 0 means use the OpenMP default.
ExperimentReport blowup_time_experiment(double a, double beta, long long reps,
                                        std::uint64_t seed, int workers = 0);

// Monte Carlo frequency of {N(R k^{2/3}) >= eta R^{3/2} k}; eta >= 15,
// R >= 1, k >= 1.
ExperimentReport deviation_event_probability(double R, long long k, double eta,
                                             double beta, long long reps,
                                             std::uint64_t seed,
                                             int workers = 0);

}  // namespace airylab::riccati
