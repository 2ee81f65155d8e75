#include "airylab/riccati.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "airylab/errors.hpp"
#include "airylab/mc.hpp"

namespace airylab::riccati {

namespace {

void validate(const DiffusionConfig& cfg) {
  if (!(cfg.beta > 0.0)) throw DomainError("riccati: beta > 0");
  if (!(cfg.h0 > 0.0 && cfg.h0 <= 0.01)) {
    throw DomainError("riccati: h0 in (0, 0.01]");
  }
  if (!(cfg.p_cap >= 100.0)) throw DomainError("riccati: p_cap >= 100");
  if (cfg.horizon_mode == HorizonMode::Fixed &&
      !(cfg.x_max >= 0.0 && std::isfinite(cfg.x_max))) {
    throw DomainError("riccati: fixed horizon needs finite x_max >= 0");
  }
}

std::string fmt(double x) { return format_double(x); }

}  // namespace

double auto_horizon(double lambda) {
  return std::max(0.0, std::max(2.0 * lambda, lambda + 10.0));
}

BlowupRecord simulate_path(const DiffusionConfig& cfg, Stream& rng,
                           std::uint64_t seed_label) {
  validate(cfg);
  const double x_end = (cfg.horizon_mode == HorizonMode::Auto)
                           ? auto_horizon(cfg.lambda)
                           : cfg.x_max;
  const double sig = 2.0 / std::sqrt(cfg.beta);
  const double cap = cfg.p_cap;
  BlowupRecord rec;
  rec.path_seed = seed_label;
  double x = 1.0 / cap;  // the fall from +infinity to the cap takes 1/cap
  double p = cap;
  while (x < x_end) {
    double h = cfg.h0 * 100.0 / (1.0 + p * p);
    if (h > cfg.h0) h = cfg.h0;
    if (x + h > x_end) h = x_end - x;
    p += (x - cfg.lambda - p * p) * h + sig * std::sqrt(h) * rng.normal();
    x += h;
    if (p <= -cap) {
      const double tb = x + 1.0 / cap;
      rec.blowup_times.push_back(tb);
      x = tb + 1.0 / cap;
      p = cap;
    } else if (p > cap) {
      p = cap;
    }
  }
  rec.terminal_x = x;
  rec.terminal_p = p;
  return rec;
}

BlowupRecord simulate_path(const DiffusionConfig& cfg, std::uint64_t seed) {
  Stream rng(seed);
  return simulate_path(cfg, rng, seed);
}

long long count_below(double lambda, double beta, Stream& rng) {
  DiffusionConfig cfg;
  cfg.beta = beta;
  cfg.lambda = lambda;
  return static_cast<long long>(simulate_path(cfg, rng, 0).blowup_times.size());
}

long long count_below(double lambda, double beta, std::uint64_t seed) {
  Stream rng(seed);
  return count_below(lambda, beta, rng);
}

std::pair<long long, long long> coupled_counts(double lambda1, double lambda2,
                                               double beta,
                                               std::uint64_t seed) {
  if (!(beta > 0.0)) throw DomainError("coupled_counts: beta > 0");
  // fixed lattice keeps the Brownian increments shared between the two
  // parameters; a smaller cap keeps the explicit step stable on that lattice
  const double h = 1e-4;
  const double cap = 100.0;
  const double sqh = std::sqrt(h);
  const double sig = 2.0 / std::sqrt(beta);
  const double lam[2] = {lambda1, lambda2};
  const double end[2] = {auto_horizon(lambda1), auto_horizon(lambda2)};
  const double x_stop = std::max(end[0], end[1]);
  double p[2] = {cap, cap};
  double wake[2] = {1.0 / cap, 1.0 / cap};  // entry correction for both
  long long cnt[2] = {0, 0};
  Stream rng(seed);
  double x = 0.0;
  while (x < x_stop) {
    const double xi = rng.normal();
    const double noise = sig * sqh * xi;
    for (int i = 0; i < 2; ++i) {
      if (x < wake[i] || x >= end[i]) continue;
      p[i] += (x - lam[i] - p[i] * p[i]) * h + noise;
      if (p[i] <= -cap) {
        ++cnt[i];
        wake[i] = x + h + 2.0 / cap;  // blow-up tail plus re-entry
        p[i] = cap;
      } else if (p[i] > cap) {
        p[i] = cap;
      }
    }
    x += h;
  }
  return {cnt[0], cnt[1]};
}

double first_blowup(double a, double beta, Stream& rng, double x_censor,
                    double h0, double p_cap) {
  if (!(beta > 0.0)) throw DomainError("first_blowup: beta > 0");
  if (!(x_censor > 0.0)) throw DomainError("first_blowup: x_censor > 0");
  const double sig = 2.0 / std::sqrt(beta);
  double x = 1.0 / p_cap;
  double p = p_cap;
  while (x < x_censor) {
    double h = h0 * 100.0 / (1.0 + p * p);
    if (h > h0) h = h0;
    p += (x - a - p * p) * h + sig * std::sqrt(h) * rng.normal();
    x += h;
    if (p <= -p_cap) return x + 1.0 / p_cap;
    if (p > p_cap) p = p_cap;
  }
  return x_censor;
}

ExperimentReport blowup_time_experiment(double a, double beta, long long reps,
                                        std::uint64_t seed, int workers) {
  if (!(a >= 15.0)) {
    throw DomainError("blowup_time_experiment: requires a >= 15");
  }
  if (!(beta > 0.0)) throw DomainError("blowup_time_experiment: beta > 0");
  if (reps < 1) throw DomainError("blowup_time_experiment: reps >= 1");
  const auto t0 = std::chrono::steady_clock::now();

  const double sqa = std::sqrt(a);
  const double win_lo = M_PI / std::sqrt((25.0 / 16.0) * a);
  const double win_hi =
      M_PI / std::sqrt(0.75 * (0.75 * a - 2.0 * M_PI / sqa));
  const double tail_thr = 8.0 * M_PI / sqa;
  const double x_censor = std::max(4.0, 12.0 * M_PI / sqa);

  std::vector<double> delta;
  mc::run_replicas(
      reps, seed, workers,
      [&](long long, Stream& s) { return first_blowup(a, beta, s, x_censor); },
      delta);

  const mc::MeanStderr m = mc::mean_stderr(delta);
  long long outside = 0, above = 0;
  for (double d : delta) {
    if (d < win_lo || d > win_hi) ++outside;
    if (d > tail_thr) ++above;
  }
  std::vector<double> sorted = delta;
  std::sort(sorted.begin(), sorted.end());
  auto quant = [&](double q) {
    const long long idx = std::min<long long>(
        reps - 1, static_cast<long long>(std::ceil(q * reps)) - 1);
    return sorted[static_cast<size_t>(std::max<long long>(0, idx))];
  };
  const mc::MeanStderr fo = mc::freq_stderr(outside, reps);
  const mc::MeanStderr fa = mc::freq_stderr(above, reps);

  ExperimentReport rep;
  rep.reps = reps;
  rep.estimates = {{"delta_mean", m.mean},
                   {"delta_q01", quant(0.01)},
                   {"delta_q50", quant(0.50)},
                   {"delta_q99", quant(0.99)},
                   {"frac_outside_window", fo.mean},
                   {"frac_above_tail", fa.mean},
                   {"window_lo", win_lo},
                   {"window_hi", win_hi},
                   {"tail_threshold", tail_thr}};
  rep.stderrs = {{"delta_mean", m.se},
                 {"frac_outside_window", fo.se},
                 {"frac_above_tail", fa.se}};
  rep.config_echo = {{"experiment", "blowup-times"},
                     {"a", fmt(a)},
                     {"beta", fmt(beta)},
                     {"reps", std::to_string(reps)},
                     {"seed", std::to_string(seed)}};
  rep.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rep;
}

ExperimentReport deviation_event_probability(double R, long long k, double eta,
                                             double beta, long long reps,
                                             std::uint64_t seed, int workers) {
  if (!(eta >= 15.0)) throw DomainError("deviation_event: eta >= 15");
  if (!(R >= 1.0)) throw DomainError("deviation_event: R >= 1");
  if (k < 1) throw DomainError("deviation_event: k >= 1");
  if (!(beta > 0.0)) throw DomainError("deviation_event: beta > 0");
  if (reps < 1) throw DomainError("deviation_event: reps >= 1");
  const auto t0 = std::chrono::steady_clock::now();

  const double kd = static_cast<double>(k);
  const double lambda = R * std::pow(kd, 2.0 / 3.0);
  const double raw_thr = eta * std::pow(R, 1.5) * kd;
  const long long thr = static_cast<long long>(std::ceil(raw_thr));

  std::vector<double> hit;
  mc::run_replicas(
      reps, seed, workers,
      [&](long long, Stream& s) {
        return count_below(lambda, beta, s) >= thr ? 1.0 : 0.0;
      },
      hit);
  long long hits = 0;
  for (double h : hit) hits += (h != 0.0);
  const mc::MeanStderr f = mc::freq_stderr(hits, reps);

  ExperimentReport rep;
  rep.reps = reps;
  rep.estimates = {{"frequency", f.mean},
                   {"lambda", lambda},
                   {"threshold_count", static_cast<double>(thr)},
                   {"eta", eta}};
  rep.stderrs = {{"frequency", f.se}};
  rep.config_echo = {{"experiment", "deviation-event"},
                     {"R", fmt(R)},
                     {"k", std::to_string(k)},
                     {"eta", fmt(eta)},
                     {"beta", fmt(beta)},
                     {"reps", std::to_string(reps)},
                     {"seed", std::to_string(seed)}};
  rep.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rep;
}

}  // namespace airylab::riccati
