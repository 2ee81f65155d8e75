#include "airylab/experiments.hpp"

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "airylab/errors.hpp"
#include "airylab/kpz.hpp"
#include "airylab/mc.hpp"
#include "airylab/measures.hpp"
#include "airylab/ratefn.hpp"
#include "airylab/riccati.hpp"
#include "airylab/spectra.hpp"
#include "airylab/tridiag.hpp"

namespace airylab::harness {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Typed access to the key-value params with consumption tracking, so a key
// nobody asked for is reported back as the offending one.
class Params {
 public:
  explicit Params(const std::map<std::string, std::string>& p) : p_(p) {}

  bool has(const std::string& key) const { return p_.count(key) != 0; }

  std::string str(const std::string& key, const std::string& dflt) {
    used_.insert(key);
    auto it = p_.find(key);
    return it == p_.end() ? dflt : it->second;
  }

  double num(const std::string& key, double dflt) {
    used_.insert(key);
    auto it = p_.find(key);
    return it == p_.end() ? dflt : parse_num(key, it->second);
  }

  double num_req(const std::string& key) {
    used_.insert(key);
    auto it = p_.find(key);
    if (it == p_.end()) throw DomainError("param '" + key + "' is required");
    return parse_num(key, it->second);
  }

  long long integer(const std::string& key, long long dflt) {
    used_.insert(key);
    auto it = p_.find(key);
    return it == p_.end() ? dflt : parse_int(key, it->second);
  }

  long long integer_req(const std::string& key) {
    used_.insert(key);
    auto it = p_.find(key);
    if (it == p_.end()) throw DomainError("param '" + key + "' is required");
    return parse_int(key, it->second);
  }

  bool flag(const std::string& key, bool dflt) {
    used_.insert(key);
    auto it = p_.find(key);
    if (it == p_.end()) return dflt;
    const std::string& v = it->second;
    if (v == "1" || v == "true") return true;
    if (v == "0" || v == "false") return false;
    throw DomainError("param '" + key + "': expected 0/1/true/false, got '" +
                      v + "'");
  }

  std::vector<double> grid(const std::string& key, const std::string& dflt) {
    const std::string raw = str(key, dflt);
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= raw.size()) {
      const std::size_t comma = raw.find(',', pos);
      const std::string tok =
          raw.substr(pos, comma == std::string::npos ? comma : comma - pos);
      if (!tok.empty()) out.push_back(parse_num(key, tok));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return out;
  }

  void reject_unknown(const char* experiment) const {
    for (const auto& [k, v] : p_) {
      if (!used_.count(k)) {
        throw DomainError(std::string("unknown param '") + k + "' for " +
                          experiment);
      }
    }
  }

 private:
  static double parse_num(const std::string& key, const std::string& v) {
    const char* s = v.c_str();
    char* end = nullptr;
    const double x = std::strtod(s, &end);
    if (end == s || *end != '\0' || !std::isfinite(x)) {
      throw DomainError("param '" + key + "': not a finite number: '" + v +
                        "'");
    }
    return x;
  }

  static long long parse_int(const std::string& key, const std::string& v) {
    const char* s = v.c_str();
    char* end = nullptr;
    const long long x = std::strtoll(s, &end, 10);
    if (end == s || *end != '\0') {
      throw DomainError("param '" + key + "': not an integer: '" + v + "'");
    }
    return x;
  }

  const std::map<std::string, std::string>& p_;
  std::set<std::string> used_;
};

std::string join_grid(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += format_double(xs[i]);
  }
  return out;
}

// Exceptions must not escape an OpenMP loop body; replicas funnel the first
// failure here and the driver rethrows after the join.
class FailureLatch {
 public:
  void capture() {
    std::lock_guard<std::mutex> g(mu_);
    if (kind_ >= 0) return;
    try {
      throw;
    } catch (const DomainError& e) {
      kind_ = 0;
      msg_ = e.what();
    } catch (const std::exception& e) {
      kind_ = 1;
      msg_ = e.what();
    } catch (...) {
      kind_ = 1;
      msg_ = "unknown replica failure";
    }
  }
  void rethrow() const {
    if (kind_ == 0) throw DomainError(msg_);
    if (kind_ > 0) throw NumericalError(msg_);
  }

 private:
  mutable std::mutex mu_;
  int kind_ = -1;
  std::string msg_;
};

mc::MeanStderr column_stats(const std::vector<double>& rows, long long reps,
                            int width, int col) {
  std::vector<double> c(static_cast<std::size_t>(reps));
  for (long long i = 0; i < reps; ++i) {
    c[static_cast<std::size_t>(i)] = rows[static_cast<std::size_t>(i) * width + col];
  }
  return mc::mean_stderr(c);
}

long long column_hits(const std::vector<double>& rows, long long reps,
                      int width, int col) {
  long long hits = 0;
  for (long long i = 0; i < reps; ++i) {
    hits += rows[static_cast<std::size_t>(i) * width + col] != 0.0;
  }
  return hits;
}

struct Ols {
  double slope = 0.0;
  double intercept = 0.0;
};

Ols ols_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw NumericalError("regression: degenerate abscissae");
  Ols o;
  o.slope = sxy / sxx;
  o.intercept = my - o.slope * mx;
  return o;
}

// ---------------------------------------------------------------- gbe-sample

RunResult run_gbe(const ExperimentConfig& cfg, Params& P) {
  const long long n = P.integer_req("n");
  const double beta = P.num_req("beta");
  const long long k = P.integer("k", std::min<long long>(n, 8));
  const double tol = P.num("tol", 1e-10);
  P.reject_unknown("gbe-sample");
  if (n < 2) throw DomainError("param 'n': need n >= 2");
  if (k < 1 || k > n) throw DomainError("param 'k': need 1 <= k <= n");
  if (!(beta > 0.0)) throw DomainError("param 'beta': need beta > 0");
  if (!(tol > 0.0)) throw DomainError("param 'tol': need tol > 0");

  const int ni = static_cast<int>(n), ki = static_cast<int>(k);
  const int width = 2 + ki;
  FailureLatch latch;
  std::vector<double> rows;
  mc::run_replica_rows(
      cfg.reps, cfg.seed, cfg.workers, width,
      [&](long long, Stream& s, double* row) {
        try {
          const tridiag::TridiagonalSym T = tridiag::sample_gbeta(ni, beta, s);
          double dsum = 0.0;
          for (double d : T.diag) dsum += d;
          row[0] = dsum / ni;
          double osum = 0.0;
          for (int i = 1; i <= ni - 1; ++i) {
            osum += T.offdiag[i - 1] * T.offdiag[i - 1] / (ni - i);
          }
          row[1] = osum / (ni - 1);
          const std::vector<double> top = tridiag::top_k_eigenvalues(T, ki, tol);
          const std::vector<double> resc = tridiag::rescale_edge(top, ni);
          for (int j = 0; j < ki; ++j) row[2 + j] = resc[j];
        } catch (...) {
          latch.capture();
          for (int j = 0; j < width; ++j) row[j] = kNan;
        }
      },
      rows);
  latch.rethrow();

  const mc::MeanStderr dm = column_stats(rows, cfg.reps, width, 0);
  const mc::MeanStderr om = column_stats(rows, cfg.reps, width, 1);
  const mc::MeanStderr t1 = column_stats(rows, cfg.reps, width, 2);
  const double t1_var = t1.se * t1.se * cfg.reps;

  RunResult r;
  r.report.estimates = {{"diag_mean", dm.mean},
                        {"offdiag_sq_norm_mean", om.mean},
                        {"top1_rescaled_mean", t1.mean},
                        {"top1_rescaled_var", t1_var}};
  r.report.stderrs = {{"diag_mean", dm.se},
                      {"offdiag_sq_norm_mean", om.se},
                      {"top1_rescaled_mean", t1.se}};
  r.report.config_echo = {{"experiment", "gbe-sample"},
                          {"n", std::to_string(n)},
                          {"beta", format_double(beta)},
                          {"k", std::to_string(k)},
                          {"tol", format_double(tol)},
                          {"reps", std::to_string(cfg.reps)},
                          {"seed", std::to_string(cfg.seed)}};
  r.table.columns = {"rep"};
  for (int j = 1; j <= ki; ++j) {
    r.table.columns.push_back("lam_tilde_" + std::to_string(j));
  }
  r.table.rows.reserve(static_cast<std::size_t>(cfg.reps));
  for (long long i = 0; i < cfg.reps; ++i) {
    std::vector<double> row(1 + static_cast<std::size_t>(ki));
    row[0] = static_cast<double>(i);
    for (int j = 0; j < ki; ++j) {
      row[1 + j] = rows[static_cast<std::size_t>(i) * width + 2 + j];
    }
    r.table.rows.push_back(std::move(row));
  }
  return r;
}

// -------------------------------------------------------------- sao-simulate

RunResult run_sao(const ExperimentConfig& cfg, Params& P) {
  const double lambda = P.num_req("lambda");
  const double beta = P.num_req("beta");
  P.reject_unknown("sao-simulate");
  if (!(beta > 0.0)) throw DomainError("param 'beta': need beta > 0");

  FailureLatch latch;
  std::vector<double> counts;
  mc::run_replicas(
      cfg.reps, cfg.seed, cfg.workers,
      [&](long long, Stream& s) -> double {
        try {
          return static_cast<double>(riccati::count_below(lambda, beta, s));
        } catch (...) {
          latch.capture();
          return kNan;
        }
      },
      counts);
  latch.rethrow();

  const mc::MeanStderr m = mc::mean_stderr(counts);
  const double var = m.se * m.se * cfg.reps;
  const double weyl =
      lambda > 0.0 ? 2.0 / (3.0 * M_PI) * std::pow(lambda, 1.5) : 0.0;
  const double ref = static_cast<double>(
      spectra::airy_count(lambda, spectra::AirySpectrumMode::Exact));

  std::map<long long, long long> hist;
  for (double c : counts) ++hist[static_cast<long long>(c)];

  RunResult r;
  r.report.estimates = {{"count_mean", m.mean},
                        {"count_var", var},
                        {"count_airy", ref},
                        {"count_weyl", weyl}};
  r.report.stderrs = {{"count_mean", m.se}};
  r.report.config_echo = {{"experiment", "sao-simulate"},
                          {"lambda", format_double(lambda)},
                          {"beta", format_double(beta)},
                          {"reps", std::to_string(cfg.reps)},
                          {"seed", std::to_string(cfg.seed)}};
  r.table.columns = {"count", "freq"};
  for (const auto& [c, h] : hist) {
    r.table.rows.push_back({static_cast<double>(c),
                            static_cast<double>(h) / cfg.reps});
  }
  return r;
}

// ------------------------------------------------------------------- tw-tail

RunResult run_tw_tail(const ExperimentConfig& cfg, Params& P) {
  const double beta = P.num_req("beta");
  const long long n = P.integer_req("n");
  const std::vector<double> s_grid = P.grid("s_grid", "2,2.5,3,3.5");
  P.reject_unknown("tw-tail");
  if (n < 2) throw DomainError("param 'n': need n >= 2");
  if (!(beta > 0.0)) throw DomainError("param 'beta': need beta > 0");
  if (s_grid.empty()) throw DomainError("param 's_grid': must be non-empty");
  for (std::size_t i = 1; i < s_grid.size(); ++i) {
    if (!(s_grid[i] > s_grid[i - 1])) {
      throw DomainError("param 's_grid': values must be strictly increasing");
    }
  }

  const int ni = static_cast<int>(n);
  const int S = static_cast<int>(s_grid.size());
  // lam_tilde_1 < -s  <=>  every eigenvalue is below 2 sqrt(n) - s n^{-1/6},
  // one Sturm pass per threshold.
  const double rt2 = 2.0 * std::sqrt(static_cast<double>(n));
  const double scale = std::pow(static_cast<double>(n), -1.0 / 6.0);
  std::vector<double> thresholds(S);
  for (int j = 0; j < S; ++j) thresholds[j] = rt2 - s_grid[j] * scale;

  FailureLatch latch;
  std::vector<double> rows;
  mc::run_replica_rows(
      cfg.reps, cfg.seed, cfg.workers, S,
      [&](long long, Stream& s, double* row) {
        try {
          const tridiag::TridiagonalSym T = tridiag::sample_gbeta(ni, beta, s);
          for (int j = 0; j < S; ++j) {
            row[j] = tridiag::count_below(T, thresholds[j]) == n ? 1.0 : 0.0;
          }
        } catch (...) {
          latch.capture();
          for (int j = 0; j < S; ++j) row[j] = kNan;
        }
      },
      rows);
  latch.rethrow();

  RunResult r;
  r.table.columns = {"s", "log_freq", "stderr"};
  std::vector<double> xs, ys;
  for (int j = 0; j < S; ++j) {
    const long long hits = column_hits(rows, cfg.reps, S, j);
    const mc::MeanStderr f = mc::freq_stderr(hits, cfg.reps);
    double logf = -std::numeric_limits<double>::infinity();
    double se_log = kNan;
    if (hits > 0) {
      logf = std::log(f.mean);
      se_log = f.se / f.mean;
      xs.push_back(s_grid[j] * s_grid[j] * s_grid[j]);
      ys.push_back(logf);
    }
    r.table.rows.push_back({s_grid[j], logf, se_log});
  }
  if (xs.size() < 2) {
    throw NumericalError(
        "tw-tail: fewer than 2 s-values with nonzero tail frequency; "
        "increase reps or lower s_grid");
  }
  const Ols fit = ols_fit(xs, ys);

  r.report.estimates = {{"slope_vs_s3", fit.slope},
                        {"intercept", fit.intercept},
                        {"points_used", static_cast<double>(xs.size())}};
  r.report.config_echo = {{"experiment", "tw-tail"},
                          {"beta", format_double(beta)},
                          {"n", std::to_string(n)},
                          {"s_grid", join_grid(s_grid)},
                          {"reps", std::to_string(cfg.reps)},
                          {"seed", std::to_string(cfg.seed)}};
  return r;
}

// ------------------------------------------------------------------ rigidity

RunResult run_rigidity(const ExperimentConfig& cfg, Params& P) {
  const long long n = P.integer_req("n");
  const double beta = P.num("beta", 2.0);
  const double a = P.num_req("a");
  P.reject_unknown("rigidity");
  RunResult r;
  r.report = tridiag::rigidity_stats(static_cast<int>(n), beta, a, cfg.reps,
                                     cfg.seed, cfg.workers);
  return r;
}

// --------------------------------------------------------------- bl-distance

RunResult run_bl_distance(const ExperimentConfig& cfg, Params& P) {
  const long long n = P.integer_req("n");
  const long long k = P.integer_req("k");
  const double beta = P.num("beta", 2.0);
  const double R = P.num("R", 2.0);
  const long long m = P.integer("m", 1024);
  const bool pinned = P.flag("pinned", false);
  const double tol = P.num("tol", 1e-10);
  const std::string mode_s = P.str("airy_mode", "asymptotic");
  P.reject_unknown("bl-distance");
  if (n < 2) throw DomainError("param 'n': need n >= 2");
  if (k < 1 || k > n) throw DomainError("param 'k': need 1 <= k <= n");
  if (!(beta > 0.0)) throw DomainError("param 'beta': need beta > 0");
  if (!(R > 0.0)) throw DomainError("param 'R': need R > 0");
  if (!(tol > 0.0)) throw DomainError("param 'tol': need tol > 0");
  spectra::AirySpectrumMode mode;
  if (mode_s == "asymptotic") mode = spectra::AirySpectrumMode::Asymptotic;
  else if (mode_s == "exact") mode = spectra::AirySpectrumMode::Exact;
  else throw DomainError("param 'airy_mode': expected asymptotic or exact");

  // Deterministic reference: leading Airy-operator levels, deep enough that
  // the truncated tail of nu_k lies beyond the window.
  const double kc = std::pow(static_cast<double>(k), -2.0 / 3.0);
  std::vector<double> airy_pts;
  for (int i = 1;; ++i) {
    const double g = spectra::airy_eigenvalue(i, mode);
    airy_pts.push_back(-g);
    if (kc * g > R) break;
    if (i > 200000) throw NumericalError("bl-distance: reference too deep");
  }
  const measures::SignedMeasure nu = measures::nu_k(airy_pts, k, R);

  // Eigenvalues mapping into [-R, R]: lambda >= sqrt(n) (2 - R (k/n)^{2/3}).
  const double rt = std::sqrt(static_cast<double>(n));
  const double ratio = std::pow(static_cast<double>(k) / n, 2.0 / 3.0);
  const double lam_lo = rt * (2.0 - R * ratio);

  const int ni = static_cast<int>(n);
  FailureLatch latch;
  std::vector<double> rows;
  mc::run_replica_rows(
      cfg.reps, cfg.seed, cfg.workers, 2,
      [&](long long, Stream& s, double* row) {
        try {
          const tridiag::TridiagonalSym T = tridiag::sample_gbeta(ni, beta, s);
          const long long j = n - tridiag::count_below(T, lam_lo);
          std::vector<double> eigs;
          if (j > 0) {
            eigs = tridiag::top_k_eigenvalues(T, static_cast<int>(j), tol);
          }
          const measures::SignedMeasure mu = measures::mu_nk(eigs, n, k, R);
          const measures::BlResult d =
              measures::bl_distance(mu, nu, R, static_cast<int>(m), pinned);
          row[0] = d.value;
          row[1] = static_cast<double>(j);
        } catch (...) {
          latch.capture();
          row[0] = row[1] = kNan;
        }
      },
      rows);
  latch.rethrow();

  const mc::MeanStderr dm = column_stats(rows, cfg.reps, 2, 0);
  const mc::MeanStderr am = column_stats(rows, cfg.reps, 2, 1);

  RunResult r;
  r.report.estimates = {{"distance_mean", dm.mean},
                        {"atoms_in_window_mean", am.mean}};
  r.report.stderrs = {{"distance_mean", dm.se},
                      {"atoms_in_window_mean", am.se}};
  r.report.config_echo = {{"experiment", "bl-distance"},
                          {"n", std::to_string(n)},
                          {"k", std::to_string(k)},
                          {"beta", format_double(beta)},
                          {"R", format_double(R)},
                          {"m", std::to_string(m)},
                          {"pinned", pinned ? "1" : "0"},
                          {"tol", format_double(tol)},
                          {"airy_mode", mode_s},
                          {"reps", std::to_string(cfg.reps)},
                          {"seed", std::to_string(cfg.seed)}};
  r.table.columns = {"rep", "distance", "atoms_in_window"};
  for (long long i = 0; i < cfg.reps; ++i) {
    r.table.rows.push_back({static_cast<double>(i),
                            rows[static_cast<std::size_t>(i) * 2],
                            rows[static_cast<std::size_t>(i) * 2 + 1]});
  }
  return r;
}

// ------------------------------------------------------------------- rate-fn

std::vector<std::pair<double, double>> parse_atoms(const std::string& raw) {
  std::vector<std::pair<double, double>> out;
  std::size_t pos = 0;
  while (pos < raw.size()) {
    std::size_t comma = raw.find(',', pos);
    if (comma == std::string::npos) comma = raw.size();
    const std::string tok = raw.substr(pos, comma - pos);
    const std::size_t colon = tok.find(':');
    if (colon == std::string::npos || tok.find(':', colon + 1) != std::string::npos) {
      throw DomainError(
          "param 'atoms': expected comma-separated pos:weight pairs");
    }
    char* e1 = nullptr;
    char* e2 = nullptr;
    const std::string a = tok.substr(0, colon), b = tok.substr(colon + 1);
    const double x = std::strtod(a.c_str(), &e1);
    const double w = std::strtod(b.c_str(), &e2);
    if (a.empty() || b.empty() || *e1 != '\0' || *e2 != '\0' ||
        !std::isfinite(x) || !std::isfinite(w)) {
      throw DomainError("param 'atoms': malformed pair '" + tok + "'");
    }
    out.emplace_back(x, w);
    pos = comma + 1;
  }
  return out;
}

measures::SignedMeasure atoms_measure(
    std::vector<std::pair<double, double>> atoms, double R0) {
  std::sort(atoms.begin(), atoms.end());
  measures::SignedMeasure m;
  m.lo = -R0 - 1.0;
  m.hi = R0 + 1.0;
  for (const auto& [x, w] : atoms) {
    m.lo = std::min(m.lo, x - 0.5);
    m.hi = std::max(m.hi, x + 0.5);
  }
  m.atoms = std::move(atoms);
  measures::validate(m);
  return m;
}

RunResult run_rate_fn(const ExperimentConfig& cfg, Params& P) {
  const std::string mode = P.str("mode", "psi");
  RunResult r;
  if (mode == "phi-minus") {
    const double z = P.num_req("z");
    P.reject_unknown("rate-fn");
    r.report.estimates = {{"phi_minus", ratefn::phi_minus(z)}};
    r.report.config_echo = {{"experiment", "rate-fn"},
                            {"mode", mode},
                            {"z", format_double(z)},
                            {"reps", std::to_string(cfg.reps)},
                            {"seed", std::to_string(cfg.seed)}};
    return r;
  }
  if (mode != "psi" && mode != "rate-i") {
    throw DomainError("param 'mode': expected phi-minus, psi, or rate-i");
  }
  const std::string atoms_raw = P.str("atoms", "");
  ratefn::RateParams p;
  p.R0 = P.num("r0", 1.0);
  p.R1 = P.num("r1", 10.0);
  p.c_prop22 = P.num("c", 1.0);
  const long long grid = P.integer("grid", 2048);
  P.reject_unknown("rate-fn");
  ratefn::validate(p);
  if (grid < 2) throw DomainError("param 'grid': need grid >= 2");
  const measures::SignedMeasure mu = atoms_measure(parse_atoms(atoms_raw), p.R0);

  r.report.config_echo = {{"experiment", "rate-fn"},
                          {"mode", mode},
                          {"atoms", atoms_raw},
                          {"r0", format_double(p.R0)},
                          {"r1", format_double(p.R1)},
                          {"c", format_double(p.c_prop22)},
                          {"grid", std::to_string(grid)},
                          {"reps", std::to_string(cfg.reps)},
                          {"seed", std::to_string(cfg.seed)}};
  if (mode == "psi") {
    const ratefn::PsiTrace tr =
        ratefn::psi_and_I2(mu, p, static_cast<int>(grid));
    r.report.estimates = {{"i2", tr.i2}};
    r.table.columns = {"x", "psi"};
    for (std::size_t i = 0; i < tr.x.size(); ++i) {
      r.table.rows.push_back({tr.x[i], tr.psi[i]});
    }
  } else {
    r.report.estimates = {{"rate_i", ratefn::rate_I(mu, p)}};
  }
  return r;
}

// ----------------------------------------------------------------------- kpz

RunResult run_kpz(const ExperimentConfig& cfg, Params& P) {
  const bool halfspace = P.flag("halfspace", false);
  const double T = P.num("T", 1e6);
  const long long n = P.integer("n", 512);
  const long long kp = P.integer("k_points", 16);
  if (!(T > 0.0)) throw DomainError("param 'T': need T > 0");
  if (n < 2) throw DomainError("param 'n': need n >= 2");
  if (kp < 1 || kp > n) throw DomainError("param 'k_points': need 1 <= k_points <= n");
  const int ni = static_cast<int>(n), ki = static_cast<int>(kp);

  if (halfspace) {
    // The half-space identity is stated for the beta = 1 spectrum, so the
    // points are always drawn at beta = 1 here.
    const double u = P.num_req("u");
    P.reject_unknown("kpz");
    if (!(u > 0.0)) throw DomainError("param 'u': need u > 0");

    FailureLatch latch;
    std::vector<double> rows;
    mc::run_replica_rows(
        cfg.reps, cfg.seed, cfg.workers, 2,
        [&](long long, Stream& s, double* row) {
          try {
            const tridiag::TridiagonalSym M = tridiag::sample_gbeta(ni, 1.0, s);
            const std::vector<double> pts =
                tridiag::rescale_edge(tridiag::top_k_eigenvalues(M, ki), ni);
            const kpz::LaplaceResult lr =
                kpz::laplace_product_halfspace(pts, u, T, true);
            row[0] = lr.value;
            row[1] = lr.trunc_bound;
          } catch (...) {
            latch.capture();
            row[0] = row[1] = kNan;
          }
        },
        rows);
    latch.rethrow();

    const mc::MeanStderr em = column_stats(rows, cfg.reps, 2, 0);
    double tb_max = 0.0;
    for (long long i = 0; i < cfg.reps; ++i) {
      tb_max = std::max(tb_max, rows[static_cast<std::size_t>(i) * 2 + 1]);
    }
    RunResult r;
    r.report.estimates = {{"estimator_mean", em.mean},
                          {"trunc_bound_max", tb_max}};
    r.report.stderrs = {{"estimator_mean", em.se}};
    r.report.config_echo = {{"experiment", "kpz"},
                            {"halfspace", "1"},
                            {"u", format_double(u)},
                            {"T", format_double(T)},
                            {"n", std::to_string(n)},
                            {"k_points", std::to_string(kp)},
                            {"beta", "1"},
                            {"reps", std::to_string(cfg.reps)},
                            {"seed", std::to_string(cfg.seed)}};
    return r;
  }

  const std::vector<double> s_grid = P.grid("s_grid", "1.5,2,2.5,3");
  const double beta = P.num("beta", 2.0);
  P.reject_unknown("kpz");
  if (s_grid.empty()) throw DomainError("param 's_grid': must be non-empty");
  for (std::size_t i = 1; i < s_grid.size(); ++i) {
    if (!(s_grid[i] > s_grid[i - 1])) {
      throw DomainError("param 's_grid': values must be strictly increasing");
    }
  }
  for (double s : s_grid) {
    if (!(s >= 0.0)) throw DomainError("param 's_grid': need s >= 0");
  }
  if (!(beta > 0.0)) throw DomainError("param 'beta': need beta > 0");

  const int S = static_cast<int>(s_grid.size());
  const int width = 2 * S;
  FailureLatch latch;
  std::vector<double> rows;
  mc::run_replica_rows(
      cfg.reps, cfg.seed, cfg.workers, width,
      [&](long long, Stream& s, double* row) {
        try {
          const tridiag::TridiagonalSym M = tridiag::sample_gbeta(ni, beta, s);
          const std::vector<double> pts =
              tridiag::rescale_edge(tridiag::top_k_eigenvalues(M, ki), ni);
          for (int j = 0; j < S; ++j) {
            row[j] = kpz::laplace_product(pts, s_grid[j], T, true).value;
            row[S + j] = pts[0] <= -s_grid[j] ? 1.0 : 0.0;
          }
        } catch (...) {
          latch.capture();
          for (int j = 0; j < width; ++j) row[j] = kNan;
        }
      },
      rows);
  latch.rethrow();

  RunResult r;
  r.table.columns = {"s",         "estimator_mean", "estimator_se",
                     "indicator_freq", "indicator_se",   "diff_mean",
                     "diff_se",   "log_freq",       "band_lo",
                     "band_hi"};
  double max_z = 0.0;
  bool band_ok = true;
  std::vector<double> diffs(static_cast<std::size_t>(cfg.reps));
  for (int j = 0; j < S; ++j) {
    const mc::MeanStderr em = column_stats(rows, cfg.reps, width, j);
    const long long hits = column_hits(rows, cfg.reps, width, S + j);
    const mc::MeanStderr fr = mc::freq_stderr(hits, cfg.reps);
    for (long long i = 0; i < cfg.reps; ++i) {
      const std::size_t base = static_cast<std::size_t>(i) * width;
      diffs[static_cast<std::size_t>(i)] = rows[base + j] - rows[base + S + j];
    }
    const mc::MeanStderr dm = mc::mean_stderr(diffs);
    double z;
    if (dm.se > 0.0) z = std::fabs(dm.mean) / dm.se;
    else z = dm.mean == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    max_z = std::max(max_z, z);

    const double s3 = s_grid[j] * s_grid[j] * s_grid[j];
    const double band_lo = -s3 / 12.0 - 2.0, band_hi = -s3 / 12.0 + 2.0;
    const double logf = hits > 0
                            ? std::log(fr.mean)
                            : -std::numeric_limits<double>::infinity();
    if (!(logf >= band_lo && logf <= band_hi)) band_ok = false;
    r.table.rows.push_back({s_grid[j], em.mean, em.se, fr.mean, fr.se,
                            dm.mean, dm.se, logf, band_lo, band_hi});
  }
  r.report.estimates = {{"max_sandwich_z", max_z},
                        {"freq_band_ok", band_ok ? 1.0 : 0.0}};
  r.report.config_echo = {{"experiment", "kpz"},
                          {"halfspace", "0"},
                          {"s_grid", join_grid(s_grid)},
                          {"T", format_double(T)},
                          {"n", std::to_string(n)},
                          {"k_points", std::to_string(kp)},
                          {"beta", format_double(beta)},
                          {"reps", std::to_string(cfg.reps)},
                          {"seed", std::to_string(cfg.seed)}};
  return r;
}

// --------------------------------------------------------------------- decay

RunResult run_decay(const ExperimentConfig& cfg, Params& P) {
  const long long n = P.integer("n", 512);
  const double beta = P.num("beta", 2.0);
  const long long i_star_dflt = std::llround(4.0 * std::cbrt(static_cast<double>(n)));
  const long long i_star =
      P.integer("i_star", std::max<long long>(1, std::min<long long>(n - 1, i_star_dflt)));
  const bool refined = P.flag("refined", true);
  const double tol = P.num("tol", 1e-10);
  P.reject_unknown("decay");
  if (n < 4) throw DomainError("param 'n': need n >= 4");
  if (!(beta > 0.0)) throw DomainError("param 'beta': need beta > 0");
  if (i_star < 1 || i_star >= n) {
    throw DomainError("param 'i_star': need 1 <= i_star < n");
  }
  if (!(tol > 0.0)) throw DomainError("param 'tol': need tol > 0");

  const int ni = static_cast<int>(n);
  FailureLatch latch;
  std::vector<double> rows;
  mc::run_replica_rows(
      cfg.reps, cfg.seed, cfg.workers, 3,
      [&](long long, Stream& s, double* row) {
        try {
          const tridiag::TridiagonalSym T = tridiag::sample_gbeta(ni, beta, s);
          const double lam = tridiag::top_k_eigenvalues(T, 1, tol)[0];
          const std::vector<double> phi =
              refined ? tridiag::eigenvector_tail_refined(T, lam)
                      : tridiag::eigenvector(T, lam);
          const tridiag::DecayDiagnostics d =
              tridiag::decay_diagnostics(phi, ni, static_cast<int>(i_star));
          row[0] = d.last_ratio;
          row[1] = d.decay_slope;
          row[2] = d.sign_constant ? 1.0 : 0.0;
        } catch (...) {
          latch.capture();
          row[0] = row[1] = row[2] = kNan;
        }
      },
      rows);
  latch.rethrow();

  long long ratio_ok = 0, sign_ok = 0, slope_ok = 0;
  std::vector<double> slopes;
  for (long long i = 0; i < cfg.reps; ++i) {
    const std::size_t base = static_cast<std::size_t>(i) * 3;
    if (rows[base] <= 9.0 / 8.0) ++ratio_ok;
    if (rows[base + 2] != 0.0) ++sign_ok;
    if (rows[base + 1] <= -1.0 / 12.0) ++slope_ok;
    if (std::isfinite(rows[base + 1])) slopes.push_back(rows[base + 1]);
  }
  const mc::MeanStderr fr = mc::freq_stderr(ratio_ok, cfg.reps);
  const mc::MeanStderr fs = mc::freq_stderr(sign_ok, cfg.reps);
  const mc::MeanStderr fd = mc::freq_stderr(slope_ok, cfg.reps);

  RunResult r;
  r.report.estimates = {{"frac_ratio_ok", fr.mean},
                        {"frac_sign_constant", fs.mean},
                        {"frac_slope_ok", fd.mean}};
  r.report.stderrs = {{"frac_ratio_ok", fr.se},
                      {"frac_sign_constant", fs.se},
                      {"frac_slope_ok", fd.se}};
  if (!slopes.empty()) {
    std::sort(slopes.begin(), slopes.end());
    r.report.estimates.emplace_back("slope_median",
                                    slopes[slopes.size() / 2]);
  }
  r.report.config_echo = {{"experiment", "decay"},
                          {"n", std::to_string(n)},
                          {"beta", format_double(beta)},
                          {"i_star", std::to_string(i_star)},
                          {"refined", refined ? "1" : "0"},
                          {"tol", format_double(tol)},
                          {"reps", std::to_string(cfg.reps)},
                          {"seed", std::to_string(cfg.seed)}};
  r.table.columns = {"rep", "last_ratio", "decay_slope", "sign_constant"};
  for (long long i = 0; i < cfg.reps; ++i) {
    const std::size_t base = static_cast<std::size_t>(i) * 3;
    r.table.rows.push_back({static_cast<double>(i), rows[base], rows[base + 1],
                            rows[base + 2]});
  }
  return r;
}

// -------------------------------------------------- delegated riccati drivers

RunResult run_blowup_times(const ExperimentConfig& cfg, Params& P) {
  const double a = P.num_req("a");
  const double beta = P.num_req("beta");
  P.reject_unknown("blowup-times");
  RunResult r;
  r.report =
      riccati::blowup_time_experiment(a, beta, cfg.reps, cfg.seed, cfg.workers);
  return r;
}

RunResult run_deviation_event(const ExperimentConfig& cfg, Params& P) {
  const double R = P.num_req("R");
  const long long k = P.integer_req("k");
  const double eta = P.num_req("eta");
  const double beta = P.num_req("beta");
  P.reject_unknown("deviation-event");
  RunResult r;
  r.report = riccati::deviation_event_probability(R, k, eta, beta, cfg.reps,
                                                  cfg.seed, cfg.workers);
  return r;
}

}  // namespace

Experiment parse_experiment(const std::string& name) {
  static const std::map<std::string, Experiment> table = {
      {"gbe-sample", Experiment::GbeSample},
      {"sao-simulate", Experiment::SaoSimulate},
      {"tw-tail", Experiment::TwTail},
      {"rigidity", Experiment::Rigidity},
      {"bl-distance", Experiment::BlDistance},
      {"rate-fn", Experiment::RateFn},
      {"kpz", Experiment::Kpz},
      {"decay", Experiment::Decay},
      {"blowup-times", Experiment::BlowupTimes},
      {"deviation-event", Experiment::DeviationEvent},
  };
  auto it = table.find(name);
  if (it == table.end()) throw DomainError("unknown experiment '" + name + "'");
  return it->second;
}

const char* experiment_name(Experiment e) {
  switch (e) {
    case Experiment::GbeSample: return "gbe-sample";
    case Experiment::SaoSimulate: return "sao-simulate";
    case Experiment::TwTail: return "tw-tail";
    case Experiment::Rigidity: return "rigidity";
    case Experiment::BlDistance: return "bl-distance";
    case Experiment::RateFn: return "rate-fn";
    case Experiment::Kpz: return "kpz";
    case Experiment::Decay: return "decay";
    case Experiment::BlowupTimes: return "blowup-times";
    case Experiment::DeviationEvent: return "deviation-event";
  }
  throw DomainError("unknown experiment enum value");
}

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw DomainError("unknown format '" + name + "' (expected csv or json)");
}

RunResult run(const ExperimentConfig& cfg) {
  if (cfg.reps < 1) throw DomainError("reps must be >= 1");
  if (cfg.workers < 1) throw DomainError("workers must be >= 1");
  const auto t0 = std::chrono::steady_clock::now();
  Params P(cfg.params);
  RunResult r;
  switch (cfg.experiment) {
    case Experiment::GbeSample: r = run_gbe(cfg, P); break;
    case Experiment::SaoSimulate: r = run_sao(cfg, P); break;
    case Experiment::TwTail: r = run_tw_tail(cfg, P); break;
    case Experiment::Rigidity: r = run_rigidity(cfg, P); break;
    case Experiment::BlDistance: r = run_bl_distance(cfg, P); break;
    case Experiment::RateFn: r = run_rate_fn(cfg, P); break;
    case Experiment::Kpz: r = run_kpz(cfg, P); break;
    case Experiment::Decay: r = run_decay(cfg, P); break;
    case Experiment::BlowupTimes: r = run_blowup_times(cfg, P); break;
    case Experiment::DeviationEvent: r = run_deviation_event(cfg, P); break;
  }
  r.report.reps = cfg.reps;
  r.report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return r;
}

void write_result(const RunResult& r, OutputFormat f, std::ostream& os) {
  const Table* t = r.table.columns.empty() ? nullptr : &r.table;
  if (f == OutputFormat::Csv) write_csv(r.report, t, os);
  else write_json(r.report, t, os);
}

void run_to_output(const ExperimentConfig& cfg) {
  const RunResult r = run(cfg);
  if (cfg.out_path == "-") {
    write_result(r, cfg.format, std::cout);
    std::cout.flush();
    if (!std::cout) throw IoError("failed writing to standard output");
    return;
  }
  std::ofstream os(cfg.out_path, std::ios::binary);
  if (!os) throw IoError("cannot open output file: " + cfg.out_path);
  write_result(r, cfg.format, os);
  os.flush();
  if (!os) throw IoError("failed writing output file: " + cfg.out_path);
}

// ---------------------------------------------------------------------------
// Command-line front end
// ---------------------------------------------------------------------------

namespace {

std::string flag_for_key(const std::string& key) {
  std::string f = "--";
  for (char c : key) f.push_back(c == '_' ? '-' : c);
  return f;
}

std::uint64_t parse_cli_u64(const std::string& what, const std::string& s) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE ||
      s.find('-') != std::string::npos) {
    throw DomainError(what + " must be a non-negative integer, got '" + s +
                      "'");
  }
  return static_cast<std::uint64_t>(v);
}

long long parse_cli_ll(const std::string& what, const std::string& s) {
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
    throw DomainError(what + " must be an integer, got '" + s + "'");
  }
  return v;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  // Flag tables: set_to == nullptr means the option takes a value that lands
  // in params[key]; otherwise it is a bare flag that stores the given literal.
  struct P {
    const char* flag;
    const char* key;
    const char* desc;
    const char* set_to;
  };
  struct S {
    Experiment exp;
    const char* desc;
    std::vector<P> params;
  };
  const std::vector<S> subs = {
      {Experiment::GbeSample,
       "sample tridiagonal Gaussian beta ensembles and rescale the top edge",
       {{"--n", "n", "matrix size (required)", nullptr},
        {"--beta", "beta", "inverse temperature > 0 (required)", nullptr},
        {"--k", "k", "top eigenvalues per replica (default min(n,8))",
         nullptr},
        {"--tol", "tol", "eigenvalue bisection tolerance (default 1e-10)",
         nullptr}}},
      {Experiment::SaoSimulate,
       "count blow-ups of the Riccati diffusion at a fixed level",
       {{"--lambda", "lambda", "spectral level (required)", nullptr},
        {"--beta", "beta", "inverse temperature > 0 (required)", nullptr}}},
      {Experiment::TwTail,
       "left-tail frequencies of the rescaled top eigenvalue on an s grid",
       {{"--beta", "beta", "inverse temperature > 0 (required)", nullptr},
        {"--n", "n", "matrix size (required)", nullptr},
        {"--s-grid", "s_grid",
         "comma-separated strictly increasing s values (default "
         "2,2.5,3,3.5)",
         nullptr}}},
      {Experiment::Rigidity,
       "rigidity violation frequency against classical locations",
       {{"--n", "n", "matrix size (required)", nullptr},
        {"--beta", "beta", "inverse temperature (default 2)", nullptr},
        {"--a", "a", "window exponent in (0,1] (required)", nullptr}}},
      {Experiment::BlDistance,
       "bounded-Lipschitz distance between the edge counting measure and "
       "the Airy reference",
       {{"--n", "n", "matrix size (required)", nullptr},
        {"--k", "k", "edge depth (required)", nullptr},
        {"--beta", "beta", "inverse temperature (default 2)", nullptr},
        {"--R", "R", "window half-width (default 2)", nullptr},
        {"--m", "m", "lattice panel count (default 1024)", nullptr},
        {"--pinned", "pinned", "pin test functions at the window edge", "1"},
        {"--tol", "tol", "eigenvalue tolerance (default 1e-10)", nullptr},
        {"--airy-mode", "airy_mode",
         "reference zeros: asymptotic or exact (default asymptotic)",
         nullptr}}},
      {Experiment::RateFn,
       "rate-function evaluation: psi tables, the measure functional, or "
       "the closed-form left tail",
       {{"--mode", "mode", "psi, rate-i, or phi-minus", nullptr},
        {"--psi", "mode", "shorthand for --mode psi", "psi"},
        {"--rate-i", "mode", "shorthand for --mode rate-i", "rate-i"},
        {"--phi-minus", "mode", "shorthand for --mode phi-minus",
         "phi-minus"},
        {"--z", "z", "argument of the closed-form tail (phi-minus)", nullptr},
        {"--atoms", "atoms", "comma-separated pos:weight atoms", nullptr},
        {"--r0", "r0", "representation radius (default 1)", nullptr},
        {"--r1", "r1", "confinement radius (default 10)", nullptr},
        {"--c", "c", "proportionality constant (default 1)", nullptr},
        {"--grid", "grid", "psi grid size (default 2048)", nullptr}}},
      {Experiment::Kpz,
       "KPZ lower-tail estimator sandwich, or half-space Laplace products",
       {{"--halfspace", "halfspace", "half-space variant (forces beta = 1)",
         "1"},
        {"--u", "u", "half-space boundary parameter (required with "
                     "--halfspace)",
         nullptr},
        {"--s-grid", "s_grid",
         "comma-separated s values, full-space only (default 1.5,2,2.5,3)",
         nullptr},
        {"--T", "T", "time horizon (default 1e6)", nullptr},
        {"--n", "n", "matrix size (default 512)", nullptr},
        {"--k-points", "k_points", "spectral points per product (default 16)",
         nullptr},
        {"--beta", "beta", "inverse temperature, full-space only (default 2)",
         nullptr}}},
      {Experiment::Decay,
       "top-eigenvector decay diagnostics",
       {{"--n", "n", "matrix size (default 512)", nullptr},
        {"--beta", "beta", "inverse temperature (default 2)", nullptr},
        {"--i-star", "i_star", "decay onset index (default 4 n^(1/3))",
         nullptr},
        {"--refined", "refined", "backward-recurrence tail refinement (on by "
                                 "default)",
         "1"},
        {"--no-refined", "refined", "disable tail refinement", "0"},
        {"--tol", "tol", "eigenvalue tolerance (default 1e-10)", nullptr}}},
      {Experiment::BlowupTimes,
       "first blow-up time statistics for the frozen-level diffusion",
       {{"--a", "a", "drift depth (required)", nullptr},
        {"--beta", "beta", "inverse temperature > 0 (required)", nullptr}}},
      {Experiment::DeviationEvent,
       "frequency of the k-fold deviation event at depth R",
       {{"--R", "R", "deviation depth (required)", nullptr},
        {"--k", "k", "eigenvalue count (required)", nullptr},
        {"--eta", "eta", "level offset > 0 (required)", nullptr},
        {"--beta", "beta", "inverse temperature > 0 (required)", nullptr}}},
  };

  CLI::App app{"Monte Carlo laboratory for random-matrix spectral edges"};
  app.require_subcommand(1);

  struct Cap {
    std::string key;
    const std::string* value;  // nullptr for bare flags
    const char* fixed;
    CLI::Option* opt;
  };
  struct Wire {
    Experiment exp{};
    CLI::App* sub = nullptr;
    std::vector<Cap> caps;
    std::string seed, reps, workers, out, format, config;
    CLI::Option *o_seed = nullptr, *o_reps = nullptr, *o_workers = nullptr,
                *o_out = nullptr, *o_format = nullptr, *o_config = nullptr;
  };

  std::deque<std::string> store;  // stable addresses for option targets
  std::deque<Wire> wires;
  for (const auto& s : subs) {
    wires.emplace_back();
    Wire& w = wires.back();
    w.exp = s.exp;
    w.sub = app.add_subcommand(experiment_name(s.exp), s.desc);
    for (const auto& p : s.params) {
      Cap c;
      c.key = p.key;
      c.fixed = p.set_to;
      if (p.set_to == nullptr) {
        store.emplace_back();
        c.value = &store.back();
        c.opt = w.sub->add_option(p.flag, store.back(), p.desc);
      } else {
        c.value = nullptr;
        c.opt = w.sub->add_flag(p.flag, p.desc);
      }
      w.caps.push_back(c);
    }
    // Flags sharing one params key (mode shorthands, refined on/off) are
    // mutually exclusive.
    for (size_t i = 0; i < w.caps.size(); ++i) {
      for (size_t j = i + 1; j < w.caps.size(); ++j) {
        if (w.caps[i].key == w.caps[j].key) {
          w.caps[i].opt->excludes(w.caps[j].opt);
        }
      }
    }
    w.o_seed = w.sub->add_option("--seed", w.seed, "master seed (default 0)");
    w.o_reps =
        w.sub->add_option("--reps", w.reps, "Monte Carlo replicas (default 1)");
    w.o_workers = w.sub->add_option(
        "--workers", w.workers,
        "worker threads; output does not depend on this (default 1)");
    w.o_out = w.sub->add_option("--out", w.out,
                                "output path, '-' for stdout (default -)");
    w.o_format =
        w.sub->add_option("--format", w.format, "csv or json (default csv)");
    w.o_config = w.sub->add_option("--config", w.config,
                                   "key = value file; command-line flags "
                                   "override its entries");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const Wire* active = nullptr;
  for (const auto& w : wires) {
    if (w.sub->parsed()) {
      active = &w;
      break;
    }
  }
  if (active == nullptr) {
    std::cerr << "usage error: no subcommand selected\n";
    return 2;
  }

  try {
    ExperimentConfig cfg;
    cfg.experiment = active->exp;
    if (active->o_config->count() > 0) {
      std::ifstream is(active->config);
      if (!is) throw IoError("cannot open config file: " + active->config);
      for (const auto& [k, v] : parse_kv_file(is)) {
        if (k == "experiment") {
          const std::string want = experiment_name(cfg.experiment);
          if (v != want) {
            throw DomainError("config file sets experiment = " + v +
                              " but the subcommand is " + want);
          }
        } else if (k == "seed") {
          cfg.seed = parse_cli_u64("seed", v);
        } else if (k == "reps") {
          cfg.reps = parse_cli_ll("reps", v);
        } else if (k == "workers") {
          cfg.workers = static_cast<int>(parse_cli_ll("workers", v));
        } else if (k == "out") {
          cfg.out_path = v;
        } else if (k == "format") {
          cfg.format = parse_format(v);
        } else {
          cfg.params[k] = v;
        }
      }
    }
    for (const auto& c : active->caps) {
      if (c.opt->count() == 0) continue;
      cfg.params[c.key] = (c.value != nullptr) ? *c.value : c.fixed;
    }
    if (active->o_seed->count() > 0)
      cfg.seed = parse_cli_u64("--seed", active->seed);
    if (active->o_reps->count() > 0)
      cfg.reps = parse_cli_ll("--reps", active->reps);
    if (active->o_workers->count() > 0)
      cfg.workers = static_cast<int>(parse_cli_ll("--workers", active->workers));
    if (active->o_out->count() > 0) cfg.out_path = active->out;
    if (active->o_format->count() > 0) cfg.format = parse_format(active->format);
    run_to_output(cfg);
    return 0;
  } catch (const DomainError& e) {
    const std::string msg = e.what();
    std::cerr << "usage error: " << msg;
    if (msg.find(" is required") != std::string::npos) {
      const std::string pat = "param '";
      const auto p = msg.find(pat);
      if (p != std::string::npos) {
        const auto start = p + pat.size();
        const auto q = msg.find('\'', start);
        if (q != std::string::npos) {
          std::cerr << " (flag " << flag_for_key(msg.substr(start, q - start))
                    << ")";
        }
      }
    }
    std::cerr << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace airylab::harness
