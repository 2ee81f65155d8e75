#pragma once

#include <cstdint>
#include <vector>

#include <omp.h>

#include "airylab/rng.hpp"

namespace airylab::mc {

// Kahan-compensated running sum.
struct Kahan {
  double s = 0.0;
  double c = 0.0;
  void add(double x) {
    const double y = x - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  double sum() const { return s; }
};

struct MeanStderr {
  double mean = 0.0;
  double se = 0.0;
};

// Kahan mean and sample-std/sqrt(n), accumulated in index order.
MeanStderr mean_stderr(const std::vector<double>& xs);

// Frequency of a 0/1 sample with binomial standard error.
MeanStderr freq_stderr(long long hits, long long reps);

inline int resolve_workers(int workers) {
  return workers > 0 ? workers : omp_get_max_threads();
}

// Replica map: out[i] = f(i, stream_i) where stream_i is keyed by
// (seed, i). Results land at fixed indices, so any downstream aggregation
// done in index order is independent of the worker count.
template <class F>
void run_replicas(long long reps, std::uint64_t seed, int workers, F&& f,
                  std::vector<double>& out) {
  out.assign(static_cast<size_t>(reps), 0.0);
  const int nw = resolve_workers(workers);
#pragma omp parallel for schedule(dynamic, 16) num_threads(nw)
  for (long long i = 0; i < reps; ++i) {
    Stream s(seed, static_cast<std::uint64_t>(i));
    out[static_cast<size_t>(i)] = f(i, s);
  }
}

// Serial reference with identical stream discipline and output layout.
template <class F>
void run_replicas_serial(long long reps, std::uint64_t seed, F&& f,
                         std::vector<double>& out) {
  out.assign(static_cast<size_t>(reps), 0.0);
  for (long long i = 0; i < reps; ++i) {
    Stream s(seed, static_cast<std::uint64_t>(i));
    out[static_cast<size_t>(i)] = f(i, s);
  }
}

// Row-valued replicas: f fills out[i*width .. i*width+width).
template <class F>
void run_replica_rows(long long reps, std::uint64_t seed, int workers,
                      int width, F&& f, std::vector<double>& out) {
  out.assign(static_cast<size_t>(reps) * width, 0.0);
  const int nw = resolve_workers(workers);
#pragma omp parallel for schedule(dynamic, 16) num_threads(nw)
  for (long long i = 0; i < reps; ++i) {
    Stream s(seed, static_cast<std::uint64_t>(i));
    f(i, s, &out[static_cast<size_t>(i) * width]);
  }
}

template <class F>
void run_replica_rows_serial(long long reps, std::uint64_t seed, int width,
                             F&& f, std::vector<double>& out) {
  out.assign(static_cast<size_t>(reps) * width, 0.0);
  for (long long i = 0; i < reps; ++i) {
    Stream s(seed, static_cast<std::uint64_t>(i));
    f(i, s, &out[static_cast<size_t>(i) * width]);
  }
}

}  // namespace airylab::mc
