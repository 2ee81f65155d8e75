#include "airylab/mc.hpp"

#include <cmath>

namespace airylab::mc {

MeanStderr mean_stderr(const std::vector<double>& xs) {
  MeanStderr r;
  const size_t n = xs.size();
  if (n == 0) return r;
  Kahan s;
  for (double x : xs) s.add(x);
  r.mean = s.sum() / static_cast<double>(n);
  if (n == 1) return r;
  Kahan q;
  for (double x : xs) q.add((x - r.mean) * (x - r.mean));
  r.se = std::sqrt(q.sum() / (static_cast<double>(n - 1) * n));
  return r;
}

MeanStderr freq_stderr(long long hits, long long reps) {
  MeanStderr r;
  if (reps <= 0) return r;
  const double f = static_cast<double>(hits) / reps;
  r.mean = f;
  r.se = std::sqrt(f * (1.0 - f) / reps);
  return r;
}

}  // namespace airylab::mc
