// Compares the OpenMP replica engine against the serial reference on the two
// kernels that dominate every experiment: Gaussian beta-ensemble top-edge
// extraction and Riccati blow-up counting. Also verifies that both paths
// produce bit-identical output, which is the property the test suite and the
// reproducibility guarantee lean on.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "airylab/mc.hpp"
#include "airylab/riccati.hpp"
#include "airylab/rng.hpp"
#include "airylab/tridiag.hpp"

namespace {

using airylab::Stream;

double now_s() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

struct Timing {
  double serial_s = 0;
  double parallel_s = 0;
  bool identical = false;
};

template <class F>
Timing time_kernel(long long reps, std::uint64_t seed, int workers, F&& f) {
  std::vector<double> ref, par;
  // Warm-up pass so first-touch allocation does not bias the serial leg.
  airylab::mc::run_replicas_serial(std::min<long long>(reps, 8), seed, f, ref);

  Timing t;
  double t0 = now_s();
  airylab::mc::run_replicas_serial(reps, seed, f, ref);
  t.serial_s = now_s() - t0;

  t0 = now_s();
  airylab::mc::run_replicas(reps, seed, workers, f, par);
  t.parallel_s = now_s() - t0;

  t.identical = ref.size() == par.size() &&
                std::memcmp(ref.data(), par.data(),
                            ref.size() * sizeof(double)) == 0;
  return t;
}

void report(const char* name, long long reps, int workers, const Timing& t) {
  std::printf("%-14s reps=%-7lld serial %8.3f s   omp(%d) %8.3f s   "
              "speedup %5.2fx   bit-identical: %s\n",
              name, reps, t.serial_s, workers, t.parallel_s,
              t.parallel_s > 0 ? t.serial_s / t.parallel_s : 0.0,
              t.identical ? "yes" : "NO");
}

}  // namespace

int main(int argc, char** argv) {
  long long reps = 2000;
  int n = 256;
  int workers = 0;  // 0: all hardware threads
  std::uint64_t seed = 42;

  CLI::App app{"serial vs OpenMP benchmark for the replica kernels"};
  app.add_option("--reps", reps, "replicas per kernel (default 2000)");
  app.add_option("--n", n, "matrix size for the ensemble kernel (default 256)");
  app.add_option("--workers", workers,
                 "worker threads, 0 = all available (default 0)");
  app.add_option("--seed", seed, "master seed (default 42)");
  CLI11_PARSE(app, argc, argv);

  const int nw = airylab::mc::resolve_workers(workers);
  std::printf("replica kernels, %d worker thread(s) for the parallel leg\n",
              nw);

  const Timing gbe = time_kernel(
      reps, seed, workers, [n](long long, Stream& s) {
        const auto T = airylab::tridiag::sample_gbeta(n, 2.0, s);
        const auto top = airylab::tridiag::top_k_eigenvalues(T, 1);
        return airylab::tridiag::rescale_edge(top, n)[0];
      });
  report("gbe-top1", reps, nw, gbe);

  const Timing ric = time_kernel(
      reps, seed + 1, workers, [](long long, Stream& s) {
        return static_cast<double>(airylab::riccati::count_below(3.0, 2.0, s));
      });
  report("riccati-count", reps, nw, ric);

  const bool ok = gbe.identical && ric.identical;
  if (!ok) std::printf("MISMATCH between serial and parallel outputs\n");
  return ok ? 0 : 1;
}
