#pragma once

#include <cstdint>

namespace airylab {

// SplitMix64 finalizer.  Cheap, passes the usual statistical batteries, and
// stateless: the same mix keys replica substreams off the master seed, so a
// replica's draws never depend on scheduling or worker count.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Counter-based stream keyed by (seed, replica, substream).  All randomness
// in the library flows through these; no wall-clock entropy anywhere.
class Stream {
 public:
  explicit Stream(std::uint64_t seed, std::uint64_t replica = 0,
                  std::uint64_t substream = 0) {
    std::uint64_t k = mix64(seed + 0x9e3779b97f4a7c15ull);
    k = mix64(k ^ (replica * 0xbf58476d1ce4e5b9ull + 0x94d049bb133111ebull));
    k = mix64(k ^ (substream * 0x94d049bb133111ebull + 0xbf58476d1ce4e5b9ull));
    state_ = k;
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix64(state_);
  }

  // Uniform on the open interval (0,1); never returns an exact endpoint.
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
  }

  // Standard normal via the inverse CDF: exactly one uniform per draw, which
  // keeps coupled simulations aligned draw-for-draw.
  double normal();

  // Gamma(alpha, 1), Marsaglia-Tsang squeeze with the alpha<1 boost.
  double gamma(double alpha);

  // chi_k = sqrt(2 * Gamma(k/2)).
  double chi(double k);

 private:
  std::uint64_t state_;
};

// Inverse standard normal CDF, |error| < 1e-15 over (0,1).
double inv_normal_cdf(double p);

}  // namespace airylab
