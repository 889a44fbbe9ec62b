#include "mma/rng.hpp"

#include <cmath>

namespace mma {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t seed_combine(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ (splitmix64(b) + 0x9E3779B97F4A7C15ull + (a << 6) +
                         (a >> 2)));
}

double RandomStream::gaussian() {
  if (have_cached_gaussian_) {
    have_cached_gaussian_ = false;
    return cached_gaussian_;
  }
  // Box-Muller; u1 in (0,1] so the log is finite.
  double u1 = 1.0 - uniform();
  double u2 = uniform();
  double radius = std::sqrt(-2.0 * std::log(u1));
  double angle = 6.283185307179586476925286766559 * u2;
  cached_gaussian_ = radius * std::sin(angle);
  have_cached_gaussian_ = true;
  return radius * std::cos(angle);
}

long RandomStream::poisson(double lambda) {
  if (lambda <= 0.0) return 0;
  double t = 0.0;
  long count = -1;
  while (t <= lambda) {
    t += -std::log(1.0 - uniform());
    ++count;
  }
  return count;
}

RandomStream seed_stream(std::uint64_t base, std::uint64_t trial,
                         std::uint64_t lane) {
  return RandomStream(seed_combine(seed_combine(base, trial), lane));
}

std::uint64_t device_graph_seed(std::uint64_t frame_seed, int preamble_index,
                                int timing_index) {
  return seed_combine(
      seed_combine(frame_seed, static_cast<std::uint64_t>(preamble_index)),
      static_cast<std::uint64_t>(timing_index));
}

}  // namespace mma
