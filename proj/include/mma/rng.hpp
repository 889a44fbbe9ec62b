// Deterministic, splittable random streams for Monte Carlo trials.
//
// Every stochastic operation in the simulator takes an explicit RandomStream.
// Streams are derived from (base seed, trial index, lane index) so that
// independent trials and independent uses inside a trial never share state,
// and a rerun with the same seeds is bit-identical.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace mma {

// SplitMix64 step; used to whiten and combine seed words.
std::uint64_t splitmix64(std::uint64_t x);

// Order-sensitive combination of two seed words.
std::uint64_t seed_combine(std::uint64_t a, std::uint64_t b);

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed)
      : engine_(splitmix64(seed)), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  // Child stream with an independent state; salt distinguishes siblings.
  RandomStream split(std::uint64_t salt) const {
    return RandomStream(seed_combine(seed_, salt));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  std::uint64_t uniform_int(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  int bit() { return static_cast<int>(next_u64() >> 63); }

  // Standard normal via Box-Muller (pair cached).
  double gaussian();

  double gaussian(double mean, double stddev) {
    return mean + stddev * gaussian();
  }

  // Poisson count by accumulating exponential inter-arrival times.
  // O(lambda) per draw but stable for any lambda.
  long poisson(double lambda);

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  bool have_cached_gaussian_ = false;
  double cached_gaussian_ = 0.0;
};

// Stream for (base, trial, lane). Lanes separate independent uses inside one
// trial (arrival draws, channel noise, code graphs, ...).
RandomStream seed_stream(std::uint64_t base, std::uint64_t trial,
                         std::uint64_t lane);

// Code-graph seed shared by a device and the BS: both sides derive it from
// the device's preamble index and timing index, so they build the same
// generator matrix without any extra signalling.
std::uint64_t device_graph_seed(std::uint64_t frame_seed, int preamble_index,
                                int timing_index);

}  // namespace mma
