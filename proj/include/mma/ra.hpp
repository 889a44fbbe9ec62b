// Contention-based random access phase: Poisson arrivals, preamble and
// timing-group assignment, composite PRACH synthesis, and the iterative
// correlate-and-subtract load estimator.
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "mma/rng.hpp"
#include "mma/zc.hpp"

namespace mma {

// LTE basic time unit.
constexpr double kBasicTimeUnitSeconds = 32.552e-9;
constexpr double kLightSpeed = 3.0e8;

// Cell partitioning into rings of equal quantized propagation delay.
// Ring l covers distances r with (l-1)*c*tau < r < l*c*tau.
struct CellGeometry {
  double radius_m = 1500.0;
  double delay_quantum_s = 8.0 * kBasicTimeUnitSeconds;

  int timing_groups() const {
    double d = kLightSpeed * delay_quantum_s;
    return static_cast<int>(std::ceil(radius_m / d));
  }
  double ring_width_m() const { return kLightSpeed * delay_quantum_s; }

  // Timing group of a device at distance r, clamped to [1, N_t].
  int group_of_distance(double r) const;

  // Draw a distance for a position uniform over the disk.
  double sample_distance(RandomStream& rng) const;
};

// Counts n(i, j) of devices per (preamble, timing group) cell.
struct LoadMatrix {
  int num_preambles = 0;
  int num_timing_groups = 0;
  std::vector<int> counts;  // row-major, preamble-major

  LoadMatrix() = default;
  LoadMatrix(int n_s, int n_t)
      : num_preambles(n_s),
        num_timing_groups(n_t),
        counts(static_cast<std::size_t>(n_s) * n_t, 0) {}

  int& at(int preamble, int delay_index) {
    return counts[static_cast<std::size_t>(preamble) * num_timing_groups +
                  delay_index - 1];
  }
  int at(int preamble, int delay_index) const {
    return counts[static_cast<std::size_t>(preamble) * num_timing_groups +
                  delay_index - 1];
  }
  long total() const;
};

struct PrachObservation {
  std::vector<cplx> samples;
  double noise_variance = 1.0;    // sigma_z^2, total per complex sample
  double per_device_power = 1.0;  // P0 after power control
};

// Number of devices with data to send in one frame.
long sample_arrivals(double lambda, RandomStream& rng);

// Each device picks a preamble uniformly and falls in the timing group of
// its (uniform over the disk) position.
LoadMatrix assign_devices(long num_devices, int num_preambles,
                          const CellGeometry& geometry, RandomStream& rng);

// Y = sum_{i,j} n(i,j) P_{i,j} + Z with Z circular complex Gaussian.
PrachObservation synthesize_prach(const LoadMatrix& load,
                                  const PreambleBank& bank,
                                  double noise_variance, RandomStream& rng);

enum class CorrelationGate {
  // Test Re<Y, P> > threshold.  Received preambles are phase-aligned (power
  // control), and the real part cannot re-trigger after subtraction.
  coherent,
  // Test |<Y, P>| > threshold, as printed in the reference algorithm.
  magnitude,
};

struct LoadEstimatorConfig {
  // Correlation gate; default 0.75 * N_zc * sqrt(P0) scaled at run time.
  double correlation_threshold_scale = 0.75;
  // Once a full sweep detects nothing, drop the gate to this scale and keep
  // sweeping: devices masked by cross-root interference early on stand
  // clear of the lowered gate after the bulk has been subtracted.  Set to 0
  // to disable the cleanup phase.
  double cleanup_threshold_scale = 0.55;
  // Residual-energy gate: stop once ||Y||^2 <= N_zc * sigma_z^2 * margin.
  double energy_margin = 1.1;
  int max_passes = 50;
  CorrelationGate gate = CorrelationGate::coherent;
};

struct LoadEstimate {
  LoadMatrix counts;
  int passes = 0;
  bool hit_pass_cap = false;
  double residual_energy = 0.0;
};

// Iterative load estimation: while the residual energy is above the gate,
// sweep every (preamble, delay) cell; each time a correlation clears the
// threshold, count one device and subtract one copy of that preamble.
LoadEstimate estimate_load(const PrachObservation& obs,
                           const PreambleBank& bank,
                           const LoadEstimatorConfig& config = {});

// Signed relative error of the estimated totals; +inf when truth is empty
// but the estimate is not.
double estimation_accuracy(const LoadMatrix& estimate,
                           const LoadMatrix& truth);

}  // namespace mma
