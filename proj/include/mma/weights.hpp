// Weight coefficient designs for the superposed data phase (equal,
// exponential, grouped), the adaptive per-device power rule, layered BPSK
// superposition, and per-layer effective SNR accounting.
#pragma once

#include <string>
#include <vector>

#include "mma/rng.hpp"

namespace mma {

enum class WeightDesign { equal, exponential, exponential_random, grouped };

// Amplitudes in decoding order (largest first).
//
// noise_variance is fixed by the designed total SNR (sigma_z^2 = 1/gamma
// with unit total receive power).  total_snr is the realized ratio
// sum(w^2) / sigma_z^2; it equals the designed gamma for the deterministic
// designs, and deviates for random coefficient assignment, where the
// realized receive power is not exactly 1.
struct WeightProfile {
  WeightDesign design = WeightDesign::equal;
  std::vector<double> weights;      // per device, non-increasing
  std::vector<int> multiplicities;  // devices per distinct weight
  double target_snr = 0.0;          // gamma_0
  double total_snr = 0.0;           // gamma (realized)
  double noise_variance = 0.0;      // sigma_z^2

  int num_devices() const { return static_cast<int>(weights.size()); }
  double sum_power() const;
};

// All devices use w = 1/sqrt(L).
WeightProfile eqw_profile(int num_devices, double total_snr);

// Exponentially spaced weights giving every layer the same effective SNR
// gamma_0; the total SNR is (1+gamma_0)^L - 1.
WeightProfile exw_optimal_weights(int num_devices, double target_snr);

// Each device picks uniformly among the L optimal coefficients; the profile
// lists the realized multiplicities in descending weight order.
WeightProfile exw_random_assignment(int num_devices, double target_snr,
                                    RandomStream& rng);

// Max-min design over groups sharing one coefficient: the first-decoded
// device of every nonempty group gets effective SNR exactly gamma_0.
// Requires gamma_0 * (max group size - 1) < 1.  Groups are decoded in the
// given order; by default callers pass sizes ascending (larger groups
// decoded later).
WeightProfile grw_profile(const std::vector<int>& group_counts,
                          double target_snr);

// grw_profile after sorting group sizes ascending, the simplification used
// throughout the analysis.
WeightProfile grw_profile_sorted(std::vector<int> group_counts,
                                 double target_snr);

// Exhaustive permutation search over group orderings (feasible for <= 8
// nonempty groups); returns the ordering with the smallest total SNR.  The
// closed form makes the total order-invariant, so this is a verification
// hook more than an optimizer.
WeightProfile grw_profile_best_order(std::vector<int> group_counts,
                                     double target_snr);

// gamma_0 = min{ (1+gamma_max)^(1/L) - 1, gamma_0_max }.
double adaptive_target_snr(long num_devices, double max_total_snr,
                           double max_target_snr);

// gamma_i = w_i^2 / (sum_{j>i} w_j^2 + sigma_z^2) per decoding position.
std::vector<double> effective_snrs(const WeightProfile& profile);

double min_effective_snr(const WeightProfile& profile);

// y[t] = sum_i w_i x_i[t] + z[t].
struct LayeredFrame {
  std::vector<std::vector<double>> device_symbols;  // +-1 per device
  std::vector<double> superposed;
  WeightProfile profile;
};

LayeredFrame superpose(const std::vector<std::vector<double>>& device_symbols,
                       const WeightProfile& profile, RandomStream& rng);

// One CSV row per device: design, position, weight, multiplicity index,
// effective SNR.
std::string profile_to_csv(const WeightProfile& profile);

}  // namespace mma
