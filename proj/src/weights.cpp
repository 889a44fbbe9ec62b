#include "mma/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mma {

double WeightProfile::sum_power() const {
  double s = 0.0;
  for (double w : weights) s += w * w;
  return s;
}

WeightProfile eqw_profile(int num_devices, double total_snr) {
  if (num_devices < 1) throw std::invalid_argument("eqw: L < 1");
  if (total_snr <= 0.0) throw std::invalid_argument("eqw: gamma <= 0");
  WeightProfile p;
  p.design = WeightDesign::equal;
  p.noise_variance = 1.0 / total_snr;
  p.total_snr = total_snr;
  double w = 1.0 / std::sqrt(static_cast<double>(num_devices));
  p.weights.assign(num_devices, w);
  p.multiplicities.assign(1, num_devices);
  // Every layer shares the worst (first-decoded) SNR as its design target.
  p.target_snr =
      1.0 / (num_devices - 1 + num_devices * p.noise_variance);
  return p;
}

WeightProfile exw_optimal_weights(int num_devices, double target_snr) {
  if (num_devices < 1) throw std::invalid_argument("exw: L < 1");
  if (target_snr <= 0.0) throw std::invalid_argument("exw: gamma_0 <= 0");
  WeightProfile p;
  p.design = WeightDesign::exponential;
  p.target_snr = target_snr;
  p.total_snr = std::pow(1.0 + target_snr, num_devices) - 1.0;
  p.noise_variance = 1.0 / p.total_snr;
  p.weights.resize(num_devices);
  p.multiplicities.assign(num_devices, 1);
  for (int i = 0; i < num_devices; ++i) {
    // w_{L-i} = sqrt((1+g0)^i * g0 / gamma); position L-i in decoding
    // order corresponds to index L-i-1, so position idx gets exponent
    // (L-1-idx).
    double expo = static_cast<double>(num_devices - 1 - i);
    p.weights[i] = std::sqrt(std::pow(1.0 + target_snr, expo) * target_snr /
                             p.total_snr);
  }
  return p;
}

WeightProfile exw_random_assignment(int num_devices, double target_snr,
                                    RandomStream& rng) {
  WeightProfile optimal = exw_optimal_weights(num_devices, target_snr);
  std::vector<int> counts(num_devices, 0);
  for (int d = 0; d < num_devices; ++d) {
    ++counts[static_cast<int>(rng.uniform_int(num_devices))];
  }
  WeightProfile p;
  p.design = WeightDesign::exponential_random;
  p.target_snr = target_snr;
  p.noise_variance = optimal.noise_variance;
  for (int slot = 0; slot < num_devices; ++slot) {
    if (counts[slot] == 0) continue;
    p.multiplicities.push_back(counts[slot]);
    for (int c = 0; c < counts[slot]; ++c) {
      p.weights.push_back(optimal.weights[slot]);
    }
  }
  // Realized receive power is not exactly 1, so the realized total SNR
  // deviates from the designed (1+g0)^L - 1.
  p.total_snr = p.sum_power() / p.noise_variance;
  return p;
}

WeightProfile grw_profile(const std::vector<int>& group_counts,
                          double target_snr) {
  if (target_snr <= 0.0) throw std::invalid_argument("grw: gamma_0 <= 0");
  std::vector<int> counts;
  for (int r : group_counts) {
    if (r < 0) throw std::invalid_argument("grw: negative group count");
    if (r > 0) counts.push_back(r);
  }
  if (counts.empty()) throw std::invalid_argument("grw: no devices");
  for (int r : counts) {
    if (target_snr * (r - 1) >= 1.0) {
      throw std::invalid_argument(
          "grw: infeasible target, gamma_0 * (group size - 1) >= 1");
    }
  }

  const int num_groups = static_cast<int>(counts.size());
  // Power recursion from the last-decoded group.  T_i is the total power
  // still superposed when group i starts decoding (its own power included)
  // plus noise; the first device of group i then sees
  //   gamma_i = w_i^2 / (T_i - w_i^2) = gamma_0,
  // giving w_i^2 = gamma_0 T_i / (1+gamma_0) and
  //   T_i = T_{i+1} (1+gamma_0) / (1 - gamma_0 (r_i - 1)).
  // Anchoring T_{G+1} = sigma_z^2 and requiring sum r w^2 = 1 yields the
  // closed-form total SNR below.
  double gamma = std::pow(1.0 + target_snr, num_groups);
  for (int r : counts) gamma /= 1.0 - target_snr * (r - 1);
  gamma -= 1.0;

  WeightProfile p;
  p.design = WeightDesign::grouped;
  p.target_snr = target_snr;
  p.total_snr = gamma;
  p.noise_variance = 1.0 / gamma;
  p.multiplicities = counts;

  std::vector<double> w2(num_groups);
  double t_next = p.noise_variance;
  for (int i = num_groups - 1; i >= 0; --i) {
    double t_i = t_next * (1.0 + target_snr) /
                 (1.0 - target_snr * (counts[i] - 1));
    w2[i] = target_snr * t_i / (1.0 + target_snr);
    t_next = t_i;
  }
  for (int i = 0; i < num_groups; ++i) {
    double w = std::sqrt(w2[i]);
    for (int c = 0; c < counts[i]; ++c) p.weights.push_back(w);
  }
  return p;
}

WeightProfile grw_profile_sorted(std::vector<int> group_counts,
                                 double target_snr) {
  std::sort(group_counts.begin(), group_counts.end());
  return grw_profile(group_counts, target_snr);
}

WeightProfile grw_profile_best_order(std::vector<int> group_counts,
                                     double target_snr) {
  std::vector<int> counts;
  for (int r : group_counts)
    if (r > 0) counts.push_back(r);
  if (counts.size() > 8) {
    throw std::invalid_argument("grw order search: more than 8 groups");
  }
  std::sort(counts.begin(), counts.end());
  std::vector<int> best = counts;
  double best_gamma = grw_profile(counts, target_snr).total_snr;
  while (std::next_permutation(counts.begin(), counts.end())) {
    double g = grw_profile(counts, target_snr).total_snr;
    if (g < best_gamma) {
      best_gamma = g;
      best = counts;
    }
  }
  return grw_profile(best, target_snr);
}

double adaptive_target_snr(long num_devices, double max_total_snr,
                           double max_target_snr) {
  if (num_devices < 1) throw std::invalid_argument("adaptive snr: L < 1");
  double unconstrained =
      std::pow(1.0 + max_total_snr, 1.0 / static_cast<double>(num_devices)) -
      1.0;
  return std::min(unconstrained, max_target_snr);
}

std::vector<double> effective_snrs(const WeightProfile& profile) {
  const int n = profile.num_devices();
  std::vector<double> snrs(n);
  double tail = profile.noise_variance;
  for (int i = n - 1; i >= 0; --i) {
    double w2 = profile.weights[i] * profile.weights[i];
    snrs[i] = w2 / tail;
    tail += w2;
  }
  return snrs;
}

double min_effective_snr(const WeightProfile& profile) {
  auto snrs = effective_snrs(profile);
  return *std::min_element(snrs.begin(), snrs.end());
}

LayeredFrame superpose(const std::vector<std::vector<double>>& device_symbols,
                       const WeightProfile& profile, RandomStream& rng) {
  if (static_cast<int>(device_symbols.size()) != profile.num_devices()) {
    throw std::invalid_argument("superpose: device count mismatch");
  }
  std::size_t len = device_symbols.empty() ? 0 : device_symbols[0].size();
  for (const auto& s : device_symbols) {
    if (s.size() != len) {
      throw std::invalid_argument("superpose: symbol length mismatch");
    }
  }
  LayeredFrame frame;
  frame.device_symbols = device_symbols;
  frame.profile = profile;
  frame.superposed.assign(len, 0.0);
  // One complex channel use carries one real BPSK symbol; noise_variance
  // is the per-use total, so the real dimension sees half of it.  The
  // imaginary dimension carries no signal and is dropped.
  double sigma = std::sqrt(profile.noise_variance / 2.0);
  for (std::size_t t = 0; t < len; ++t) {
    double acc = 0.0;
    for (int d = 0; d < profile.num_devices(); ++d) {
      acc += profile.weights[d] * device_symbols[d][t];
    }
    frame.superposed[t] = acc + rng.gaussian(0.0, sigma);
  }
  return frame;
}

std::string profile_to_csv(const WeightProfile& profile) {
  static const char* names[] = {"eqw", "exw", "exw_random", "grw"};
  std::ostringstream out;
  out.precision(12);
  auto snrs = effective_snrs(profile);
  int group = 0, left = profile.multiplicities.empty()
                           ? profile.num_devices()
                           : profile.multiplicities[0];
  for (int i = 0; i < profile.num_devices(); ++i) {
    if (left == 0 && group + 1 < static_cast<int>(
                                     profile.multiplicities.size())) {
      left = profile.multiplicities[++group];
    }
    out << names[static_cast<int>(profile.design)] << "," << i << ","
        << profile.weights[i] << "," << group << "," << snrs[i] << "\n";
    --left;
  }
  return out.str();
}

}  // namespace mma
