// Closed-form performance oracles for the superposed data phase, the
// signalling-overhead cost, and the two access-class-barring baselines.
#pragma once

#include <vector>

#include "mma/ra.hpp"
#include "mma/rng.hpp"

namespace mma {

// Gaussian tail integral Q(x) = P(N(0,1) > x).
double q_function(double x);

// log2(1 + 1 / (L - 1 + L sigma_z^2)): the worst-layer rate under equal
// weights.
double min_rate_eqw(int num_devices, double noise_variance);

// Gaussian-mixture approximation of the minimum effective SNR when L
// devices draw uniformly from the L optimal exponential coefficients.
struct MinSnrModel {
  int num_devices = 0;    // L
  double target_snr = 0;  // gamma_0
  double p_empty = 0;     // p0 = (1 - 1/L)^L
  std::vector<double> means;      // m_i = 1/gamma_0
  std::vector<double> variances;  // S_i

  static MinSnrModel make(int num_devices, double target_snr);
};

// F(x | L) = 1 - prod_i [p0 + (1-p0)(1 - Q((1/x - m_i)/sqrt(S_i)))].
double min_snr_cdf_conditional(double x, const MinSnrModel& model);

// Poisson mixture over the device count; F(x | L=0) := 0.
double min_snr_cdf(double x, double lambda, double target_snr);

// Mean of the distribution implied by the conditional cdf, by integrating
// the upper tail.  mean_shift applies the optional post-hoc calibration as
// a relative shift (e.g. 0.03 for +3%).
double min_snr_model_mean(const MinSnrModel& model, double mean_shift = 0.0);

// ceil(delta N / (log2(1+gamma_w) W_s tau_s)): RBs spent signalling the
// chosen weight indices with length-(delta N) orthogonal sequences.
long weight_overhead_rbs(double delta, long num_sequences, double snr_w,
                         double bandwidth_hz, double rb_duration_s);

enum class AcbScheme { original, timing_advance };
enum class AcbProbabilityForm {
  standard,  // N_s / N
  paper,     // N / N_s, as printed
};

struct AcbConfig {
  AcbScheme scheme = AcbScheme::original;
  int num_preambles = 64;
  CellGeometry cell;
  double ring_depth_m = 75.0;  // d = c tau
  AcbProbabilityForm probability_form = AcbProbabilityForm::standard;

  double rho() const {
    double r = cell.radius_m;
    return 4.0 * ring_depth_m * (r - ring_depth_m) / (r * r);
  }
};

// Barring probability p for N contenders.
double acb_transmit_probability(const AcbConfig& config, long contenders);

struct AcbOutcome {
  long participants = 0;
  long successes = 0;
  std::vector<int> served;  // indices into the contender list
};

// One contention frame: every device independently participates with
// probability p and picks a preamble uniformly.  Original scheme: a
// preamble carries a success iff exactly one participant chose it.  With
// timing advance: the BS picks one observed timing index per chosen
// preamble; the preamble carries a success iff exactly one participant has
// that (preamble, timing) pair.
AcbOutcome acb_frame_outcome(const AcbConfig& config, long contenders,
                             RandomStream& rng);

}  // namespace mma
