// End-to-end frame simulation: arrivals -> RA load estimation -> weight
// assignment -> superposed data phase -> multistage decoding, with retry of
// unserved devices and throughput / RB / delay accounting.  ACB baselines
// run the same frame loop with one RB per contention winner.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mma/analysis.hpp"
#include "mma/msd.hpp"
#include "mma/ra.hpp"
#include "mma/weights.hpp"

namespace mma {

enum class AccessScheme { proposed_exw, proposed_grw, acb_original, acb_ta };

enum class SimMode {
  fast,        // stage success modeled by a drawn rate efficiency
  full_codec,  // real superposition and sum-product decoding
};

enum class EstimationMode { ideal, algorithm1 };

enum class DeferralPolicy { largest_first, smallest_first, random_group };

struct FrameBudget {
  int data_rbs = 100;
  double rb_bandwidth_hz = 1.0e6;  // W_s
  double rb_duration_s = 1.0e-3;   // tau_s
  double frame_length_s = 0.1;     // T_f

  double symbols_per_rb() const { return rb_bandwidth_hz * rb_duration_s; }
};

struct SystemParams {
  AccessScheme scheme = AccessScheme::proposed_grw;
  SimMode mode = SimMode::fast;
  FrameBudget budget;

  long message_bits = 1024;  // k
  int num_preambles = 64;    // N_s
  CellGeometry cell;

  // Data-phase power rule.
  double gamma_max = 1000.0;       // 30 dB
  double gamma0_max = 10.0;        // 10 dB
  double fixed_target_snr = 0.0;   // > 0 disables the adaptive rule

  // RB planning backs the designed rate off by this factor to absorb the
  // finite-length rate efficiency of the code.
  double planning_efficiency = 0.65;
  // Fast-mode per-stage rate efficiency draw.
  double efficiency_lo = 0.65;
  double efficiency_hi = 0.88;

  // Weight-index signalling (charged for the random-selection scheme).
  double overhead_delta = 1.0;
  double overhead_snr = 1.0;  // gamma_w, 0 dB

  // RA phase.
  EstimationMode estimation = EstimationMode::algorithm1;
  int n_zc = 1283;
  int tau_samples = 1;
  double prach_snr_db = 0.0;
  LoadEstimatorConfig estimator;

  DeferralPolicy deferral = DeferralPolicy::largest_first;
  LlrForm llr_form = LlrForm::standard;
  AcbProbabilityForm acb_form = AcbProbabilityForm::standard;
  MsdConfig msd;  // full-codec mode decoding knobs
};

struct BacklogDevice {
  long id = 0;
  long arrival_frame = 0;
};

struct ServedRecord {
  long id = 0;
  long arrival_frame = 0;
  long service_frame = 0;
};

struct DeviceQueueState {
  std::vector<BacklogDevice> backlog;
  std::vector<ServedRecord> served_log;
  long next_id = 0;

  void add_arrivals(long count, long frame);
};

struct FrameReport {
  long arrivals = 0;
  long contenders = 0;
  long transmitted = 0;  // devices that entered the data phase
  long served = 0;
  long deferred = 0;  // told not to transmit (or unscheduled by estimation)
  long outages = 0;
  long rbs_used = 0;  // data RBs plus signalling overhead
  double target_snr = 0.0;
  double min_rate = 0.0;
};

// One frame of the chosen scheme.  Deferred and failed devices stay in the
// backlog and contend again next frame with fresh preamble draws.
FrameReport run_frame(const SystemParams& params, DeviceQueueState& queue,
                      long frame_index, long new_arrivals, RandomStream& rng);

struct ScenarioResult {
  double mean_served_per_frame = 0.0;
  double stderr_served_per_frame = 0.0;
  double mean_devices_per_rb = 0.0;  // total served / total RBs, per seed
  double stderr_devices_per_rb = 0.0;
  double mean_delay_frames = 0.0;  // over served devices
  double stderr_delay_frames = 0.0;
  double mean_delay_seconds = 0.0;
  double served_fraction = 0.0;  // served / arrivals, pooled
  long total_arrivals = 0;
  long total_served = 0;
  long total_rbs = 0;
  std::vector<FrameReport> frames;  // first seed only, in frame order
};

// frames sequential per seed; seeds are independent replicas.  Arrivals are
// Poisson(lambda) per frame.
ScenarioResult run_scenario(const SystemParams& params, double lambda,
                            int frames, std::uint64_t seed_base,
                            int num_seeds);

}  // namespace mma
