// Multistage decoding at the BS: per-stage APP LLRs against the residual,
// interference cancellation of decoded layers, adapter sign correction, and
// realized-rate / resource-block accounting.
#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

#include "mma/raptor.hpp"
#include "mma/weights.hpp"

namespace mma {

enum class LlrForm {
  standard,           // 2 w y / sigma^2
  amplitude_squared,  // 2 w^2 y / sigma^2 (the printed variant)
};

// LLRs of the equivalent BI-AWGN channel seen by one stage.
LlrVector app_llr(const std::vector<double>& residual, double amplitude,
                  double noise_variance, LlrForm form = LlrForm::standard);

constexpr long kUnservable = std::numeric_limits<long>::max();

// ceil(k / (tau_s * W_s * rate)); kUnservable when the rate is 0.
long required_rbs(long message_bits, double min_rate, double bandwidth_hz,
                  double rb_duration_s);

struct StageResult {
  int device_index = 0;
  bool success = false;
  long symbols_consumed = 0;
  double realized_rate = 0.0;  // k / symbols_consumed when successful
  double effective_snr = 0.0;
  // Mean square of the residual seen at this stage's input; with clean
  // cancellation it sits at sum_{j>=i} w_j^2 + sigma_z^2.
  double residual_power = 0.0;
};

struct DecodeReport {
  std::vector<StageResult> per_stage;
  double min_rate = 0.0;  // over successful stages
  long rbs_required = kUnservable;
  bool outage = false;
};

// One decoding stage's codec.  The rateless codec runs the real sum-product
// pipeline; the oracle stub succeeds exactly at the capacity-implied symbol
// count (scaled by its efficiency) and is used to validate the cancellation
// bookkeeping separately from the code.
struct DeviceCodec {
  enum class Kind { rateless, oracle } kind = Kind::rateless;
  RaptorCodeSpec spec;
  std::shared_ptr<const LdpcPrecode> precode;
  BitVector message;
  std::uint64_t adapter_seed = 0;
  double oracle_efficiency = 1.0;
};

DeviceCodec make_rateless_codec(const RaptorCodeSpec& spec,
                                const BitVector& message,
                                std::uint64_t adapter_seed);
DeviceCodec make_oracle_codec(int message_length, double efficiency = 1.0);

struct MsdConfig {
  LlrForm llr_form = LlrForm::standard;
  int decode_chunk = 0;  // symbols between attempts; 0 -> ceil(k/16)
  // Per-stage cap: factor * k / log2(1 + gamma_i) symbols.
  double symbol_cap_factor = 4.0;
  int max_iterations = 100;
  // First attempt at the capacity bound k / log2(1+gamma_i); attempts below
  // it cannot succeed.
  bool start_at_capacity_bound = true;
  double symbols_per_rb = 1000.0;  // W_s * tau_s, for the report
};

// Stages run in profile (descending weight) order.  A failed stage's power
// stays in the interference term of every later stage.
DecodeReport decode_multistage(const LayeredFrame& frame,
                               std::vector<DeviceCodec>& codecs,
                               const MsdConfig& config = {});

// x = 1 - 2(c xor t): the device's modulated stream, regenerated for
// cancellation.
std::vector<double> modulated_prefix(DeviceCodec& codec, long n);

std::string report_to_csv(const DecodeReport& report);

}  // namespace mma
