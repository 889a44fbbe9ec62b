#include "mma/msd.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mma {

LlrVector app_llr(const std::vector<double>& residual, double amplitude,
                  double noise_variance, LlrForm form) {
  if (noise_variance <= 0.0) {
    throw std::invalid_argument("app_llr: noise variance <= 0");
  }
  double scale = form == LlrForm::standard
                     ? 2.0 * amplitude / noise_variance
                     : 2.0 * amplitude * amplitude / noise_variance;
  LlrVector out(residual.size());
  for (std::size_t i = 0; i < residual.size(); ++i) {
    out[i] = clamp_llr(scale * residual[i]);
  }
  return out;
}

long required_rbs(long message_bits, double min_rate, double bandwidth_hz,
                  double rb_duration_s) {
  if (min_rate <= 0.0) return kUnservable;
  double symbols_per_rb = bandwidth_hz * rb_duration_s;
  return static_cast<long>(
      std::ceil(message_bits / (symbols_per_rb * min_rate)));
}

DeviceCodec make_rateless_codec(const RaptorCodeSpec& spec,
                                const BitVector& message,
                                std::uint64_t adapter_seed) {
  DeviceCodec c;
  c.kind = DeviceCodec::Kind::rateless;
  c.spec = spec;
  c.precode = shared_precode(spec);
  c.message = message;
  c.adapter_seed = adapter_seed;
  return c;
}

DeviceCodec make_oracle_codec(int message_length, double efficiency) {
  DeviceCodec c;
  c.kind = DeviceCodec::Kind::oracle;
  c.spec.message_length = message_length;
  c.oracle_efficiency = efficiency;
  return c;
}

std::vector<double> modulated_prefix(DeviceCodec& codec, long n) {
  if (codec.kind != DeviceCodec::Kind::rateless) {
    throw std::logic_error("modulated_prefix: oracle codec has no stream");
  }
  RaptorEncoder enc(codec.spec, codec.precode, codec.message);
  AdapterStream adapter(codec.adapter_seed);
  const BitVector& coded = enc.coded_prefix(n);
  std::vector<double> x(n);
  for (long t = 0; t < n; ++t) {
    x[t] = (coded[t] ^ adapter.bit(t)) ? -1.0 : 1.0;
  }
  return x;
}

namespace {

long round_up_to_chunk(long n, long chunk) {
  return ((n + chunk - 1) / chunk) * chunk;
}

bool message_matches(const DeviceCodec& codec, const BitVector& decoded) {
  if (codec.spec.checksum) return check_crc16(decoded);
  return decoded == codec.message;
}

}  // namespace

DecodeReport decode_multistage(const LayeredFrame& frame,
                               std::vector<DeviceCodec>& codecs,
                               const MsdConfig& config) {
  const WeightProfile& profile = frame.profile;
  const int num_stages = profile.num_devices();
  if (static_cast<int>(codecs.size()) != num_stages) {
    throw std::invalid_argument("decode_multistage: codec count mismatch");
  }
  const long frame_len = static_cast<long>(frame.superposed.size());

  std::vector<double> residual = frame.superposed;
  // Interference power still superposed after each stage.
  std::vector<double> suffix_power(num_stages + 1, 0.0);
  for (int i = num_stages - 1; i >= 0; --i) {
    suffix_power[i] =
        suffix_power[i + 1] + profile.weights[i] * profile.weights[i];
  }

  DecodeReport report;
  double failed_power = 0.0;
  for (int stage = 0; stage < num_stages; ++stage) {
    DeviceCodec& codec = codecs[stage];
    const double w = profile.weights[stage];
    // Rate accounting keeps the per-use convention (full noise_variance);
    // the demodulator works in the real dimension, which carries half the
    // noise but all of the interference.
    const double sigma2 =
        suffix_power[stage + 1] + profile.noise_variance + failed_power;
    const double sigma2_real = suffix_power[stage + 1] +
                               profile.noise_variance / 2.0 + failed_power;
    const double snr = w * w / sigma2;
    const long k = codec.spec.message_length;
    // BPSK carries at most one bit per use, whatever the SNR says.
    const double capacity = std::min(std::log2(1.0 + snr), 1.0);

    StageResult sr;
    sr.device_index = stage;
    sr.effective_snr = snr;
    if (frame_len > 0) {
      double ms = 0.0;
      for (double v : residual) ms += v * v;
      sr.residual_power = ms / frame_len;
    }

    long chunk = config.decode_chunk > 0 ? config.decode_chunk
                                         : (k + 15) / 16;
    long cap = std::min<long>(
        frame_len,
        static_cast<long>(std::ceil(config.symbol_cap_factor * k / capacity)));
    long start = config.start_at_capacity_bound
                     ? round_up_to_chunk(
                           static_cast<long>(std::ceil(k / capacity)), chunk)
                     : chunk;

    if (codec.kind == DeviceCodec::Kind::oracle) {
      long needed = static_cast<long>(
          std::ceil(k / (codec.oracle_efficiency * capacity)));
      long at = std::max(start, round_up_to_chunk(needed, chunk));
      if (at <= cap) {
        sr.success = true;
        sr.symbols_consumed = at;
        sr.realized_rate = static_cast<double>(k) / at;
      }
    } else {
      RaptorDecoder decoder(codec.spec, codec.precode);
      AdapterStream adapter(codec.adapter_seed);
      long released = 0;
      for (long checkpoint = start; checkpoint <= cap && !sr.success;
           checkpoint += chunk) {
        LlrVector u = app_llr(
            std::vector<double>(residual.begin() + released,
                                residual.begin() + checkpoint),
            w, sigma2_real, config.llr_form);
        decoder.add_symbols(adapter.unapply(u, released));
        released = checkpoint;
        SpDecodeResult dec = decoder.decode(config.max_iterations);
        if (message_matches(codec, dec.message)) {
          sr.success = true;
          sr.symbols_consumed = checkpoint;
          sr.realized_rate = static_cast<double>(k) / checkpoint;
        }
      }
    }

    if (sr.success) {
      // Remove this layer across the whole frame.
      if (codec.kind == DeviceCodec::Kind::oracle) {
        const auto& x = frame.device_symbols[stage];
        for (long t = 0; t < frame_len; ++t) residual[t] -= w * x[t];
      } else {
        auto x = modulated_prefix(codec, frame_len);
        for (long t = 0; t < frame_len; ++t) residual[t] -= w * x[t];
      }
    } else {
      report.outage = true;
      failed_power += w * w;
    }
    report.per_stage.push_back(sr);
  }

  double min_rate = 0.0;
  for (const auto& sr : report.per_stage) {
    if (sr.success && (min_rate == 0.0 || sr.realized_rate < min_rate)) {
      min_rate = sr.realized_rate;
    }
  }
  report.min_rate = min_rate;
  long k = codecs.empty() ? 0 : codecs[0].spec.message_length;
  report.rbs_required =
      required_rbs(k, min_rate, config.symbols_per_rb, 1.0);
  return report;
}

std::string report_to_csv(const DecodeReport& report) {
  std::ostringstream out;
  out.precision(12);
  for (const auto& sr : report.per_stage) {
    out << sr.device_index << "," << (sr.success ? 1 : 0) << ","
        << sr.symbols_consumed << "," << sr.realized_rate << ","
        << sr.effective_snr << "\n";
  }
  return out.str();
}

}  // namespace mma
