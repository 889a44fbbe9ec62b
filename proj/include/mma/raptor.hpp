// Rateless code used by every device: a high-rate LDPC precode concatenated
// with an LT code, decoded by sum-product message passing on the joint
// Tanner graph over binary-input AWGN LLRs.
#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "mma/degree.hpp"
#include "mma/rng.hpp"

namespace mma {

using BitVector = std::vector<std::uint8_t>;
using LlrVector = std::vector<double>;
using LtEdgeList = std::vector<std::vector<int>>;

// Messages and LLRs are clamped to this magnitude.
constexpr double kLlrClamp = 30.0;

inline double clamp_llr(double v) {
  if (v > kLlrClamp) return kLlrClamp;
  if (v < -kLlrClamp) return -kLlrClamp;
  return v;
}

struct RaptorCodeSpec {
  int message_length = 1024;  // k
  double precode_rate = 0.98;
  DegreeDistribution degree_dist = paper_degree_distribution();
  std::uint64_t graph_seed = 0;
  // The precode structure is common to all devices.
  std::uint64_t precode_seed = 0x10dc0de5eedULL;
  // Append a 16-bit checksum to the message and use it as the success test
  // instead of a genie comparison.
  bool checksum = false;

  int input_symbols() const;  // k' = round(k / precode_rate)
};

// Systematic high-rate precode with column-weight-3 parity structure.  The
// parity square is solved once at construction (retrying with incremented
// seeds when the random draw is singular).
class LdpcPrecode {
 public:
  LdpcPrecode(int message_length, double rate, std::uint64_t seed);

  int message_length() const { return k_; }
  int input_symbols() const { return kp_; }
  int num_checks() const { return m_; }
  const std::vector<std::vector<int>>& checks() const { return rows_; }

  // message (k bits) -> systematic codeword (k' input symbols).
  BitVector encode(const BitVector& message) const;
  bool satisfies(const BitVector& symbols) const;

 private:
  void build(std::uint64_t seed);
  int k_, kp_, m_;
  std::vector<std::vector<int>> rows_;        // check -> input symbols
  std::vector<std::vector<int>> msg_rows_;    // check -> message columns
  std::vector<std::vector<std::uint8_t>> parity_inverse_;
};

// Precode instances are identical across devices for a given (k, rate,
// seed); share them.
std::shared_ptr<const LdpcPrecode> shared_precode(const RaptorCodeSpec& spec);

// Per-device i.i.d. scrambler forcing output symmetry of each layer's
// equivalent binary-input channel.  Lazily extended, reproducible from the
// seed.
class AdapterStream {
 public:
  explicit AdapterStream(std::uint64_t seed)
      : seed_(seed), rng_(seed_combine(seed, 0x0adabe11)) {}

  // Fixed scrambler sequence (cycled past its end); mainly for tests.
  explicit AdapterStream(std::vector<std::uint8_t> bits)
      : seed_(0), rng_(0), fixed_(std::move(bits)) {}

  std::uint64_t seed() const { return seed_; }
  int bit(long index);

  // d = c xor t, starting at stream position offset.
  BitVector apply(const BitVector& bits, long offset = 0);
  // v = u * (1 - 2 t): flips the sign of LLRs where the adapter bit is 1.
  LlrVector unapply(const LlrVector& llrs, long offset = 0);

 private:
  std::uint64_t seed_;
  RandomStream rng_;
  std::vector<std::uint8_t> cache_;
  std::vector<std::uint8_t> fixed_;
};

BitVector adapter_apply(const BitVector& bits, AdapterStream& adapter);
LlrVector adapter_unapply(const LlrVector& llrs, AdapterStream& adapter);

// Draws one output symbol's distinct neighbor set; degrees above the input
// size are clamped.
void next_lt_neighbors(int input_symbols, const DegreeDistribution& dd,
                       RandomStream& rng, std::vector<int>& out);

// Deterministic neighbor-set stream, reproducible from the graph seed; the
// encoder and the BS-side decoder both walk it in symbol order.
class LtSymbolStream {
 public:
  LtSymbolStream(int input_symbols, DegreeDistribution dd,
                 std::uint64_t graph_seed)
      : input_symbols_(input_symbols),
        dd_(std::move(dd)),
        rng_(seed_combine(graph_seed, 0x17c0de)) {}

  const std::vector<int>& next() {
    next_lt_neighbors(input_symbols_, dd_, rng_, scratch_);
    return scratch_;
  }

 private:
  int input_symbols_;
  DegreeDistribution dd_;
  RandomStream rng_;
  std::vector<int> scratch_;
};

// Each output bit is the XOR of its neighbor set.  Returns the output bits
// and the neighbor sets used for them.
std::pair<BitVector, LtEdgeList> lt_encode(const BitVector& input_symbols,
                                           int count,
                                           const DegreeDistribution& dd,
                                           RandomStream& rng);

// Device-side encoder with a cached, extendable coded-bit prefix.
class RaptorEncoder {
 public:
  RaptorEncoder(const RaptorCodeSpec& spec,
                std::shared_ptr<const LdpcPrecode> precode,
                const BitVector& message);

  const BitVector& input_symbols() const { return input_symbols_; }
  // Coded bits c_0..c_{n-1}; extends the cache as needed.
  const BitVector& coded_prefix(long n);

 private:
  BitVector input_symbols_;
  LtSymbolStream stream_;
  BitVector coded_;
};

struct SpDecodeResult {
  BitVector message;            // hard decisions on the first k symbols
  bool converged = false;       // beliefs stabilized before the cap
  bool precode_ok = false;      // all precode checks satisfied
  int iterations = 0;
};

// Sum-product decoder over the joint LT + precode graph.  Output symbols
// arrive incrementally; message state persists across decode calls so later
// attempts warm-start from the previous ones.
class RaptorDecoder {
 public:
  RaptorDecoder(const RaptorCodeSpec& spec,
                std::shared_ptr<const LdpcPrecode> precode);

  // Appends output symbols with neighbor sets from the shared graph stream.
  void add_symbols(const LlrVector& llrs);
  // Appends one output symbol with an explicit neighbor set.
  void add_symbol(double llr, const std::vector<int>& neighbors);

  long symbols_received() const { return outputs_received_; }

  SpDecodeResult decode(int max_iterations);
  void reset_messages();

 private:
  void append_check(double channel_tanh, const std::vector<int>& neighbors);

  int k_, kp_;
  std::shared_ptr<const LdpcPrecode> precode_;
  LtSymbolStream stream_;
  long outputs_received_ = 0;

  std::vector<long> check_start_;
  std::vector<double> check_chan_tanh_;
  std::vector<int> edge_var_;
  std::vector<double> edge_c2v_;
  std::vector<double> edge_v2c_tanh_;
  std::vector<double> var_sum_;
  std::vector<std::uint8_t> hard_;
};

// One-shot decode of explicitly provided output symbols.
SpDecodeResult sp_decode(const LlrVector& llrs, const LtEdgeList& edges,
                         const RaptorCodeSpec& spec, int max_iterations);

std::uint16_t crc16(const BitVector& bits);
BitVector append_crc16(const BitVector& payload);
bool check_crc16(const BitVector& bits);

}  // namespace mma
