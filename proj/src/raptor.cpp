#include "mma/raptor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace mma {

int RaptorCodeSpec::input_symbols() const {
  if (precode_rate <= 0.0 || precode_rate > 1.0) {
    throw std::invalid_argument("precode rate must be in (0, 1]");
  }
  return static_cast<int>(
      std::lround(message_length / precode_rate));
}

// ---------------------------------------------------------------------------
// LDPC precode

LdpcPrecode::LdpcPrecode(int message_length, double rate, std::uint64_t seed)
    : k_(message_length) {
  if (k_ < 1) throw std::invalid_argument("message length < 1");
  if (rate <= 0.0 || rate > 1.0) {
    throw std::invalid_argument("precode rate must be in (0, 1]");
  }
  kp_ = static_cast<int>(std::lround(k_ / rate));
  m_ = kp_ - k_;
  for (int attempt = 0; attempt < 256; ++attempt) {
    try {
      build(seed + static_cast<std::uint64_t>(attempt));
      return;
    } catch (const std::runtime_error&) {
      // singular parity square; redraw
    }
  }
  throw std::runtime_error("ldpc: no invertible parity square found");
}

void LdpcPrecode::build(std::uint64_t seed) {
  rows_.assign(m_, {});
  msg_rows_.assign(m_, {});
  parity_inverse_.clear();
  if (m_ == 0) return;  // rate-1 precode: identity

  RandomStream rng(seed_combine(seed, 0x1d9c));
  // With fewer than four checks a uniform column weight of 3 (or any even
  // weight) makes the parity square singular for every draw; fall back to
  // weight-1 columns there.
  const int col_weight = m_ >= 4 ? 3 : 1;
  // parity_cols[c] = rows touched by parity column c (c in [0, m_)).
  std::vector<std::vector<int>> parity_cols(m_);
  std::vector<int> pick;
  for (int c = 0; c < kp_; ++c) {
    pick.clear();
    while (static_cast<int>(pick.size()) < col_weight) {
      int r = static_cast<int>(rng.uniform_int(m_));
      if (std::find(pick.begin(), pick.end(), r) == pick.end()) {
        pick.push_back(r);
      }
    }
    for (int r : pick) {
      rows_[r].push_back(c);
      if (c < k_) {
        msg_rows_[r].push_back(c);
      } else {
        parity_cols[c - k_].push_back(r);
      }
    }
  }

  // Invert the m x m parity block over GF(2).
  std::vector<std::vector<std::uint8_t>> a(
      m_, std::vector<std::uint8_t>(2 * m_, 0));
  for (int c = 0; c < m_; ++c) {
    for (int r : parity_cols[c]) a[r][c] = 1;
  }
  for (int i = 0; i < m_; ++i) a[i][m_ + i] = 1;
  for (int col = 0; col < m_; ++col) {
    int pivot = -1;
    for (int r = col; r < m_; ++r) {
      if (a[r][col]) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) throw std::runtime_error("singular parity square");
    std::swap(a[col], a[pivot]);
    for (int r = 0; r < m_; ++r) {
      if (r != col && a[r][col]) {
        for (int c = col; c < 2 * m_; ++c) a[r][c] ^= a[col][c];
      }
    }
  }
  parity_inverse_.assign(m_, std::vector<std::uint8_t>(m_, 0));
  for (int r = 0; r < m_; ++r) {
    for (int c = 0; c < m_; ++c) parity_inverse_[r][c] = a[r][m_ + c];
  }
}

BitVector LdpcPrecode::encode(const BitVector& message) const {
  if (static_cast<int>(message.size()) != k_) {
    throw std::invalid_argument("ldpc encode: wrong message length");
  }
  BitVector out(kp_, 0);
  std::copy(message.begin(), message.end(), out.begin());
  if (m_ == 0) return out;

  // s = H_msg * message, then parity = inverse(H_par) * s.
  std::vector<std::uint8_t> s(m_, 0);
  for (int r = 0; r < m_; ++r) {
    std::uint8_t acc = 0;
    for (int c : msg_rows_[r]) acc ^= message[c];
    s[r] = acc;
  }
  for (int i = 0; i < m_; ++i) {
    std::uint8_t acc = 0;
    for (int j = 0; j < m_; ++j) acc ^= parity_inverse_[i][j] & s[j];
    out[k_ + i] = acc;
  }
  return out;
}

bool LdpcPrecode::satisfies(const BitVector& symbols) const {
  if (static_cast<int>(symbols.size()) != kp_) return false;
  for (const auto& row : rows_) {
    std::uint8_t acc = 0;
    for (int c : row) acc ^= symbols[c];
    if (acc) return false;
  }
  return true;
}

std::shared_ptr<const LdpcPrecode> shared_precode(const RaptorCodeSpec& spec) {
  static std::mutex mu;
  static std::map<std::tuple<int, long, std::uint64_t>,
                  std::shared_ptr<const LdpcPrecode>>
      cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(spec.message_length,
                             std::lround(spec.precode_rate * 1000000.0),
                             spec.precode_seed);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto p = std::make_shared<const LdpcPrecode>(
      spec.message_length, spec.precode_rate, spec.precode_seed);
  cache.emplace(key, p);
  return p;
}

// ---------------------------------------------------------------------------
// Channel adapter

int AdapterStream::bit(long index) {
  if (!fixed_.empty()) {
    return fixed_[static_cast<std::size_t>(index) % fixed_.size()];
  }
  while (static_cast<long>(cache_.size()) <= index) {
    cache_.push_back(static_cast<std::uint8_t>(rng_.bit()));
  }
  return cache_[index];
}

BitVector AdapterStream::apply(const BitVector& bits, long offset) {
  BitVector out(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    out[i] = bits[i] ^ static_cast<std::uint8_t>(bit(offset + i));
  }
  return out;
}

LlrVector AdapterStream::unapply(const LlrVector& llrs, long offset) {
  LlrVector out(llrs.size());
  for (std::size_t i = 0; i < llrs.size(); ++i) {
    out[i] = bit(offset + i) ? -llrs[i] : llrs[i];
  }
  return out;
}

BitVector adapter_apply(const BitVector& bits, AdapterStream& adapter) {
  return adapter.apply(bits, 0);
}

LlrVector adapter_unapply(const LlrVector& llrs, AdapterStream& adapter) {
  return adapter.unapply(llrs, 0);
}

// ---------------------------------------------------------------------------
// LT code

void next_lt_neighbors(int input_symbols, const DegreeDistribution& dd,
                       RandomStream& rng, std::vector<int>& out) {
  int d = std::min(dd.sample(rng), input_symbols);
  out.clear();
  while (static_cast<int>(out.size()) < d) {
    int v = static_cast<int>(rng.uniform_int(input_symbols));
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
}

std::pair<BitVector, LtEdgeList> lt_encode(const BitVector& input_symbols,
                                           int count,
                                           const DegreeDistribution& dd,
                                           RandomStream& rng) {
  const int kp = static_cast<int>(input_symbols.size());
  if (kp < 1) throw std::invalid_argument("lt_encode: empty input");
  BitVector bits(count);
  LtEdgeList edges(count);
  std::vector<int> nb;
  for (int t = 0; t < count; ++t) {
    next_lt_neighbors(kp, dd, rng, nb);
    std::uint8_t acc = 0;
    for (int v : nb) acc ^= input_symbols[v];
    bits[t] = acc;
    edges[t] = nb;
  }
  return {std::move(bits), std::move(edges)};
}

RaptorEncoder::RaptorEncoder(const RaptorCodeSpec& spec,
                             std::shared_ptr<const LdpcPrecode> precode,
                             const BitVector& message)
    : input_symbols_(precode->encode(message)),
      stream_(precode->input_symbols(), spec.degree_dist, spec.graph_seed) {}

const BitVector& RaptorEncoder::coded_prefix(long n) {
  while (static_cast<long>(coded_.size()) < n) {
    const auto& nb = stream_.next();
    std::uint8_t acc = 0;
    for (int v : nb) acc ^= input_symbols_[v];
    coded_.push_back(acc);
  }
  return coded_;
}

// ---------------------------------------------------------------------------
// Sum-product decoder

RaptorDecoder::RaptorDecoder(const RaptorCodeSpec& spec,
                             std::shared_ptr<const LdpcPrecode> precode)
    : k_(spec.message_length),
      kp_(precode->input_symbols()),
      precode_(std::move(precode)),
      stream_(kp_, spec.degree_dist, spec.graph_seed) {
  check_start_.push_back(0);
  var_sum_.assign(kp_, 0.0);
  hard_.assign(kp_, 0);
  // Precode parity checks carry no channel observation; their channel
  // factor in the tanh product is exactly 1.
  for (const auto& row : precode_->checks()) append_check(1.0, row);
}

void RaptorDecoder::append_check(double channel_tanh,
                                 const std::vector<int>& neighbors) {
  check_chan_tanh_.push_back(channel_tanh);
  for (int v : neighbors) {
    edge_var_.push_back(v);
    edge_c2v_.push_back(0.0);
    edge_v2c_tanh_.push_back(0.0);
  }
  check_start_.push_back(static_cast<long>(edge_var_.size()));
}

void RaptorDecoder::add_symbol(double llr, const std::vector<int>& neighbors) {
  append_check(std::tanh(0.5 * clamp_llr(llr)), neighbors);
  ++outputs_received_;
}

void RaptorDecoder::add_symbols(const LlrVector& llrs) {
  for (double llr : llrs) add_symbol(llr, stream_.next());
}

void RaptorDecoder::reset_messages() {
  std::fill(edge_c2v_.begin(), edge_c2v_.end(), 0.0);
  std::fill(edge_v2c_tanh_.begin(), edge_v2c_tanh_.end(), 0.0);
}

SpDecodeResult RaptorDecoder::decode(int max_iterations) {
  const long num_checks = static_cast<long>(check_chan_tanh_.size());
  const long num_edges = static_cast<long>(edge_var_.size());
  SpDecodeResult result;

  int stable_iters = 0;
  int iter = 0;
  double prev_mass = -1.0;
  for (iter = 1; iter <= max_iterations; ++iter) {
    // Variable beliefs from current check messages.
    std::fill(var_sum_.begin(), var_sum_.end(), 0.0);
    for (long e = 0; e < num_edges; ++e) var_sum_[edge_var_[e]] += edge_c2v_[e];

    int flips = 0;
    double mass = 0.0;
    for (int v = 0; v < kp_; ++v) {
      std::uint8_t b = var_sum_[v] < 0.0 ? 1 : 0;
      if (b != hard_[v]) ++flips;
      hard_[v] = b;
      mass += std::abs(var_sum_[v]);
    }
    // Stop on a genuine fixpoint: decisions stable and the belief mass no
    // longer moving.  Flips alone are not enough, since still-undecided
    // variables sit at zero belief without flipping.
    bool mass_stable =
        prev_mass >= 0.0 &&
        std::abs(mass - prev_mass) <= 1e-5 * (1.0 + mass);
    prev_mass = mass;
    if (flips == 0 && mass_stable && iter > 2) {
      if (++stable_iters >= 3) {
        result.converged = true;
        break;
      }
    } else {
      stable_iters = 0;
    }

    // Variable-to-check messages, stored as tanh(v2c / 2).
    for (long e = 0; e < num_edges; ++e) {
      double v2c = clamp_llr(var_sum_[edge_var_[e]] - edge_c2v_[e]);
      edge_v2c_tanh_[e] = std::tanh(0.5 * v2c);
    }

    // Check-to-variable messages by forward/backward partial products,
    // with the channel factor folded in.
    std::vector<double> fwd;
    for (long c = 0; c < num_checks; ++c) {
      const long lo = check_start_[c], hi = check_start_[c + 1];
      const long deg = hi - lo;
      fwd.resize(deg + 1);
      fwd[0] = check_chan_tanh_[c];
      for (long i = 0; i < deg; ++i) fwd[i + 1] = fwd[i] * edge_v2c_tanh_[lo + i];
      double bwd = 1.0;
      for (long i = deg - 1; i >= 0; --i) {
        double prod = fwd[i] * bwd;
        if (prod > 0.999999999999999) prod = 0.999999999999999;
        if (prod < -0.999999999999999) prod = -0.999999999999999;
        edge_c2v_[lo + i] = clamp_llr(2.0 * std::atanh(prod));
        bwd *= edge_v2c_tanh_[lo + i];
      }
    }
  }

  result.iterations = std::min(iter, max_iterations);
  result.precode_ok = precode_->satisfies(hard_);
  result.message.assign(hard_.begin(), hard_.begin() + k_);
  return result;
}

SpDecodeResult sp_decode(const LlrVector& llrs, const LtEdgeList& edges,
                         const RaptorCodeSpec& spec, int max_iterations) {
  if (llrs.size() != edges.size()) {
    throw std::invalid_argument("sp_decode: llrs/edges length mismatch");
  }
  RaptorDecoder dec(spec, shared_precode(spec));
  for (std::size_t i = 0; i < llrs.size(); ++i) {
    dec.add_symbol(llrs[i], edges[i]);
  }
  return dec.decode(max_iterations);
}

// ---------------------------------------------------------------------------
// CRC-16/CCITT over bits, for the optional checksum success test.

std::uint16_t crc16(const BitVector& bits) {
  std::uint16_t crc = 0xFFFF;
  for (std::uint8_t b : bits) {
    std::uint16_t in = static_cast<std::uint16_t>(b & 1u);
    std::uint16_t xor_flag = ((crc >> 15) & 1u) ^ in;
    crc = static_cast<std::uint16_t>(crc << 1);
    if (xor_flag) crc ^= 0x1021;
  }
  return crc;
}

BitVector append_crc16(const BitVector& payload) {
  BitVector out = payload;
  std::uint16_t c = crc16(payload);
  for (int i = 15; i >= 0; --i) {
    out.push_back(static_cast<std::uint8_t>((c >> i) & 1u));
  }
  return out;
}

bool check_crc16(const BitVector& bits) {
  if (bits.size() < 16) return false;
  BitVector payload(bits.begin(), bits.end() - 16);
  std::uint16_t expect = crc16(payload);
  for (int i = 0; i < 16; ++i) {
    if (bits[bits.size() - 16 + i] !=
        static_cast<std::uint8_t>((expect >> (15 - i)) & 1u)) {
      return false;
    }
  }
  return true;
}

}  // namespace mma
