// Zadoff-Chu root sequences, cyclically shifted RA preambles, and the cyclic
// correlations used to detect them.
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace mma {

using cplx = std::complex<double>;

bool is_prime(int n);

// Root sequence z_r[n] = exp(-j pi r n(n+1) / N), n = 0..N-1.
// Constant amplitude; for gcd(r, N) = 1 the cyclic autocorrelation is an
// impulse of height N at lag 0.
struct ZcRoot {
  int root_index = 0;
  int length = 0;
  std::vector<cplx> samples;
};

// strict = reject non-prime lengths (ideal cross-root properties need a
// prime length; the shipped defaults follow the reference setup, which uses
// a non-prime length).
ZcRoot generate_root(int root_index, int n_zc, bool strict = false);

// One RA preamble: the root shifted by preamble_index * n_cs, observed at
// the BS with a further shift of (delay_index - 1) * tau_samples from the
// propagation delay of its timing group.
struct Preamble {
  int root_index = 0;
  int preamble_index = 0;  // i, within this root
  int shift_step = 0;      // N_CS
  int delay_index = 1;     // j, 1-based timing group
  int total_shift = 0;
  std::vector<cplx> samples;
};

Preamble derive_preamble(const ZcRoot& root, int preamble_index, int n_cs,
                         int delay_index, int tau_samples);

// out[s] = | sum_n a[n] * conj(b[(n+s) mod N]) |.  With b the root and a a
// shifted copy, the peak sits exactly at the total shift.
std::vector<double> cyclic_correlate(const std::vector<cplx>& a,
                                     const std::vector<cplx>& b);

// Inner product sum_n a[n] * conj(b[n]) without the lag sweep.
cplx correlate_at(const std::vector<cplx>& a, const std::vector<cplx>& b);

// The full set of N_s x N_t preambles the BS searches during load
// estimation.  Preambles are packed into roots: each root hosts
// floor(N_zc / n_cs) preamble indices, further roots (coprime with N_zc)
// are added until N_s preambles exist.  Within a root, every (preamble,
// delay) pair must map to a distinct total shift; a configuration where two
// pairs collide is rejected because the estimator could not tell them
// apart.
class PreambleBank {
 public:
  PreambleBank(int n_zc, int num_preambles, int num_timing_groups, int n_cs,
               int tau_samples, bool strict = false);

  int n_zc() const { return n_zc_; }
  int num_preambles() const { return num_preambles_; }
  int num_timing_groups() const { return num_timing_groups_; }
  int num_roots() const { return static_cast<int>(roots_.size()); }
  bool single_root() const { return roots_.size() == 1; }

  const ZcRoot& root(int idx) const { return roots_[idx]; }
  int root_of_preamble(int preamble) const {
    return preamble / preambles_per_root_;
  }
  int shift_of(int preamble, int delay_index) const;

  // preamble in [0, N_s), delay_index in [1, N_t].
  const Preamble& at(int preamble, int delay_index) const {
    return preambles_[preamble * num_timing_groups_ + delay_index - 1];
  }

 private:
  int n_zc_;
  int num_preambles_;
  int num_timing_groups_;
  int n_cs_;
  int tau_samples_;
  int preambles_per_root_;
  std::vector<ZcRoot> roots_;
  std::vector<Preamble> preambles_;
};

}  // namespace mma
