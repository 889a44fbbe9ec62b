#include "mma/zc.hpp"

#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace mma {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; static_cast<long>(d) * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

ZcRoot generate_root(int root_index, int n_zc, bool strict) {
  if (n_zc < 2) throw std::invalid_argument("zc: length must be >= 2");
  if (root_index < 1 || root_index > n_zc - 1) {
    throw std::invalid_argument("zc: root index must be in [1, N_zc-1]");
  }
  if (strict && !is_prime(n_zc)) {
    throw std::invalid_argument("zc: strict mode requires a prime length");
  }
  ZcRoot root;
  root.root_index = root_index;
  root.length = n_zc;
  root.samples.resize(n_zc);
  for (int n = 0; n < n_zc; ++n) {
    // n(n+1) can exceed int range for long sequences; reduce mod 2*N first.
    long q = (static_cast<long>(n) * (n + 1)) % (2L * n_zc);
    double phase = -kPi * root_index * static_cast<double>(q) / n_zc;
    root.samples[n] = std::polar(1.0, phase);
  }
  return root;
}

Preamble derive_preamble(const ZcRoot& root, int preamble_index, int n_cs,
                         int delay_index, int tau_samples) {
  if (preamble_index < 0) throw std::invalid_argument("preamble index < 0");
  if (delay_index < 1) throw std::invalid_argument("delay index < 1");
  if (n_cs < 1 || tau_samples < 0) {
    throw std::invalid_argument("invalid shift configuration");
  }
  const int n = root.length;
  const long shift = static_cast<long>(preamble_index) * n_cs +
                     static_cast<long>(delay_index - 1) * tau_samples;
  if (shift >= n) {
    throw std::invalid_argument(
        "preamble shift overflow: i*N_cs + (j-1)*tau >= N_zc");
  }
  Preamble p;
  p.root_index = root.root_index;
  p.preamble_index = preamble_index;
  p.shift_step = n_cs;
  p.delay_index = delay_index;
  p.total_shift = static_cast<int>(shift);
  p.samples.resize(n);
  for (int k = 0; k < n; ++k) {
    p.samples[k] = root.samples[(k + shift) % n];
  }
  return p;
}

std::vector<double> cyclic_correlate(const std::vector<cplx>& a,
                                     const std::vector<cplx>& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("cyclic_correlate: length mismatch");
  }
  const int n = static_cast<int>(a.size());
  std::vector<double> out(n);
  for (int s = 0; s < n; ++s) {
    cplx acc = 0.0;
    for (int k = 0; k < n; ++k) {
      int idx = k + s;
      if (idx >= n) idx -= n;
      acc += a[k] * std::conj(b[idx]);
    }
    out[s] = std::abs(acc);
  }
  return out;
}

cplx correlate_at(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("correlate_at: length mismatch");
  }
  cplx acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * std::conj(b[k]);
  return acc;
}

PreambleBank::PreambleBank(int n_zc, int num_preambles, int num_timing_groups,
                           int n_cs, int tau_samples, bool strict)
    : n_zc_(n_zc),
      num_preambles_(num_preambles),
      num_timing_groups_(num_timing_groups),
      n_cs_(n_cs),
      tau_samples_(tau_samples) {
  if (num_preambles < 1 || num_timing_groups < 1) {
    throw std::invalid_argument("bank: need at least one preamble and group");
  }
  preambles_per_root_ = n_zc / n_cs;
  if (preambles_per_root_ < 1) {
    throw std::invalid_argument("bank: N_cs larger than sequence length");
  }
  // Delay shifts of one preamble must stay inside its N_cs slot, otherwise
  // two (preamble, delay) pairs in the same root alias to one shift.
  if (static_cast<long>(num_timing_groups - 1) * tau_samples >= n_cs) {
    throw std::invalid_argument(
        "bank: (N_t-1)*tau_samples >= N_cs would alias timing groups "
        "across preambles");
  }
  int roots_needed =
      (num_preambles + preambles_per_root_ - 1) / preambles_per_root_;
  for (int r = 1; r < n_zc && static_cast<int>(roots_.size()) < roots_needed;
       ++r) {
    if (std::gcd(r, n_zc) != 1) continue;
    roots_.push_back(generate_root(r, n_zc, strict));
  }
  if (static_cast<int>(roots_.size()) < roots_needed) {
    throw std::invalid_argument("bank: not enough coprime roots");
  }

  preambles_.reserve(static_cast<std::size_t>(num_preambles) *
                     num_timing_groups);
  std::set<std::pair<int, int>> seen;  // (root, shift)
  for (int i = 0; i < num_preambles; ++i) {
    const ZcRoot& root = roots_[i / preambles_per_root_];
    int local = i % preambles_per_root_;
    for (int j = 1; j <= num_timing_groups; ++j) {
      Preamble p = derive_preamble(root, local, n_cs, j, tau_samples);
      p.preamble_index = i;  // expose the global index
      if (!seen.insert({p.root_index, p.total_shift}).second) {
        throw std::invalid_argument(
            "bank: two (preamble, delay) pairs map to one total shift");
      }
      preambles_.push_back(std::move(p));
    }
  }
}

int PreambleBank::shift_of(int preamble, int delay_index) const {
  return at(preamble, delay_index).total_shift;
}

}  // namespace mma
