#include "mma/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mma {

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double min_rate_eqw(int num_devices, double noise_variance) {
  if (num_devices < 1) throw std::invalid_argument("L < 1");
  return std::log2(1.0 +
                   1.0 / (num_devices - 1 + num_devices * noise_variance));
}

MinSnrModel MinSnrModel::make(int num_devices, double target_snr) {
  if (num_devices < 1) throw std::invalid_argument("L < 1");
  if (target_snr <= 0.0) throw std::invalid_argument("gamma_0 <= 0");
  MinSnrModel m;
  m.num_devices = num_devices;
  m.target_snr = target_snr;
  double q = 1.0 - 1.0 / num_devices;
  m.p_empty = std::pow(q, num_devices);
  m.means.assign(num_devices, 1.0 / target_snr);
  m.variances.resize(num_devices);
  // S_i = (1 - 1/L) * sum_{j=i..L} (1+g0)^{2(i-j)}, the printed form with
  // the j = i self term included.
  double ratio = 1.0 / ((1.0 + target_snr) * (1.0 + target_snr));
  for (int i = 1; i <= num_devices; ++i) {
    double sum = 0.0, term = 1.0;
    for (int j = i; j <= num_devices; ++j) {
      sum += term;
      term *= ratio;
    }
    m.variances[i - 1] = q * sum;
  }
  return m;
}

double min_snr_cdf_conditional(double x, const MinSnrModel& model) {
  if (x <= 0.0) throw std::invalid_argument("cdf: x <= 0");
  double u = 1.0 / x;
  double prod = 1.0;
  for (int i = 0; i < model.num_devices; ++i) {
    double s = model.variances[i];
    double below;  // P(1/xi_i < u), the Gaussian branch
    if (s <= 0.0) {
      below = u > model.means[i] ? 1.0 : 0.0;
    } else {
      below = 1.0 - q_function((u - model.means[i]) / std::sqrt(s));
    }
    prod *= model.p_empty + (1.0 - model.p_empty) * below;
  }
  return 1.0 - prod;
}

double min_snr_cdf(double x, double lambda, double target_snr) {
  if (lambda <= 0.0) throw std::invalid_argument("cdf: lambda <= 0");
  double log_pmf = -lambda;  // log P(L = 0)
  double cum = std::exp(log_pmf);
  double acc = 0.0;  // L = 0 contributes F = 0
  for (long j = 1; cum < 1.0 - 1e-9; ++j) {
    log_pmf += std::log(lambda) - std::log(static_cast<double>(j));
    double pmf = std::exp(log_pmf);
    cum += pmf;
    if (pmf < 1e-16 && j > lambda) break;
    MinSnrModel model = MinSnrModel::make(static_cast<int>(j), target_snr);
    acc += pmf * min_snr_cdf_conditional(x, model);
  }
  return acc;
}

double min_snr_model_mean(const MinSnrModel& model, double mean_shift) {
  // E[gamma_min] = integral of (1 - F) over x > 0.  The mixture puts a tiny
  // mass on "all groups empty" where F never reaches 1, so the integration
  // stops once the tail is negligible or x is far above gamma_0.
  const double hi = 50.0 * model.target_snr;
  const int steps = 20000;
  const double h = hi / steps;
  double acc = 0.0;
  for (int i = 0; i < steps; ++i) {
    double x0 = i * h + 1e-12, x1 = (i + 1) * h;
    double t0 = 1.0 - min_snr_cdf_conditional(x0, model);
    double t1 = 1.0 - min_snr_cdf_conditional(x1, model);
    acc += 0.5 * (t0 + t1) * (x1 - x0);
    if (t1 < 1e-7 && x1 > 2.0 * model.target_snr) break;
  }
  return acc * (1.0 + mean_shift);
}

long weight_overhead_rbs(double delta, long num_sequences, double snr_w,
                         double bandwidth_hz, double rb_duration_s) {
  if (delta < 1.0) throw std::invalid_argument("overhead: delta < 1");
  if (snr_w <= 0.0) throw std::invalid_argument("overhead: gamma_w <= 0");
  double rate = std::log2(1.0 + snr_w);
  return static_cast<long>(
      std::ceil(delta * num_sequences / (rate * bandwidth_hz * rb_duration_s)));
}

double acb_transmit_probability(const AcbConfig& config, long contenders) {
  if (contenders < 1) throw std::invalid_argument("acb: N < 1");
  double n = static_cast<double>(contenders);
  double ns = static_cast<double>(config.num_preambles);
  if (config.scheme == AcbScheme::original) {
    double p = config.probability_form == AcbProbabilityForm::standard
                   ? ns / n
                   : n / ns;
    return std::min(1.0, p);
  }
  double rho = config.rho();
  double p = 1.17 * ns * std::log(rho) / (n * (rho - 1.0));
  return std::min(1.0, p);
}

AcbOutcome acb_frame_outcome(const AcbConfig& config, long contenders,
                             RandomStream& rng) {
  AcbOutcome out;
  if (contenders <= 0) return out;
  double p = acb_transmit_probability(config, contenders);
  const int n_s = config.num_preambles;

  // participant device -> (contender index, preamble, timing group)
  std::vector<int> idx, preamble, timing;
  for (long d = 0; d < contenders; ++d) {
    if (rng.uniform() >= p) continue;
    idx.push_back(static_cast<int>(d));
    preamble.push_back(static_cast<int>(rng.uniform_int(n_s)));
    timing.push_back(config.cell.group_of_distance(
        config.cell.sample_distance(rng)));
  }
  out.participants = static_cast<long>(idx.size());

  for (int s = 0; s < n_s; ++s) {
    std::vector<int> holders;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (preamble[i] == s) holders.push_back(static_cast<int>(i));
    }
    if (holders.empty()) continue;
    if (config.scheme == AcbScheme::original) {
      if (holders.size() == 1) {
        ++out.successes;
        out.served.push_back(idx[holders[0]]);
      }
      continue;
    }
    // Timing-advance variant: pick one observed timing index uniformly.
    std::vector<int> observed;
    for (int h : holders) {
      int t = timing[h];
      if (std::find(observed.begin(), observed.end(), t) == observed.end()) {
        observed.push_back(t);
      }
    }
    int chosen = observed[rng.uniform_int(observed.size())];
    int winner = -1;
    int with_chosen = 0;
    for (int h : holders) {
      if (timing[h] == chosen) {
        ++with_chosen;
        winner = h;
      }
    }
    if (with_chosen == 1) {
      ++out.successes;
      out.served.push_back(idx[winner]);
    }
  }
  return out;
}

}  // namespace mma
