#include "mma/ra.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mma {

int CellGeometry::group_of_distance(double r) const {
  int n_t = timing_groups();
  int g = static_cast<int>(std::ceil(r / ring_width_m()));
  if (g < 1) g = 1;
  if (g > n_t) g = n_t;
  return g;
}

double CellGeometry::sample_distance(RandomStream& rng) const {
  return radius_m * std::sqrt(rng.uniform());
}

long LoadMatrix::total() const {
  return std::accumulate(counts.begin(), counts.end(), 0L);
}

long sample_arrivals(double lambda, RandomStream& rng) {
  if (lambda < 0.0) throw std::invalid_argument("arrival rate < 0");
  return rng.poisson(lambda);
}

LoadMatrix assign_devices(long num_devices, int num_preambles,
                          const CellGeometry& geometry, RandomStream& rng) {
  LoadMatrix load(num_preambles, geometry.timing_groups());
  for (long d = 0; d < num_devices; ++d) {
    int preamble = static_cast<int>(rng.uniform_int(num_preambles));
    int group = geometry.group_of_distance(geometry.sample_distance(rng));
    ++load.at(preamble, group);
  }
  return load;
}

PrachObservation synthesize_prach(const LoadMatrix& load,
                                  const PreambleBank& bank,
                                  double noise_variance, RandomStream& rng) {
  if (load.num_preambles > bank.num_preambles() ||
      load.num_timing_groups > bank.num_timing_groups()) {
    throw std::invalid_argument("prach: load cell outside preamble bank");
  }
  PrachObservation obs;
  obs.noise_variance = noise_variance;
  obs.per_device_power = 1.0;
  obs.samples.assign(bank.n_zc(), cplx(0.0, 0.0));
  for (int i = 0; i < load.num_preambles; ++i) {
    for (int j = 1; j <= load.num_timing_groups; ++j) {
      int n = load.at(i, j);
      if (n == 0) continue;
      const Preamble& p = bank.at(i, j);
      for (int k = 0; k < bank.n_zc(); ++k) {
        obs.samples[k] += static_cast<double>(n) * p.samples[k];
      }
    }
  }
  if (noise_variance > 0.0) {
    double comp_sigma = std::sqrt(noise_variance / 2.0);
    for (auto& s : obs.samples) {
      s += cplx(rng.gaussian(0.0, comp_sigma), rng.gaussian(0.0, comp_sigma));
    }
  }
  return obs;
}

namespace {

double energy(const std::vector<cplx>& v) {
  double e = 0.0;
  for (const auto& s : v) e += std::norm(s);
  return e;
}

}  // namespace

LoadEstimate estimate_load(const PrachObservation& obs,
                           const PreambleBank& bank,
                           const LoadEstimatorConfig& config) {
  const int n_zc = bank.n_zc();
  const double amp = std::sqrt(obs.per_device_power);
  double corr_th = config.correlation_threshold_scale * n_zc * amp;
  const double energy_th = n_zc * obs.noise_variance * config.energy_margin;

  LoadEstimate result;
  result.counts = LoadMatrix(bank.num_preambles(), bank.num_timing_groups());
  std::vector<cplx> residual = obs.samples;
  bool cleanup = false;

  double res_energy = energy(residual);
  while (res_energy > energy_th && result.passes < config.max_passes) {
    ++result.passes;
    bool any_detected = false;
    for (int i = 0; i < bank.num_preambles(); ++i) {
      for (int j = 1; j <= bank.num_timing_groups(); ++j) {
        const Preamble& p = bank.at(i, j);
        cplx corr = correlate_at(residual, p.samples);
        bool hit = config.gate == CorrelationGate::coherent
                       ? corr.real() > corr_th
                       : std::abs(corr) > corr_th;
        if (!hit) continue;
        ++result.counts.at(i, j);
        for (int k = 0; k < n_zc; ++k) residual[k] -= p.samples[k];
        any_detected = true;
      }
    }
    res_energy = energy(residual);
    if (!any_detected) {
      // A repeat sweep at this gate would detect nothing new; lower the
      // gate once for a cleanup phase, then stop.
      if (!cleanup && config.cleanup_threshold_scale > 0.0 &&
          config.cleanup_threshold_scale <
              config.correlation_threshold_scale) {
        cleanup = true;
        corr_th = config.cleanup_threshold_scale * n_zc * amp;
        continue;
      }
      break;
    }
  }
  result.hit_pass_cap =
      result.passes >= config.max_passes && res_energy > energy_th;
  result.residual_energy = res_energy;
  return result;
}

double estimation_accuracy(const LoadMatrix& estimate,
                           const LoadMatrix& truth) {
  if (estimate.num_preambles != truth.num_preambles ||
      estimate.num_timing_groups != truth.num_timing_groups) {
    throw std::invalid_argument("estimation_accuracy: shape mismatch");
  }
  long est = estimate.total();
  long act = truth.total();
  if (act == 0) {
    return est == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return static_cast<double>(est - act) / static_cast<double>(act);
}

}  // namespace mma
