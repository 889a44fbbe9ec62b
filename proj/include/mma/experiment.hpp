// Experiment harness: scenario configuration, deterministic seeding,
// parallel Monte Carlo trials, and CSV emission for each reproduced figure.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mma/parallel.hpp"
#include "mma/system.hpp"

namespace mma {

// Flat key=value configuration with file, environment (MMA_<KEY>), and
// command-line layers.  Every key must be recognized by the experiment that
// runs; unknown keys abort at startup.
class KeyValueConfig {
 public:
  static KeyValueConfig from_file(const std::string& path);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  // Typed getters mark keys as recognized.
  std::string get_string(const std::string& key, const std::string& dflt);
  double get_double(const std::string& key, double dflt);
  long get_long(const std::string& key, long dflt);
  std::uint64_t get_u64(const std::string& key, std::uint64_t dflt);
  std::vector<double> get_list(const std::string& key,
                               std::vector<double> dflt);

  // Pull MMA_<KEY> overrides for every key this config knows about plus the
  // given extra names.
  void apply_env(const std::vector<std::string>& known_keys);

  // Throws if any present key was never recognized by a getter.
  void check_all_recognized() const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
  std::map<std::string, bool> recognized_;
};

// "a,b,c" or "lo:step:hi" (inclusive).
std::vector<double> parse_number_list(const std::string& text);

struct CsvTable {
  std::vector<std::pair<std::string, std::string>> metadata;  // header keys
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(const std::vector<double>& values);
  void add_row_mixed(const std::vector<std::string>& values);
  // The timestamp line is the only non-reproducible output line.
  std::string to_string(bool with_timestamp = true) const;
  void write(const std::string& path, bool with_timestamp = true) const;
};

std::string format_double(double v);

// Scenario description for one figure run; every parameter lands in the CSV
// header so the output is reproducible from its own metadata.
struct ExperimentSpec {
  std::string figure = "fig9";  // fig3|fig5|fig6|fig7|fig8|fig9|fig10|fig11
  std::string mode = "fast";    // fast | full
  std::uint64_t seed = 1;
  long trials = 0;  // 0 -> per-figure default
  long frames = 0;
  long num_seeds = 0;

  long k = 1024;
  long n_s = 0;  // 0 -> per-figure default
  long n_t = 20;
  long n_zc = 0;
  long tau_samples = 1;
  double ws_hz = 1.0e6;
  double tau_s = 1.0e-3;
  double t_f = 0.1;
  long data_rbs = 100;
  double cell_radius_m = 1500.0;
  double delay_quantum_s = 8.0 * kBasicTimeUnitSeconds;

  std::vector<double> lambdas;        // arrival-rate sweep
  std::vector<double> device_counts;  // L sweep
  std::vector<double> gamma_db;       // total-SNR / target-SNR sweep
  std::vector<double> gamma_max_db;   // adaptive power cap sweep
  std::vector<double> snr_db;         // codec-bench channel SNR sweep
  double gamma0_max_db = 10.0;
  double prach_snr_db = 0.0;

  double planning_efficiency = 0.65;
  double efficiency_lo = 0.65;
  double efficiency_hi = 0.88;
  double overhead_delta = 1.0;
  double overhead_snr_db = 0.0;
  double corr_threshold_scale = 0.75;
  double cleanup_threshold_scale = 0.55;
  double energy_margin = 1.1;
  long max_passes = 50;
  std::string estimation = "algorithm1";  // or "ideal"
  std::string deferral = "largest_first";
  std::string llr_form = "standard";  // or "paper"
  std::string acb_p = "standard";     // or "paper"

  static ExperimentSpec from_config(const std::string& figure,
                                    KeyValueConfig& config);
  std::vector<std::pair<std::string, std::string>> metadata() const;
  SystemParams system_params(AccessScheme scheme) const;
};

// Runs the figure experiment named in the spec.
CsvTable run_experiment(const ExperimentSpec& spec);

// Single-device rateless link at one SNR: symbols consumed at first decode
// success and the realized rate efficiency.
struct LinkTrialResult {
  bool success = false;
  long symbols_consumed = 0;
  double realized_rate = 0.0;
  double efficiency = 0.0;
};

LinkTrialResult run_link_trial(long message_bits, double snr_db,
                               std::uint64_t base_seed, long trial,
                               const MsdConfig& msd = {});

// analyze subcommand: evaluate the min-SNR cdf oracle on a grid of
// x / gamma_0 values.  Conditional on L when L > 0, otherwise the Poisson
// mixture with the given lambda.
CsvTable analyze_min_snr_cdf(long L, double lambda, double gamma_db,
                             const std::vector<double>& grid);

}  // namespace mma
