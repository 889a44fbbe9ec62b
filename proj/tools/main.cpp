// Command-line entry point: figure simulations, analytic oracle queries,
// and the single-link codec benchmark.
#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "mma/experiment.hpp"

namespace {

std::vector<std::string> known_config_keys() {
  return {"mode",         "seed",
          "trials",       "frames",
          "num_seeds",    "k",
          "n_s",          "n_t",
          "n_zc",         "tau_samples",
          "ws_hz",        "tau_s",
          "t_f",          "data_rbs",
          "cell_radius_m", "delay_quantum_s",
          "lambdas",      "device_counts",
          "gamma_db",     "gamma_max_db",
          "snr_db",       "gamma0_max_db",
          "prach_snr_db", "planning_efficiency",
          "efficiency_lo", "efficiency_hi",
          "overhead_delta", "overhead_snr_db",
          "corr_threshold_scale", "cleanup_threshold_scale", "energy_margin",
          "max_passes",   "estimation",
          "deferral",     "llr_form",
          "acb_p"};
}

void emit(const mma::CsvTable& table, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << table.to_string();
  } else {
    table.write(out_path);
    std::cerr << "wrote " << out_path << " (" << table.rows.size()
              << " rows)\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator for grant-light massive access over superposed "
               "rateless layers"};
  app.require_subcommand(1);

  // --- simulate ---
  auto* sim = app.add_subcommand("simulate", "run a figure experiment");
  std::string figure = "fig9", config_path, out_path, mode, llr_form, acb_p;
  std::uint64_t seed = 0;
  long trials = -1, frames = -1, num_seeds = -1;
  std::vector<std::string> overrides;
  sim->add_option("--figure", figure,
                  "fig3|fig5|fig6|fig7|fig8|fig9|fig10|fig11|custom");
  sim->add_option("--config", config_path, "key=value configuration file");
  sim->add_option("--out", out_path, "output CSV path ('-' for stdout)");
  sim->add_option("--seed", seed, "seed base");
  sim->add_option("--trials", trials, "Monte Carlo trials");
  sim->add_option("--frames", frames, "frames per scenario");
  sim->add_option("--num-seeds", num_seeds, "independent seeds per scenario");
  sim->add_option("--mode", mode, "fast|full");
  sim->add_option("--llr-form", llr_form, "standard|paper");
  sim->add_option("--acb-p", acb_p, "standard|paper");
  sim->add_option("--set", overrides, "extra key=value overrides")
      ->expected(-1);

  // --- analyze ---
  auto* ana = app.add_subcommand("analyze", "evaluate closed-form oracles");
  std::string op = "min-snr-cdf", grid_spec = "0:0.05:2", ana_out;
  long ana_L = 0;
  double ana_lambda = 0.0, ana_gamma_db = 20.0;
  ana->add_option("--op", op, "min-snr-cdf");
  ana->add_option("--L", ana_L, "condition on L devices");
  ana->add_option("--lambda", ana_lambda, "Poisson mixture rate");
  ana->add_option("--gamma-db", ana_gamma_db,
                  "total SNR in dB (conditional mode)");
  ana->add_option("--grid", grid_spec, "x/gamma_0 grid, lo:step:hi");
  ana->add_option("--out", ana_out, "output CSV path");

  // --- codec-bench ---
  auto* bench = app.add_subcommand(
      "codec-bench", "single-device rate-efficiency histogram");
  std::string bench_out;
  double bench_snr = -10.0;
  long bench_trials = 100, bench_k = 1024;
  std::uint64_t bench_seed = 1;
  bench->add_option("--snr-db", bench_snr, "channel SNR in dB");
  bench->add_option("--trials", bench_trials, "number of trials");
  bench->add_option("--k", bench_k, "message length in bits");
  bench->add_option("--seed", bench_seed, "seed base");
  bench->add_option("--out", bench_out, "output CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      mma::KeyValueConfig config;
      if (!config_path.empty()) {
        config = mma::KeyValueConfig::from_file(config_path);
      }
      config.apply_env(known_config_keys());
      for (const auto& kv : overrides) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) {
          throw std::runtime_error("--set expects key=value, got " + kv);
        }
        config.set(kv.substr(0, eq), kv.substr(eq + 1));
      }
      if (sim->count("--seed")) config.set("seed", std::to_string(seed));
      if (sim->count("--trials")) config.set("trials", std::to_string(trials));
      if (sim->count("--frames")) config.set("frames", std::to_string(frames));
      if (sim->count("--num-seeds")) {
        config.set("num_seeds", std::to_string(num_seeds));
      }
      if (!mode.empty()) config.set("mode", mode);
      if (!llr_form.empty()) config.set("llr_form", llr_form);
      if (!acb_p.empty()) config.set("acb_p", acb_p);

      mma::ExperimentSpec spec = mma::ExperimentSpec::from_config(figure,
                                                                  config);
      config.check_all_recognized();
      if (!mma::is_prime(static_cast<int>(spec.n_zc))) {
        std::cerr << "note: n_zc = " << spec.n_zc
                  << " is not prime; sequence shifts are only approximately "
                     "orthogonal (use a prime length or strict mode for "
                     "ideal correlation)\n";
      }
      emit(mma::run_experiment(spec), out_path);
    } else if (ana->parsed()) {
      if (op != "min-snr-cdf") {
        throw std::runtime_error("unknown analyze op: " + op);
      }
      emit(mma::analyze_min_snr_cdf(ana_L, ana_lambda, ana_gamma_db,
                                    mma::parse_number_list(grid_spec)),
           ana_out);
    } else if (bench->parsed()) {
      mma::KeyValueConfig config;
      config.set("snr_db", std::to_string(bench_snr));
      config.set("trials", std::to_string(bench_trials));
      config.set("k", std::to_string(bench_k));
      config.set("seed", std::to_string(bench_seed));
      mma::ExperimentSpec spec = mma::ExperimentSpec::from_config("fig5",
                                                                  config);
      config.check_all_recognized();
      emit(mma::run_experiment(spec), bench_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
