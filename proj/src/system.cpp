#include "mma/system.hpp"

#include "mma/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace mma {

void DeviceQueueState::add_arrivals(long count, long frame) {
  for (long i = 0; i < count; ++i) {
    backlog.push_back({next_id++, frame});
  }
}

namespace {

// Random-stream lanes inside a frame.
enum : std::uint64_t {
  kLaneArrivals = 1,
  kLaneAssign = 2,
  kLanePrach = 3,
  kLaneWeights = 4,
  kLaneEfficiency = 5,
  kLaneMessages = 6,
  kLaneAcb = 7,
  kLaneGraph = 8,
};

std::shared_ptr<const PreambleBank> cached_bank(int n_zc, int n_s, int n_t,
                                                int tau_samples) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int, int>,
                  std::shared_ptr<const PreambleBank>>
      cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(n_zc, n_s, n_t, tau_samples);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  int n_cs = n_t * tau_samples;
  auto bank =
      std::make_shared<const PreambleBank>(n_zc, n_s, n_t, n_cs, tau_samples);
  cache.emplace(key, bank);
  return bank;
}

struct Cell {
  int preamble = 0;
  int timing = 0;
  int estimated = 0;
  std::vector<int> devices;  // indices into the contender list
};

FrameReport run_acb_frame(const SystemParams& params, DeviceQueueState& queue,
                          long frame_index, RandomStream& rng) {
  FrameReport report;
  report.contenders = static_cast<long>(queue.backlog.size());
  if (report.contenders == 0) return report;

  AcbConfig cfg;
  cfg.scheme = params.scheme == AccessScheme::acb_original
                   ? AcbScheme::original
                   : AcbScheme::timing_advance;
  cfg.num_preambles = params.num_preambles;
  cfg.cell = params.cell;
  cfg.ring_depth_m = params.cell.ring_width_m();
  cfg.probability_form = params.acb_form;

  RandomStream acb_rng = rng.split(kLaneAcb);
  AcbOutcome outcome = acb_frame_outcome(cfg, report.contenders, acb_rng);

  // Each winner gets one RB; the budget caps how many can be scheduled.
  std::vector<int> served = outcome.served;
  if (static_cast<long>(served.size()) > params.budget.data_rbs) {
    served.resize(params.budget.data_rbs);
  }
  std::vector<bool> is_served(queue.backlog.size(), false);
  for (int s : served) is_served[s] = true;

  std::vector<BacklogDevice> remaining;
  for (std::size_t i = 0; i < queue.backlog.size(); ++i) {
    if (is_served[i]) {
      queue.served_log.push_back({queue.backlog[i].id,
                                  queue.backlog[i].arrival_frame,
                                  frame_index});
    } else {
      remaining.push_back(queue.backlog[i]);
    }
  }
  queue.backlog = std::move(remaining);
  report.served = static_cast<long>(served.size());
  report.rbs_used = report.served;
  return report;
}

struct DataPhasePlan {
  std::vector<Cell> cells;  // active, in decode (descending weight) order
  WeightProfile realized;
  std::vector<int> device_order;  // contender index per decode position
  double target_snr = 0.0;
  long data_rbs = 0;
  long overhead_rbs = 0;
};

// Designs weights for the active cells and plans the RB allocation.
// Returns nullopt when the budget cannot fit even the current set.
std::optional<DataPhasePlan> plan_data_phase(const SystemParams& params,
                                             std::vector<Cell> cells,
                                             RandomStream& weights_rng,
                                             long* deferred_devices) {
  const double sym_rb = params.budget.symbols_per_rb();
  while (true) {
    long est_total = 0;
    long true_total = 0;
    for (const auto& c : cells) {
      est_total += c.estimated;
      true_total += static_cast<long>(c.devices.size());
    }
    if (est_total == 0) return std::nullopt;

    double gamma0 = params.fixed_target_snr > 0.0
                        ? params.fixed_target_snr
                        : adaptive_target_snr(est_total, params.gamma_max,
                                              params.gamma0_max);

    DataPhasePlan plan;
    plan.cells = cells;
    plan.target_snr = gamma0;

    if (params.scheme == AccessScheme::proposed_grw) {
      // Larger groups are decoded later; cap gamma_0 at group feasibility.
      std::sort(plan.cells.begin(), plan.cells.end(),
                [](const Cell& a, const Cell& b) {
                  if (a.estimated != b.estimated)
                    return a.estimated < b.estimated;
                  return std::make_pair(a.preamble, a.timing) <
                         std::make_pair(b.preamble, b.timing);
                });
      int max_r = 0;
      for (const auto& c : plan.cells) max_r = std::max(max_r, c.estimated);
      if (max_r > 1) {
        gamma0 = std::min(gamma0, 0.95 / (max_r - 1));
      }
      plan.target_snr = gamma0;
      std::vector<int> est_counts;
      for (const auto& c : plan.cells) est_counts.push_back(c.estimated);
      WeightProfile design = grw_profile(est_counts, gamma0);

      // Realized profile: designed per-group weights, true memberships.
      plan.realized.design = WeightDesign::grouped;
      plan.realized.target_snr = gamma0;
      plan.realized.noise_variance = design.noise_variance;
      int pos = 0;
      for (std::size_t g = 0; g < plan.cells.size(); ++g) {
        double w = design.weights[pos];
        pos += plan.cells[g].estimated;
        if (plan.cells[g].devices.empty()) continue;
        plan.realized.multiplicities.push_back(
            static_cast<int>(plan.cells[g].devices.size()));
        for (int d : plan.cells[g].devices) {
          plan.realized.weights.push_back(w);
          plan.device_order.push_back(d);
        }
      }
      plan.realized.total_snr =
          plan.realized.sum_power() / plan.realized.noise_variance;

      // BPSK carries at most one bit per use; cap the planned rate.
      double plan_rate = params.planning_efficiency *
                         std::min(std::log2(1.0 + gamma0), 1.0);
      plan.data_rbs = required_rbs(params.message_bits, plan_rate,
                                   sym_rb, 1.0);
      plan.overhead_rbs = 0;  // groups are known from load estimation
    } else {
      // Random selection among the est_total optimal coefficients.
      WeightProfile design = exw_optimal_weights(
          static_cast<int>(std::max<long>(est_total, 1)), gamma0);
      std::vector<std::vector<int>> slot_devices(design.num_devices());
      // Deterministic order: walk cells, then devices within a cell.
      for (const auto& c : cells) {
        for (int d : c.devices) {
          int slot =
              static_cast<int>(weights_rng.uniform_int(design.num_devices()));
          slot_devices[slot].push_back(d);
        }
      }
      plan.realized.design = WeightDesign::exponential_random;
      plan.realized.target_snr = gamma0;
      plan.realized.noise_variance = design.noise_variance;
      for (int slot = 0; slot < design.num_devices(); ++slot) {
        if (slot_devices[slot].empty()) continue;
        plan.realized.multiplicities.push_back(
            static_cast<int>(slot_devices[slot].size()));
        for (int d : slot_devices[slot]) {
          plan.realized.weights.push_back(design.weights[slot]);
          plan.device_order.push_back(d);
        }
      }
      plan.realized.total_snr =
          plan.realized.sum_power() / plan.realized.noise_variance;

      // The BS learns the realized multiplicities from the signalling
      // sequences before allocating data RBs, so it can plan at the
      // realized minimum SNR.
      double min_snr = true_total > 0 ? min_effective_snr(plan.realized)
                                      : gamma0;
      double plan_rate = params.planning_efficiency *
                         std::min(std::log2(1.0 + min_snr), 1.0);
      plan.data_rbs = required_rbs(params.message_bits, plan_rate,
                                   sym_rb, 1.0);
      plan.overhead_rbs =
          weight_overhead_rbs(params.overhead_delta, est_total,
                              params.overhead_snr,
                              params.budget.rb_bandwidth_hz,
                              params.budget.rb_duration_s);
    }

    if (plan.data_rbs != kUnservable &&
        plan.data_rbs + plan.overhead_rbs <= params.budget.data_rbs) {
      return plan;
    }

    // Does not fit: send not-to-transmit to one more cell and retry.
    if (cells.empty()) return std::nullopt;
    std::size_t evict = 0;
    switch (params.deferral) {
      case DeferralPolicy::largest_first:
        for (std::size_t i = 1; i < cells.size(); ++i) {
          if (cells[i].estimated > cells[evict].estimated) evict = i;
        }
        break;
      case DeferralPolicy::smallest_first:
        for (std::size_t i = 1; i < cells.size(); ++i) {
          if (cells[i].estimated < cells[evict].estimated) evict = i;
        }
        break;
      case DeferralPolicy::random_group:
        evict = static_cast<std::size_t>(weights_rng.uniform_int(cells.size()));
        break;
    }
    *deferred_devices += static_cast<long>(cells[evict].devices.size());
    cells.erase(cells.begin() + evict);
  }
}

FrameReport run_proposed_frame(const SystemParams& params,
                               DeviceQueueState& queue, long frame_index,
                               RandomStream& rng) {
  FrameReport report;
  report.contenders = static_cast<long>(queue.backlog.size());
  if (report.contenders == 0) return report;

  const int n_s = params.num_preambles;
  const int n_t = params.cell.timing_groups();

  // RA phase: fresh preamble and timing draws for every contender.
  RandomStream assign_rng = rng.split(kLaneAssign);
  std::vector<int> preamble(report.contenders), timing(report.contenders);
  LoadMatrix true_load(n_s, n_t);
  for (long d = 0; d < report.contenders; ++d) {
    preamble[d] = static_cast<int>(assign_rng.uniform_int(n_s));
    timing[d] = params.cell.group_of_distance(
        params.cell.sample_distance(assign_rng));
    ++true_load.at(preamble[d], timing[d]);
  }

  LoadMatrix estimated = true_load;
  if (params.estimation == EstimationMode::algorithm1) {
    auto bank = cached_bank(params.n_zc, n_s, n_t, params.tau_samples);
    double noise_var = std::pow(10.0, -params.prach_snr_db / 10.0);
    RandomStream prach_rng = rng.split(kLanePrach);
    PrachObservation obs =
        synthesize_prach(true_load, *bank, noise_var, prach_rng);
    estimated = estimate_load(obs, *bank, params.estimator).counts;
  }

  // Cells the BS schedules; devices in unscheduled cells are deferred.
  std::vector<Cell> cells;
  {
    std::map<std::pair<int, int>, std::size_t> index;
    for (int i = 0; i < n_s; ++i) {
      for (int j = 1; j <= n_t; ++j) {
        if (estimated.at(i, j) > 0) {
          index[{i, j}] = cells.size();
          cells.push_back({i, j, estimated.at(i, j), {}});
        }
      }
    }
    for (long d = 0; d < report.contenders; ++d) {
      auto it = index.find({preamble[d], timing[d]});
      if (it != index.end()) {
        cells[it->second].devices.push_back(static_cast<int>(d));
      } else {
        ++report.deferred;
      }
    }
  }

  RandomStream weights_rng = rng.split(kLaneWeights);
  long deferred_by_budget = 0;
  auto plan = plan_data_phase(params, std::move(cells), weights_rng,
                              &deferred_by_budget);
  report.deferred += deferred_by_budget;
  if (!plan || plan->device_order.empty()) {
    if (plan) report.rbs_used = 0;
    return report;
  }

  report.target_snr = plan->target_snr;
  report.transmitted = static_cast<long>(plan->device_order.size());
  report.rbs_used = plan->data_rbs + plan->overhead_rbs;
  const double sym_rb = params.budget.symbols_per_rb();
  const double rate_used =
      params.message_bits / (plan->data_rbs * sym_rb);
  report.min_rate = rate_used;

  std::vector<bool> success(plan->device_order.size(), false);
  if (params.mode == SimMode::fast) {
    RandomStream eff_rng = rng.split(kLaneEfficiency);
    double failed_power = 0.0;
    double noise = plan->realized.noise_variance;
    // Walk decode order; a failed layer's power stays as interference.
    double tail = plan->realized.sum_power();
    for (std::size_t p = 0; p < plan->device_order.size(); ++p) {
      double w2 = plan->realized.weights[p] * plan->realized.weights[p];
      tail -= w2;
      double snr = w2 / (tail + noise + failed_power);
      double eff = eff_rng.uniform(params.efficiency_lo, params.efficiency_hi);
      if (eff * std::min(std::log2(1.0 + snr), 1.0) + 1e-12 >= rate_used) {
        success[p] = true;
      } else {
        failed_power += w2;
      }
    }
  } else {
    // Full pipeline: encode, superpose, and run multistage decoding.
    RandomStream msg_rng = rng.split(kLaneMessages);
    RandomStream graph_rng = rng.split(kLaneGraph);
    std::uint64_t frame_graph_base = graph_rng.next_u64();
    long frame_symbols = static_cast<long>(plan->data_rbs * sym_rb);

    std::vector<DeviceCodec> codecs;
    std::vector<std::vector<double>> device_symbols;
    for (std::size_t p = 0; p < plan->device_order.size(); ++p) {
      int d = plan->device_order[p];
      BitVector message(params.message_bits);
      for (auto& b : message) b = static_cast<std::uint8_t>(msg_rng.bit());
      RaptorCodeSpec spec;
      spec.message_length = static_cast<int>(params.message_bits);
      spec.graph_seed =
          device_graph_seed(frame_graph_base, preamble[d], timing[d]);
      DeviceCodec codec = make_rateless_codec(
          spec, message, seed_combine(frame_graph_base, 0x0ada + d));
      std::vector<double> x = modulated_prefix(codec, frame_symbols);
      device_symbols.push_back(std::move(x));
      codecs.push_back(std::move(codec));
    }
    RandomStream chan_rng = rng.split(kLanePrach + 100);
    LayeredFrame frame =
        superpose(device_symbols, plan->realized, chan_rng);
    MsdConfig msd = params.msd;
    msd.llr_form = params.llr_form;
    msd.symbols_per_rb = sym_rb;
    DecodeReport dec = decode_multistage(frame, codecs, msd);
    for (std::size_t p = 0;
         p < plan->device_order.size() && p < dec.per_stage.size(); ++p) {
      success[p] = dec.per_stage[p].success;
    }
  }

  std::vector<bool> is_served(queue.backlog.size(), false);
  for (std::size_t p = 0; p < plan->device_order.size(); ++p) {
    if (success[p]) {
      is_served[plan->device_order[p]] = true;
      ++report.served;
    } else {
      ++report.outages;
    }
  }
  std::vector<BacklogDevice> remaining;
  for (std::size_t i = 0; i < queue.backlog.size(); ++i) {
    if (is_served[i]) {
      queue.served_log.push_back({queue.backlog[i].id,
                                  queue.backlog[i].arrival_frame,
                                  frame_index});
    } else {
      remaining.push_back(queue.backlog[i]);
    }
  }
  queue.backlog = std::move(remaining);
  return report;
}

}  // namespace

FrameReport run_frame(const SystemParams& params, DeviceQueueState& queue,
                      long frame_index, long new_arrivals, RandomStream& rng) {
  queue.add_arrivals(new_arrivals, frame_index);
  FrameReport report;
  if (params.scheme == AccessScheme::acb_original ||
      params.scheme == AccessScheme::acb_ta) {
    report = run_acb_frame(params, queue, frame_index, rng);
  } else {
    report = run_proposed_frame(params, queue, frame_index, rng);
  }
  report.arrivals = new_arrivals;
  return report;
}

namespace {

struct SeedRun {
  double served_per_frame = 0.0;
  double devices_per_rb = 0.0;
  double delay_frames = 0.0;
  long arrivals = 0, served = 0, rbs = 0;
  std::vector<FrameReport> frames;
};

}  // namespace

ScenarioResult run_scenario(const SystemParams& params, double lambda,
                            int frames, std::uint64_t seed_base,
                            int num_seeds) {
  if (frames < 1 || num_seeds < 1) {
    throw std::invalid_argument("run_scenario: need frames and seeds");
  }

  // Frames are sequential (the backlog carries over); seeds are independent
  // replicas and run concurrently.
  auto runs = parallel_map<SeedRun>(num_seeds, [&](int s) {
    SeedRun run;
    DeviceQueueState queue;
    for (int f = 0; f < frames; ++f) {
      RandomStream frame_rng = seed_stream(seed_base, s, 1000 + f);
      RandomStream arrivals_rng = frame_rng.split(kLaneArrivals);
      long arrivals = sample_arrivals(lambda, arrivals_rng);
      FrameReport rep = run_frame(params, queue, f, arrivals, frame_rng);
      run.served += rep.served;
      run.rbs += rep.rbs_used;
      run.arrivals += arrivals;
      if (s == 0) run.frames.push_back(rep);
    }
    run.served_per_frame = static_cast<double>(run.served) / frames;
    run.devices_per_rb =
        run.rbs > 0 ? static_cast<double>(run.served) / run.rbs : 0.0;
    double delay_sum = 0.0;
    for (const auto& rec : queue.served_log) {
      delay_sum += static_cast<double>(rec.service_frame - rec.arrival_frame);
    }
    run.delay_frames = queue.served_log.empty()
                           ? 0.0
                           : delay_sum / queue.served_log.size();
    return run;
  });

  ScenarioResult result;
  std::vector<double> served_per_frame, devices_per_rb, delay_frames;
  for (const auto& run : runs) {
    served_per_frame.push_back(run.served_per_frame);
    devices_per_rb.push_back(run.devices_per_rb);
    delay_frames.push_back(run.delay_frames);
    result.total_arrivals += run.arrivals;
    result.total_served += run.served;
    result.total_rbs += run.rbs;
  }
  result.frames = runs[0].frames;

  auto mean_of = [](const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  };
  auto stderr_of = [&](const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / (v.size() - 1) / v.size());
  };
  result.mean_served_per_frame = mean_of(served_per_frame);
  result.stderr_served_per_frame =
      stderr_of(served_per_frame, result.mean_served_per_frame);
  result.mean_devices_per_rb = mean_of(devices_per_rb);
  result.stderr_devices_per_rb =
      stderr_of(devices_per_rb, result.mean_devices_per_rb);
  result.mean_delay_frames = mean_of(delay_frames);
  result.stderr_delay_frames =
      stderr_of(delay_frames, result.mean_delay_frames);
  result.mean_delay_seconds =
      result.mean_delay_frames * params.budget.frame_length_s;
  result.served_fraction =
      result.total_arrivals > 0
          ? static_cast<double>(result.total_served) / result.total_arrivals
          : 0.0;
  return result;
}

}  // namespace mma
