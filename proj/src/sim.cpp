//
// Project isqsim - Copyright 2026 the isqsim authors.
// SPDX-License-Identifier: Apache-2.0
//
#include "isq/sim.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace isq {

void ExperimentConfig::validate() const {
  if (n_values.empty()) throw std::invalid_argument("n_values: at least one n is required");
  for (int n : n_values)
    if (n < 1) throw std::invalid_argument("n_values: every n must be >= 1");
  if (alpha.has_value() == xi.has_value())
    throw std::invalid_argument("alpha/xi: exactly one of them must be set");
  if (alpha && !(*alpha > 0.0)) throw std::invalid_argument("alpha: must be positive");
  if (xi && (!(*xi > 0.0) || !(*xi < 1.0))) throw std::invalid_argument("xi: must lie in (0, 1)");
  if (xi)
    for (int n : n_values)
      if (n < 2) throw std::invalid_argument("n_values: schedule runs require n >= 2");
  if (sigma_values.empty()) throw std::invalid_argument("sigma_values: at least one sigma is required");
  for (double s : sigma_values)
    if (s < 0.0) throw std::invalid_argument("sigma_values: sigma must be nonnegative");
  if (decoders.empty()) throw std::invalid_argument("decoders: at least one decoder is required");
  if (trials < 1) throw std::invalid_argument("trials: must be >= 1");
  if (!(k_fraction > 0.0) || k_fraction > 1.0)
    throw std::invalid_argument("k_fraction: must lie in (0, 1]");
  if (max_exhaustive_bits < 1) throw std::invalid_argument("max_exhaustive_bits: must be >= 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon: must be positive");
  if (amp_iterations < 0) throw std::invalid_argument("amp_iterations: must be >= 0");
  Constellation::by_name(constellation);  // rejects unknown names
}

std::vector<GridPoint> experiment_grid(const ExperimentConfig& config) {
  config.validate();
  std::vector<GridPoint> grid;
  int index = 0;
  for (int n : config.n_values) {
    const Dimensions dims =
        config.alpha ? antennas_for(n, *config.alpha) : antennas_for_schedule(n, *config.xi);
    for (double sigma : config.sigma_values) {
      grid.push_back(GridPoint{index++, dims, sigma});
    }
  }
  return grid;
}

namespace {

int count_block_errors(const Vec& estimate, const Vec& truth, int dim) {
  int errors = 0;
  const Eigen::Index blocks = truth.size() / dim;
  for (Eigen::Index b = 0; b < blocks; ++b) {
    if (((estimate.segment(b * dim, dim) - truth.segment(b * dim, dim)).cwiseAbs().maxCoeff()) > 1e-12)
      ++errors;
  }
  return errors;
}

// Deterministic per-decoder skip decision; depends on the grid point only.
std::string skip_reason_for(const ExperimentConfig& config, DecoderId id, int n,
                            const Constellation& c) {
  const double point_bits = n * std::log2(static_cast<double>(c.points.size()));
  if (id == DecoderId::Ml && point_bits > config.max_exhaustive_bits + 1e-9)
    return "ml search needs " + std::to_string(point_bits) + " bits > guard " +
           std::to_string(config.max_exhaustive_bits);
  if (id == DecoderId::Grid) {
    const GridSpec spec = grid_build(c, config.epsilon, config.delta, n);
    double bits = 0.0;
    for (const auto& axis : spec.axes) bits += std::log2(static_cast<double>(axis.size()));
    if (bits > config.max_exhaustive_bits + 1e-9)
      return "grid search needs " + std::to_string(bits) + " bits > guard " +
             std::to_string(config.max_exhaustive_bits);
  }
  if (id == DecoderId::Amp && !c.is_bpsk()) return "amp supports bpsk only";
  return {};
}

}  // namespace

std::vector<TrialDecode> run_trial(const ExperimentConfig& config, const GridPoint& point,
                                   int trial_index) {
  const Constellation c = Constellation::by_name(config.constellation);
  const Rng trial_rng(derive_seed(config.master_seed, static_cast<std::uint64_t>(point.index),
                                  static_cast<std::uint64_t>(trial_index)));
  Rng instance_rng = trial_rng.split(0x10);
  const SystemInstance inst = make_instance(point.dims, c, config.fading, point.sigma, instance_rng);

  std::vector<TrialDecode> results;
  results.reserve(config.decoders.size());
  for (DecoderId id : config.decoders) {
    TrialDecode td;
    td.decoder = id;
    const std::string reason = skip_reason_for(config, id, point.dims.n_users, c);
    if (!reason.empty()) {
      td.skipped = true;
      td.skip_reason = reason;
      results.push_back(std::move(td));
      continue;
    }
    DecodeOutput out;
    switch (id) {
      case DecoderId::Ml:
        out = decode_ml(inst.channel, inst.received, c, config.max_exhaustive_bits);
        break;
      case DecoderId::Isq:
        out = decode_isq(inst.channel, inst.received, c);
        break;
      case DecoderId::Risq: {
        // Stream labelled by decoder, independent of which decoders run.
        Rng rng = trial_rng.split(0x20);
        out = decode_risq(inst.channel, inst.received, c, rng);
        break;
      }
      case DecoderId::Grid: {
        const GridSpec spec = grid_build(c, config.epsilon, config.delta, point.dims.n_users);
        out = decode_grid(inst.channel, inst.received, spec, c, config.max_exhaustive_bits);
        break;
      }
      case DecoderId::Amp:
        out = decode_amp(inst.channel, inst.received, c, config.amp_iterations);
        break;
    }
    td.symbol_errors = count_block_errors(out.estimate, inst.codeword, c.dim);
    td.residual = (inst.received - inst.channel * out.estimate).squaredNorm();
    results.push_back(std::move(td));
  }
  return results;
}

WilsonInterval wilson_interval(long long successes, long long total, double z) {
  if (total <= 0 || successes < 0 || successes > total)
    throw std::invalid_argument("wilson_interval: bad counts");
  const double nn = static_cast<double>(total);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  return WilsonInterval{std::max(0.0, center - half), std::min(1.0, center + half)};
}

ExperimentResult run_experiment(const ExperimentConfig& config, int threads) {
  config.validate();
  if (threads < 1) throw std::invalid_argument("threads: must be >= 1");
  const Constellation c = Constellation::by_name(config.constellation);
  const std::vector<GridPoint> grid = experiment_grid(config);

  ExperimentResult result;
  for (const GridPoint& point : grid) {
    // Split decoders into runnable and skipped before spending any trials.
    std::vector<DecoderId> runnable;
    for (DecoderId id : config.decoders) {
      const std::string reason = skip_reason_for(config, id, point.dims.n_users, c);
      if (reason.empty())
        runnable.push_back(id);
      else
        result.skips.push_back(SkipNote{id, point.dims.n_users, point.sigma, reason});
    }
    if (runnable.empty()) continue;

    ExperimentConfig slice = config;
    slice.decoders = runnable;

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::vector<TrialDecode>> per_trial(static_cast<std::size_t>(config.trials));
    if (threads == 1) {
      for (int t = 0; t < config.trials; ++t)
        per_trial[static_cast<std::size_t>(t)] = run_trial(slice, point, t);
    } else {
      std::atomic<int> next{0};
      std::exception_ptr first_error;
      std::mutex error_mutex;
      std::vector<std::thread> pool;
      pool.reserve(static_cast<std::size_t>(threads));
      for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&]() {
          try {
            while (true) {
              const int t = next.fetch_add(1);
              if (t >= config.trials) return;
              per_trial[static_cast<std::size_t>(t)] = run_trial(slice, point, t);
            }
          } catch (...) {
            const std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
            next.store(config.trials);  // drain remaining work
          }
        });
      }
      for (auto& th : pool) th.join();
      if (first_error) std::rethrow_exception(first_error);
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    // Order-independent aggregation: plain integer sums over the trial array.
    const int k_count = error_count_threshold(config.k_fraction, point.dims.n_users);
    for (std::size_t d = 0; d < runnable.size(); ++d) {
      SerStats st;
      st.decoder = runnable[d];
      st.n = point.dims.n_users;
      st.m = point.dims.n_antennas;
      st.alpha = point.dims.alpha;
      st.sigma = point.sigma;
      st.trials = config.trials;
      st.k_fraction = config.k_fraction;
      for (int t = 0; t < config.trials; ++t) {
        const TrialDecode& td = per_trial[static_cast<std::size_t>(t)][d];
        st.symbol_errors += td.symbol_errors;
        if (td.symbol_errors >= k_count) ++st.block_ge_k_count;
      }
      st.symbols_total = static_cast<long long>(config.trials) * point.dims.n_users;
      st.ser_point = static_cast<double>(st.symbol_errors) / static_cast<double>(st.symbols_total);
      const WilsonInterval ci = wilson_interval(st.symbol_errors, st.symbols_total);
      st.ser_ci_low = ci.low;
      st.ser_ci_high = ci.high;
      st.p_e_k_point = static_cast<double>(st.block_ge_k_count) / static_cast<double>(st.trials);
      st.wall_time_s = elapsed;
      st.per_user_consistent =
          st.ser_point <=
          config.k_fraction + st.p_e_k_point + 3.0 * (st.ser_ci_high - st.ser_ci_low) + 1e-12;
      result.stats.push_back(std::move(st));
    }
  }
  return result;
}

SweepSummary sweep_summary(std::vector<SerStats> stats) {
  if (stats.empty()) throw std::invalid_argument("sweep_summary: no stats");
  for (const SerStats& s : stats)
    if (s.decoder != stats.front().decoder || s.sigma != stats.front().sigma)
      throw std::invalid_argument("sweep_summary: stats must share decoder and sigma");
  std::sort(stats.begin(), stats.end(),
            [](const SerStats& a, const SerStats& b) { return a.n < b.n; });
  SweepSummary sum;
  sum.decoder = stats.front().decoder;
  sum.sigma = stats.front().sigma;
  sum.non_increasing_within_ci = true;
  for (std::size_t i = 0; i + 1 < stats.size(); ++i)
    if (stats[i + 1].ser_ci_low > stats[i].ser_ci_high) sum.non_increasing_within_ci = false;
  sum.rows = std::move(stats);
  return sum;
}

std::vector<SweepSummary> sweep_summaries(const std::vector<SerStats>& stats) {
  std::vector<SweepSummary> out;
  std::vector<std::pair<DecoderId, double>> seen;
  for (const SerStats& s : stats) {
    const std::pair<DecoderId, double> key{s.decoder, s.sigma};
    bool found = false;
    for (const auto& k : seen) found = found || k == key;
    if (found) continue;
    seen.push_back(key);
    std::vector<SerStats> group;
    for (const SerStats& t : stats)
      if (t.decoder == key.first && t.sigma == key.second) group.push_back(t);
    out.push_back(sweep_summary(std::move(group)));
  }
  return out;
}

}  // namespace isq
