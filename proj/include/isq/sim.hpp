//
// Project isqsim - Copyright 2026 the isqsim authors.
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "isq/bounds.hpp"
#include "isq/decoders.hpp"

namespace isq {

struct ExperimentConfig {
  std::vector<int> n_values;
  std::optional<double> alpha;  // exactly one of alpha / xi
  std::optional<double> xi;
  std::vector<double> sigma_values;
  Fading fading = Fading::Gaussian;
  std::string constellation = "bpsk";
  std::vector<DecoderId> decoders;
  int trials = 100;
  std::uint64_t master_seed = 1;
  double k_fraction = 0.02;
  int max_exhaustive_bits = 24;
  double epsilon = 0.25;  // grid decoder pitch
  double delta = 0.0;     // grid decoder offset, applied per coordinate
  int amp_iterations = 50;

  void validate() const;  // throws invalid_argument naming the offending key
};

// One (n, sigma) cell of the experiment grid.
struct GridPoint {
  int index = 0;  // position in the deterministic grid enumeration
  Dimensions dims;
  double sigma = 0.0;
};

std::vector<GridPoint> experiment_grid(const ExperimentConfig& config);

struct TrialDecode {
  DecoderId decoder;
  bool skipped = false;
  std::string skip_reason;
  int symbol_errors = 0;
  double residual = 0.0;  // ||y - H estimate||^2
};

// Decode one realized instance with every configured decoder. The instance
// and all decoder randomness derive from (master_seed, grid index, trial
// index) only, so trials can run in any order on any thread.
std::vector<TrialDecode> run_trial(const ExperimentConfig& config, const GridPoint& point,
                                   int trial_index);

struct SerStats {
  DecoderId decoder;
  int n = 0;
  int m = 0;
  double alpha = 0.0;
  double sigma = 0.0;
  int trials = 0;
  long long symbol_errors = 0;
  long long symbols_total = 0;
  double ser_point = 0.0;
  double ser_ci_low = 0.0;
  double ser_ci_high = 0.0;
  long long block_ge_k_count = 0;  // trials with >= ceil(k n) symbol errors
  double p_e_k_point = 0.0;
  double k_fraction = 0.0;
  double wall_time_s = 0.0;  // measurement only; never written to result files
  bool per_user_consistent = true;
};

struct SkipNote {
  DecoderId decoder;
  int n = 0;
  double sigma = 0.0;
  std::string reason;
};

struct ExperimentResult {
  std::vector<SerStats> stats;
  std::vector<SkipNote> skips;
};

ExperimentResult run_experiment(const ExperimentConfig& config, int threads = 1);

struct WilsonInterval {
  double low = 0.0;
  double high = 0.0;
};

// 95% score interval by default (z = 1.96); well-behaved at zero counts.
WilsonInterval wilson_interval(long long successes, long long total, double z = 1.96);

struct SweepSummary {
  DecoderId decoder;
  double sigma = 0.0;
  bool non_increasing_within_ci = true;
  std::vector<SerStats> rows;  // sorted by n
};

// pre: all stats share decoder and sigma. Non-increase between consecutive n
// is plausible iff ci_low(next) <= ci_high(prev); the verdict is the
// conjunction over consecutive pairs.
SweepSummary sweep_summary(std::vector<SerStats> stats);

// Group stats by (decoder, sigma), preserving first-seen order.
std::vector<SweepSummary> sweep_summaries(const std::vector<SerStats>& stats);

}  // namespace isq
