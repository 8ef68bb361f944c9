//
// Project isqsim - Copyright 2026 the isqsim authors.
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "isq/sim.hpp"

namespace isq {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// box_ls objective <= ML residual^2 + 1e-6 on random instances with
// n <= 12, m in [ceil(n/2), n], sigma alternating over {0, 0.3}.
CheckResult check_relaxation_dominance(int instances, std::uint64_t seed);

// Grid argmin within epsilon (l-infinity, slack 1e-6) of its projection onto
// the solution set, on noiseless zero-offset instances; n capped so the grid
// stays enumerable under the guard.
CheckResult check_lemma2(int instances, std::uint64_t seed,
                         const std::vector<double>& epsilons = {0.1, 0.25});

// Same check under noise and random offsets, where the inequality can fail;
// returns the violation statistics.
CheckResult check_lemma2_stress(int instances, std::uint64_t seed,
                                const std::vector<double>& epsilons = {0.1, 0.25});

// Monte Carlo means of exp(-t ||sum c_j h_j||^2) against the closed form,
// 2% relative, 1e5 samples per configuration.
CheckResult check_mgf(std::uint64_t seed);

// linf_project returns a member of S that is l-infinity optimal against
// randomly sampled members (slack 1e-7).
CheckResult check_projection(int instances, std::uint64_t seed);

// Repeated runs are byte-identical: run_experiment across thread counts and
// decode_risq across calls.
CheckResult check_determinism();

std::vector<std::string> verify_suite_names();
CheckResult run_verify_suite(const std::string& name);

}  // namespace isq
