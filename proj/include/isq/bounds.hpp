//
// Project isqsim - Copyright 2026 the isqsim authors.
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <optional>
#include <span>
#include <vector>

#include "isq/numerics.hpp"

namespace isq {

// Gaussian tail Q(x) via the complementary error function.
double q_function(double x);

// Chernoff-style upper bound (1/2) exp(-x^2/2) on Q(x); x >= 0.
double q_upper(double x);

// Base-2 binary entropy with H2(0) = H2(1) = 0.
double binary_entropy(double x);

// Smallest error count treated as "at least a k-fraction of n": ceil(k*n),
// computed with a tolerance so exact products do not round up, floored at 1.
int error_count_threshold(double k_fraction, int n);

// Positions (0-based) where two codewords differ.
struct ErrorPattern {
  int n_users = 0;
  std::vector<int> indices;  // sorted, distinct, non-empty

  static ErrorPattern make(int n_users, std::vector<int> indices);
  int size() const { return static_cast<int>(indices.size()); }
};

struct PairwiseExponentResult {
  double exponent;      // constrained min of ||H c||^2 / (8 sigma^2)
  double objective;     // constrained min of ||H c||^2
  Vec coefficients;     // argmin c
  bool converged;
};

// Constrained minimum of ||H c||^2 with c_j in [1,2] on the error positions
// and [0,1] elsewhere, solved on a shifted box through the box_ls kernel.
PairwiseExponentResult pairwise_exponent(const Mat& H, const ErrorPattern& pattern, double sigma,
                                         const BoxLsOptions& opts = {});

// (1 + 2 t sum(c^2))^(-m/2): expectation of exp(-t ||sum_j c_j h_j||^2) for
// h_j i.i.d. standard Gaussian in R^m.
double chi_sq_mgf_bound(double t, const Vec& c, int m);

struct TailBound {
  double threshold;    // (alpha/4) n ln n
  double probability;  // Markov/Chernoff bound, clamped to <= 1
};

// P(||sum c_j h_j||^2 < threshold) <= exp(t*threshold) (1+2t*s)^(-alpha n/2),
// with s a lower bound on sum c_j^2.
TailBound lemma1_tail_bound(int n, double alpha, double t, double sum_c_sq_lower);

// Chernoff parameter minimizing the lemma1 probability bound, by
// golden-section search on t.
double best_chernoff_t(int n, double alpha, double sum_c_sq_lower);

// sum over i >= ceil(k'n) of C(n,i) * p_i / 2, clamped to <= 1.
// p must have size n+1 and hold a probability for every index i >= ceil(k'n).
double union_bound(int n, double k_prime, std::span<const double> p);

// n * 2^{n (max H2(i/n) - log2(eps) - a log2 n)}, clamped to <= 1.
double grid_union_bound(int n, double k_prime, double epsilon, double a);

// min(1, k' + p_block).
double per_user_bound(double k_prime, double p_block);

// Parameter bag for the bound calculators surfaced by the CLI.
struct BoundParams {
  double sigma = 1.0;
  double t = 1.0;               // Chernoff parameter
  std::optional<double> a;      // grid-bound constant; defaults to alpha/4
  double k_prime = 0.02;
  double epsilon = 0.25;
  void validate() const;
};

struct BoundReport {
  double threshold;
  double chernoff_t;
  double per_pattern;   // tail bound at sum(c^2) >= k'n
  double union_b;       // union bound with per-size tail bounds
  double grid_union;
  double per_user;
  double snr_per_antenna;
};

BoundReport evaluate_bounds(int n, double alpha, const BoundParams& params, bool optimize_t = false);

}  // namespace isq
