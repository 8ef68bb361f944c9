//
// Project isqsim - Copyright 2026 the isqsim authors.
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "isq/numerics.hpp"

namespace isq {

enum class DecoderId { Ml, Isq, Risq, Grid, Amp };

DecoderId decoder_by_name(const std::string& name);
std::string to_string(DecoderId id);

// An exhaustive search was asked for more candidates than its guard allows.
struct GuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DecodeOutput {
  Vec estimate;                  // blocks are constellation points
  Vec relaxed;                   // pre-quantization iterate; empty for ML
  DecoderId decoder;
  std::map<std::string, double> diagnostics;
};

// Exhaustive residual minimization over all n-user codewords. Ties break
// lexicographically on the constellation index sequence.
DecodeOutput decode_ml(const Mat& H, const Vec& y, const Constellation& c, int max_bits = 24);

// Box-constrained least squares, then quantize.
DecodeOutput decode_isq(const Mat& H, const Vec& y, const Constellation& c,
                        const BoxLsOptions& opts = {});

struct SolutionSetOptions {
  bool box_constrained = true;  // false: affine least-squares solution set
  double rank_tol = 1e-10;
  BoxLsOptions box_ls;
};

SolutionSet solution_set(const Mat& H, const Vec& y, const Constellation& c,
                         const SolutionSetOptions& opts = {});

// Uniform sample in the box, l-infinity projection onto the solution set,
// then quantize. Deterministic given the stream.
DecodeOutput decode_risq(const Mat& H, const Vec& y, const Constellation& c, Rng& rng,
                         const SolutionSetOptions& opts = {});

// Shifted lattice of pitch epsilon inside the feasible box, one scalar grid
// per real coordinate.
struct GridSpec {
  double epsilon = 0.0;
  Vec delta;                              // canonical offsets in [0, epsilon)
  std::vector<std::vector<double>> axes;  // ascending scalar grids
};

GridSpec grid_build(const Constellation& c, double epsilon, const Vec& delta, int n_users);

// Convenience overload: one offset applied to every coordinate.
GridSpec grid_build(const Constellation& c, double epsilon, double delta, int n_users);

// Exhaustive residual minimization over the grid (blocks restricted to the
// constellation ball for dim >= 2), then quantize.
DecodeOutput decode_grid(const Mat& H, const Vec& y, const GridSpec& grid,
                         const Constellation& c, int max_bits = 24);

// Approximate message passing baseline with the tanh denoiser for a uniform
// +/-1 prior; restricted to BPSK.
DecodeOutput decode_amp(const Mat& H, const Vec& y, const Constellation& c, int iterations);

}  // namespace isq
