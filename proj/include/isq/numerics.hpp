//
// Project isqsim - Copyright 2026 the isqsim authors.
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include "isq/model.hpp"

namespace isq {

struct BoxLsOptions {
  double tol = 1e-8;    // target projected-gradient norm
  int max_iter = 20000;
  const Vec* start = nullptr;  // optional start point, clamped into the box
};

struct BoxLsResult {
  Vec x;                 // minimizer, every coordinate in [-box, box]
  double objective;      // ||y - H x||^2
  int iterations;
  bool converged;
  double kkt_residual;   // norm of the projected gradient at x
};

// min ||y - H x||^2 over the box [-box, box]^n by accelerated projected
// gradient with fixed step 1/L (L = squared spectral norm of H) and restart
// on objective increase.
BoxLsResult box_ls(const Mat& H, const Vec& y, double box, const BoxLsOptions& opts = {});

// Largest squared singular value via power iteration on H^T H.
double spectral_norm_sq(const Mat& H, double tol = 1e-12, int max_iter = 20000);

// Orthonormal basis of the numerical right null space; singular values at or
// below rank_tol times the largest are treated as zero.
Mat null_basis(const Mat& H, double rank_tol = 1e-10);

// Polytope of box-constrained least-squares minimizers:
//   S = { x : ||x||_inf <= box, H x = z_star },  z_star = H x_hat.
// With box_constrained == false it is the affine set x_hat + range(null_space)
// instead (x_hat then the min-norm least-squares solution).
struct SolutionSet {
  Mat channel;          // H
  Vec x_hat;            // particular minimizer
  Mat null_space;       // orthonormal columns; zero columns when H has full column rank
  double box = 1.0;
  Vec z_star;           // common image H x of every member
  double objective = 0.0;
  bool box_constrained = true;

  int null_rank() const { return static_cast<int>(null_space.cols()); }
  bool contains(const Vec& x) const;
};

// min ||beta - beta0||_2 subject to normals * beta <= bounds, starting from
// a feasible point. Primal active-set method for the strictly convex
// least-distance problem; exact on the optimal face.
Vec least_distance_qp(const Vec& beta0, const Mat& normals, const Vec& bounds,
                      const Vec& start, int max_iter = 0);

// Member of S with minimal l-infinity distance to target; among those, the
// unique member of minimal Euclidean distance to target.
Vec linf_project(const SolutionSet& s, const Vec& target);

}  // namespace isq
