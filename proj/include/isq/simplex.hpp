//
// Project isqsim - Copyright 2026 the isqsim authors.
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include "isq/model.hpp"

namespace isq {

struct LpResult {
  Vec x;
  double objective;
  int pivots;
  bool optimal;
};

// min c^T v subject to G v <= h, starting from a feasible point v0. Dense
// active-set simplex: a vertex is a set of dim(v) active constraints with
// independent normals; Bland's rule (smallest constraint index) picks both
// the leaving and the entering constraint, so degenerate vertices cannot
// cycle. The feasible region must have at least one vertex and the objective
// must be bounded below on it.
LpResult simplex_solve_inequality(const Mat& G, const Vec& h, const Vec& c,
                                  const Vec& v0, int max_pivots = 0);

}  // namespace isq
