//
// Project isqsim - Copyright 2026 the isqsim authors.
// SPDX-License-Identifier: Apache-2.0
//
#include "isq/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace isq {

namespace {

constexpr double kPivotTol = 1e-11;   // directional derivative threshold per unit row norm
constexpr double kDualTol = 1e-9;     // multiplier negativity threshold
constexpr int kRefactorEvery = 64;

struct State {
  const Mat& G;
  const Vec& h;
  const Vec& c;
  Vec row_norm;           // per-row normal scale
  Vec v;                  // current point
  Vec slack;              // h - G v
  std::vector<int> active;
  std::vector<char> in_active;
  Mat binv;               // inverse of the active-row matrix

  State(const Mat& g, const Vec& hh, const Vec& cc) : G(g), h(hh), c(cc) {
    row_norm = G.rowwise().norm();
    in_active.assign(static_cast<std::size_t>(G.rows()), 0);
  }
};

// Rebuild the active-row inverse and snap v onto the vertex it defines.
// Returns false when the set has drifted to numerical singularity.
bool refactor(State& st) {
  const int dim = static_cast<int>(st.G.cols());
  Mat act(dim, dim);
  Vec ha(dim);
  for (int p = 0; p < dim; ++p) {
    act.row(p) = st.G.row(st.active[p]);
    ha(p) = st.h(st.active[p]);
  }
  Eigen::FullPivLU<Mat> lu(act);
  if (!lu.isInvertible()) return false;
  st.binv = lu.inverse();
  st.v = st.binv * ha;
  st.slack = st.h - st.G * st.v;
  return true;
}

void reset_active(State& st) {
  for (int row : st.active) st.in_active[static_cast<std::size_t>(row)] = 0;
  st.active.clear();
}

// Move from a feasible point to a vertex: grow the active set to full rank,
// stepping inside the null space of the rows already chosen.
void crash_to_vertex(State& st) {
  const int dim = static_cast<int>(st.G.cols());
  const Eigen::Index rows = st.G.rows();
  Mat q(dim, 0);  // orthonormal span of chosen active normals

  auto try_add = [&](int j) -> bool {
    Vec r = st.G.row(j).transpose();
    Vec rp = r - q * (q.transpose() * r);
    rp -= q * (q.transpose() * rp);  // second pass restores orthogonality
    // absolute floor: zero-normal rows are vacuous and can never define a vertex
    if (rp.norm() <= 1e-12 * (1.0 + st.row_norm(j))) return false;
    q.conservativeResize(Eigen::NoChange, q.cols() + 1);
    q.col(q.cols() - 1) = rp.normalized();
    st.active.push_back(j);
    st.in_active[static_cast<std::size_t>(j)] = 1;
    return true;
  };

  // Rows already tight at the start point come first, in index order.
  for (Eigen::Index j = 0; j < rows && static_cast<int>(st.active.size()) < dim; ++j)
    if (std::abs(st.slack(j)) <= 1e-9 * (1.0 + std::abs(st.h(j)))) try_add(static_cast<int>(j));

  while (static_cast<int>(st.active.size()) < dim) {
    // Any direction orthogonal to the chosen normals; probe -c, then axes.
    Vec d;
    bool found = false;
    for (int probe = -1; probe < dim && !found; ++probe) {
      Vec r = probe < 0 ? Vec(-st.c) : Vec(Vec::Unit(dim, probe));
      if (r.norm() == 0.0) continue;
      Vec rp = r - q * (q.transpose() * r);
      rp -= q * (q.transpose() * rp);
      if (rp.norm() > 1e-10 * r.norm()) {
        d = rp.normalized();
        found = true;
      }
    }
    if (!found) throw std::runtime_error("cannot extend active set");  // rank says otherwise
    if (st.c.dot(d) > 1e-12) d = -d;

    bool moved = false;
    for (int attempt = 0; attempt < 2 && !moved; ++attempt) {
      const Vec gd = st.G * d;
      double best_step = std::numeric_limits<double>::infinity();
      int enter = -1;
      for (Eigen::Index j = 0; j < rows; ++j) {
        if (st.in_active[static_cast<std::size_t>(j)]) continue;
        if (gd(j) > kPivotTol * (1.0 + st.row_norm(j))) {
          const double step = std::max(0.0, st.slack(j)) / gd(j);
          if (enter < 0 || step < best_step - 1e-12 * (1.0 + best_step)) {
            best_step = step;
            enter = static_cast<int>(j);
          } else if (step <= best_step + 1e-12 * (1.0 + best_step) && static_cast<int>(j) < enter) {
            enter = static_cast<int>(j);
          }
        }
      }
      if (enter >= 0) {
        st.v += best_step * d;
        st.slack -= best_step * gd;
        st.slack(enter) = 0.0;
        if (!try_add(enter))
          throw std::runtime_error("blocking row unexpectedly dependent");
        moved = true;
      } else {
        d = -d;  // objective-neutral or the region is unbounded this way only
      }
    }
    if (!moved) throw std::runtime_error("feasible set contains a free line");
  }
}

}  // namespace

LpResult simplex_solve_inequality(const Mat& G, const Vec& h, const Vec& c,
                                  const Vec& v0, int max_pivots) {
  const int dim = static_cast<int>(G.cols());
  const Eigen::Index rows = G.rows();
  if (h.size() != rows || c.size() != dim || v0.size() != dim)
    throw std::invalid_argument("simplex: dimension mismatch");
  if (rows < dim) throw std::runtime_error("simplex: fewer constraints than dimensions");
  if (max_pivots <= 0) max_pivots = 50 * (static_cast<int>(rows) + dim) + 200;

  State st(G, h, c);
  st.v = v0;
  st.slack = h - G * v0;
  if (st.slack.minCoeff() < -1e-7 * (1.0 + h.cwiseAbs().maxCoeff()))
    throw std::runtime_error("simplex: start point infeasible");

  // Drift recovery: rebuild the working set from the current point.
  const auto rebuild = [&st]() {
    reset_active(st);
    st.slack = st.h - st.G * st.v;
    crash_to_vertex(st);
    if (!refactor(st)) throw std::runtime_error("simplex: cannot factor a fresh vertex");
  };

  crash_to_vertex(st);
  if (!refactor(st)) rebuild();

  int pivots = 0;
  int since_refactor = 0;
  int rebuilds = 0;
  bool bland = false;  // switches on while steps are degenerate
  while (pivots < max_pivots) {
    const Vec mu = -st.binv.transpose() * c;
    int leave_pos = -1;
    if (bland) {
      int best_row = std::numeric_limits<int>::max();
      for (int p = 0; p < dim; ++p)
        if (mu(p) < -kDualTol && st.active[p] < best_row) {
          best_row = st.active[p];
          leave_pos = p;
        }
    } else {
      double most_negative = -kDualTol;
      for (int p = 0; p < dim; ++p)
        if (mu(p) < most_negative) {
          most_negative = mu(p);
          leave_pos = p;
        }
    }
    if (leave_pos < 0) {
      if (since_refactor == 0) return LpResult{st.v, c.dot(st.v), pivots, true};
      // snap onto the exact vertex, then re-verify the multipliers
      if (!refactor(st)) {
        if (++rebuilds > 8) throw std::runtime_error("simplex: repeated singular refactors");
        rebuild();
      }
      since_refactor = 0;
      continue;
    }

    const Vec d = -st.binv.col(leave_pos);
    const Vec gd = G * d;
    double best_step = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < rows; ++j) {
      if (st.in_active[static_cast<std::size_t>(j)]) continue;
      if (gd(j) > kPivotTol * (1.0 + st.row_norm(j)))
        best_step = std::min(best_step, std::max(0.0, st.slack(j)) / gd(j));
    }
    if (!std::isfinite(best_step))
      throw std::runtime_error("simplex: objective unbounded below");
    int enter = -1;
    for (Eigen::Index j = 0; j < rows; ++j) {  // Bland: smallest index at the minimum ratio
      if (st.in_active[static_cast<std::size_t>(j)]) continue;
      if (gd(j) > kPivotTol * (1.0 + st.row_norm(j))) {
        const double step = std::max(0.0, st.slack(j)) / gd(j);
        if (step <= best_step + 1e-10 * (1.0 + best_step)) {
          enter = static_cast<int>(j);
          break;
        }
      }
    }
    if (enter < 0) throw std::runtime_error("simplex: ratio test failed");

    bland = best_step <= 1e-12 * (1.0 + st.v.norm());
    st.v += best_step * d;
    st.slack -= best_step * gd;
    st.slack(enter) = 0.0;

    const int old_row = st.active[leave_pos];
    st.in_active[static_cast<std::size_t>(old_row)] = 0;
    st.in_active[static_cast<std::size_t>(enter)] = 1;
    st.active[leave_pos] = enter;
    st.slack(old_row) = st.h(old_row) - G.row(old_row).dot(st.v);
    ++pivots;
    ++since_refactor;

    if (since_refactor >= kRefactorEvery) {
      if (!refactor(st)) {
        if (++rebuilds > 8) throw std::runtime_error("simplex: repeated singular refactors");
        rebuild();
      }
      since_refactor = 0;
    } else {
      // Sherman-Morrison update for replacing one active row.
      const Vec diff = (G.row(enter) - G.row(old_row)).transpose();
      const Vec u = st.binv.col(leave_pos);
      const Eigen::RowVectorXd w = diff.transpose() * st.binv;
      const double denom = 1.0 + w(leave_pos);
      if (std::abs(denom) < 1e-10) {
        if (!refactor(st)) {
          if (++rebuilds > 8) throw std::runtime_error("simplex: repeated singular refactors");
          rebuild();
        }
        since_refactor = 0;
      } else {
        st.binv.noalias() -= (u * w) / denom;
      }
    }
  }
  return LpResult{st.v, c.dot(st.v), pivots, false};
}

}  // namespace isq
