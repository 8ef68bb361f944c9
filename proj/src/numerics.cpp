//
// Project isqsim - Copyright 2026 the isqsim authors.
// SPDX-License-Identifier: Apache-2.0
//
#include "isq/numerics.hpp"

#include <cmath>
#include <stdexcept>

#include "isq/simplex.hpp"

namespace isq {

namespace {

Vec clamp_box(const Vec& v, double box) {
  return v.cwiseMax(-box).cwiseMin(box);
}

// Norm of the projected-gradient map x - P(x - g).
double projected_gradient_norm(const Vec& x, const Vec& g, double box) {
  return (x - clamp_box(x - g, box)).norm();
}

}  // namespace

double spectral_norm_sq(const Mat& H, double tol, int max_iter) {
  if (H.size() == 0 || H.norm() == 0.0)
    throw std::invalid_argument("spectral_norm_sq: zero matrix");
  Rng rng(0x5eedf00dULL);
  Vec v(H.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.gaussian();
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    const Vec w = H * v;
    const double lambda_new = w.squaredNorm();  // Rayleigh quotient, v unit
    Vec u = H.transpose() * w;
    const double un = u.norm();
    if (un == 0.0) {
      // v fell into the null space; re-probe deterministically
      for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.gaussian();
      v.normalize();
      continue;
    }
    v = u / un;
    if (it > 3 && std::abs(lambda_new - lambda) <= tol * std::max(lambda_new, 1e-300)) {
      return lambda_new;
    }
    lambda = lambda_new;
  }
  return lambda;
}

BoxLsResult box_ls(const Mat& H, const Vec& y, double box, const BoxLsOptions& opts) {
  if (H.rows() != y.size()) throw std::invalid_argument("box_ls: dimension mismatch");
  if (!(box > 0.0)) throw std::invalid_argument("box_ls: box bound must be positive");
  if (!(opts.tol > 0.0) || opts.max_iter < 1) throw std::invalid_argument("box_ls: bad options");
  const Eigen::Index n = H.cols();

  if (H.norm() == 0.0) {
    // Objective is constant; every box point minimizes it.
    Vec x = opts.start ? clamp_box(*opts.start, box) : Vec::Zero(n);
    return BoxLsResult{std::move(x), y.squaredNorm(), 0, true, 0.0};
  }

  // Fixed step 1/L for the half-objective gradient H^T(Hx - y); the 1%
  // inflation keeps the step valid when power iteration stops a little short.
  const double L = spectral_norm_sq(H, 1e-10, 2000) * 1.01;
  const double step = 1.0 / L;

  Vec x = opts.start ? clamp_box(*opts.start, box) : Vec::Zero(n);
  Vec hx = H * x;
  double f = (hx - y).squaredNorm();
  {
    const Vec g = H.transpose() * (hx - y);
    const double kkt = projected_gradient_norm(x, g, box);
    if (kkt <= opts.tol) return BoxLsResult{std::move(x), f, 0, true, kkt};
  }

  Vec best_x = x;
  double best_f = f;
  Vec v = x, hv = hx;
  double theta = 1.0;

  for (int it = 1; it <= opts.max_iter; ++it) {
    const Vec gv = H.transpose() * (hv - y);
    Vec x_new = clamp_box(v - step * gv, box);
    Vec hx_new = H * x_new;
    const Vec res = hx_new - y;
    const double f_new = res.squaredNorm();
    const Vec gx = H.transpose() * res;
    const double kkt = projected_gradient_norm(x_new, gx, box);
    if (f_new < best_f) {
      best_f = f_new;
      best_x = x_new;
    }
    if (kkt <= opts.tol) {
      return BoxLsResult{std::move(x_new), f_new, it, true, kkt};
    }
    if (!std::isfinite(f_new) || f_new > f) {
      // restart momentum from the last good point
      theta = 1.0;
      if (std::isfinite(f_new)) {
        v = x_new;
        hv = hx_new;
      } else {
        v = best_x;
        hv = H * best_x;
        x_new = best_x;
        hx_new = hv;
      }
    } else {
      const double theta_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
      const double beta = (theta - 1.0) / theta_new;
      v = x_new + beta * (x_new - x);
      hv = hx_new + beta * (hx_new - hx);
      theta = theta_new;
    }
    x = std::move(x_new);
    hx = std::move(hx_new);
    f = f_new;
  }

  const Vec g = H.transpose() * (H * best_x - y);
  const double kkt = projected_gradient_norm(best_x, g, box);
  return BoxLsResult{std::move(best_x), best_f, opts.max_iter, false, kkt};
}

Mat null_basis(const Mat& H, double rank_tol) {
  if (H.size() == 0) throw std::invalid_argument("null_basis: empty matrix");
  const Eigen::Index n = H.cols();
  if (H.norm() == 0.0) return Mat::Identity(n, n);
  Eigen::BDCSVD<Mat> svd(H, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double threshold = rank_tol * sv(0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > threshold) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

bool SolutionSet::contains(const Vec& x) const {
  if (x.size() != x_hat.size()) return false;
  if (box_constrained && x.cwiseAbs().maxCoeff() > box + 1e-8 * (1.0 + box)) return false;
  const double feas_tol = 1e-6 * (1.0 + z_star.norm());
  return (channel * x - z_star).norm() <= feas_tol;
}

namespace {

// Working-set QR state for least_distance_qp: q spans the active normals,
// r is the triangular factor of their transposed stack.
struct ActiveQr {
  Mat q;  // dim x w, orthonormal columns
  Mat r;  // w x w, upper triangular
  std::vector<int> rows;

  explicit ActiveQr(Eigen::Index dim) : q(dim, 0), r(0, 0) {}

  bool add(const Vec& normal, int row) {
    Vec coeffs = q.transpose() * normal;
    Vec residual = normal - q * coeffs;
    const Vec extra = q.transpose() * residual;  // second pass restores orthogonality
    residual -= q * extra;
    coeffs += extra;
    const double rho = residual.norm();
    if (rho <= 1e-12 * (1.0 + normal.norm())) return false;
    const Eigen::Index w = q.cols();
    q.conservativeResize(Eigen::NoChange, w + 1);
    q.col(w) = residual / rho;
    Mat r_new = Mat::Zero(w + 1, w + 1);
    r_new.topLeftCorner(w, w) = r;
    r_new.col(w).head(w) = coeffs;
    r_new(w, w) = rho;
    r = std::move(r_new);
    rows.push_back(row);
    return true;
  }

  // Removal rebuilds the factorization; removals are rare next to adds.
  void remove(std::size_t pos, const Mat& normals) {
    rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(pos));
    const std::vector<int> kept = rows;
    q = Mat(q.rows(), 0);
    r = Mat(0, 0);
    rows.clear();
    for (int row : kept) add(normals.row(row).transpose(), row);
  }
};

}  // namespace

Vec least_distance_qp(const Vec& beta0, const Mat& normals, const Vec& bounds,
                      const Vec& start, int max_iter) {
  const Eigen::Index dim = beta0.size();
  const Eigen::Index rows = normals.rows();
  if (normals.cols() != dim || bounds.size() != rows || start.size() != dim)
    throw std::invalid_argument("least_distance_qp: dimension mismatch");
  if (max_iter <= 0) max_iter = 30 * static_cast<int>(rows + dim) + 100;

  Vec beta = start;
  Vec nb = normals * beta;
  if ((nb - bounds).maxCoeff() > 1e-7 * (1.0 + bounds.cwiseAbs().maxCoeff()))
    throw std::runtime_error("least_distance_qp: start point infeasible");

  ActiveQr active(dim);
  std::vector<char> in_active(static_cast<std::size_t>(rows), 0);
  const double dual_tol = 1e-10;
  const double step_tol = 1e-13 * (1.0 + beta0.norm());

  for (int it = 0; it < max_iter; ++it) {
    const Vec gap = beta0 - beta;
    const Vec p = gap - active.q * (active.q.transpose() * gap);
    if (p.norm() <= step_tol) {
      if (active.rows.empty()) return beta;
      // KKT multipliers: normals_W^T lambda = beta0 - beta.
      const Vec lambda =
          active.r.triangularView<Eigen::Upper>().solve(active.q.transpose() * gap);
      int drop = -1;
      double most_negative = -dual_tol;
      for (Eigen::Index i = 0; i < lambda.size(); ++i)
        if (lambda(i) < most_negative) {
          most_negative = lambda(i);
          drop = static_cast<int>(i);
        }
      if (drop < 0) return beta;
      in_active[static_cast<std::size_t>(active.rows[static_cast<std::size_t>(drop)])] = 0;
      active.remove(static_cast<std::size_t>(drop), normals);
      continue;
    }
    // Full step reaches the equality-constrained minimizer; stop earlier at
    // the first blocking constraint.
    const Vec np = normals * p;
    double alpha = 1.0;
    int block = -1;
    for (Eigen::Index j = 0; j < rows; ++j) {
      if (in_active[static_cast<std::size_t>(j)]) continue;
      if (np(j) > 1e-13 * (1.0 + normals.row(j).norm())) {
        const double a = std::max(0.0, bounds(j) - nb(j)) / np(j);
        if (a < alpha - 1e-14 || (a <= alpha + 1e-14 && block >= 0 && static_cast<int>(j) < block)) {
          if (a < alpha) alpha = a;
          block = static_cast<int>(j);
        }
      }
    }
    beta += alpha * p;
    nb += alpha * np;
    if (block >= 0 && alpha < 1.0) {
      nb(block) = bounds(block);  // exact on the new active row
      if (active.add(normals.row(block).transpose(), block))
        in_active[static_cast<std::size_t>(block)] = 1;
    }
  }
  return beta;  // feasible; accuracy limited by the iteration guard
}

Vec linf_project(const SolutionSet& s, const Vec& target) {
  const Eigen::Index n = s.x_hat.size();
  if (target.size() != n) throw std::invalid_argument("linf_project: dimension mismatch");
  const int k = s.null_rank();
  if (k == 0) return s.x_hat;

  const Mat& Z = s.null_space;
  const int dim = k + 1;
  const Eigen::Index rows = s.box_constrained ? 4 * n : 2 * n;
  Mat G(rows, dim);
  Vec h(rows);
  // Epigraph variables (beta, t): |x_hat + Z beta - target| <= t per
  // coordinate, plus the box on x_hat + Z beta.
  for (Eigen::Index i = 0; i < n; ++i) {
    G.row(2 * i).head(k) = Z.row(i);
    G(2 * i, k) = -1.0;
    h(2 * i) = target(i) - s.x_hat(i);
    G.row(2 * i + 1).head(k) = -Z.row(i);
    G(2 * i + 1, k) = -1.0;
    h(2 * i + 1) = s.x_hat(i) - target(i);
  }
  if (s.box_constrained) {
    for (Eigen::Index i = 0; i < n; ++i) {
      G.row(2 * n + 2 * i).head(k) = Z.row(i);
      G(2 * n + 2 * i, k) = 0.0;
      h(2 * n + 2 * i) = s.box - s.x_hat(i);
      G.row(2 * n + 2 * i + 1).head(k) = -Z.row(i);
      G(2 * n + 2 * i + 1, k) = 0.0;
      h(2 * n + 2 * i + 1) = s.box + s.x_hat(i);
    }
  }
  Vec c = Vec::Zero(dim);
  c(k) = 1.0;
  Vec v0 = Vec::Zero(dim);
  v0(k) = (s.x_hat - target).cwiseAbs().maxCoeff();

  LpResult lp;
  try {
    lp = simplex_solve_inequality(G, h, c, v0);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(std::string("linf_project: corrupted solution set (") + e.what() + ")");
  }
  const double t_star = std::max(0.0, lp.x(k)) + 1e-9;  // slack on the optimal value

  Vec lo = target.array() - t_star;
  Vec hi = target.array() + t_star;
  if (s.box_constrained) {
    lo = lo.cwiseMax(-s.box);
    hi = hi.cwiseMin(s.box);
    // Feasible by construction; guard against rounding inversions anyway.
    for (Eigen::Index i = 0; i < n; ++i)
      if (lo(i) > hi(i)) lo(i) = hi(i) = 0.5 * (lo(i) + hi(i));
  }

  // Refinement over the optimal face, in beta coordinates: with Z orthonormal
  // ||x_hat + Z beta - target||_2 = ||beta - beta0||_2 up to a constant.
  // The extra 1e-9 keeps the LP vertex strictly feasible for the refinement;
  // the final clamp absorbs it.
  Mat qp_normals(2 * n, k);
  Vec qp_bounds(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    qp_normals.row(2 * i) = Z.row(i);
    qp_bounds(2 * i) = hi(i) - s.x_hat(i) + 1e-9;
    qp_normals.row(2 * i + 1) = -Z.row(i);
    qp_bounds(2 * i + 1) = s.x_hat(i) - lo(i) + 1e-9;
  }
  const Vec beta0 = Z.transpose() * (target - s.x_hat);
  const Vec beta = least_distance_qp(beta0, qp_normals, qp_bounds, lp.x.head(k));
  Vec out = s.x_hat + Z * beta;
  if (s.box_constrained) out = clamp_box(out, s.box);
  return out;
}

}  // namespace isq
