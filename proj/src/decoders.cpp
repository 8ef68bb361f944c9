//
// Project isqsim - Copyright 2026 the isqsim authors.
// SPDX-License-Identifier: Apache-2.0
//
#include "isq/decoders.hpp"

#include <cmath>
#include <limits>

namespace isq {

DecoderId decoder_by_name(const std::string& name) {
  if (name == "ml") return DecoderId::Ml;
  if (name == "isq") return DecoderId::Isq;
  if (name == "risq") return DecoderId::Risq;
  if (name == "grid") return DecoderId::Grid;
  if (name == "amp") return DecoderId::Amp;
  throw std::invalid_argument("unknown decoder: " + name);
}

std::string to_string(DecoderId id) {
  switch (id) {
    case DecoderId::Ml: return "ml";
    case DecoderId::Isq: return "isq";
    case DecoderId::Risq: return "risq";
    case DecoderId::Grid: return "grid";
    case DecoderId::Amp: return "amp";
  }
  return "?";
}

namespace {

int user_count(const Mat& H, const Constellation& c, const char* who) {
  if (H.cols() % c.dim != 0)
    throw std::invalid_argument(std::string(who) + ": channel width is not a multiple of the symbol dim");
  return static_cast<int>(H.cols() / c.dim);
}

// Exhaustive search over per-block candidate lists, lexicographic order,
// first strict improvement wins (so ties keep the lexicographically
// smallest index sequence). Residual is updated incrementally per changed
// block and refreshed periodically to bound drift.
Vec enumerate_min_residual(const Mat& H, const Vec& y,
                           const std::vector<std::vector<Vec>>& candidates, int dim) {
  const int blocks = static_cast<int>(candidates.size());
  std::vector<int> idx(blocks, 0);
  Vec x(static_cast<Eigen::Index>(blocks) * dim);
  for (int b = 0; b < blocks; ++b) x.segment(static_cast<Eigen::Index>(b) * dim, dim) = candidates[b][0];

  Vec residual = y - H * x;
  double best = residual.squaredNorm();
  Vec best_x = x;
  long long visited = 1;

  auto set_block = [&](int b, int next) {
    const auto seg = x.segment(static_cast<Eigen::Index>(b) * dim, dim);
    residual.noalias() += H.middleCols(static_cast<Eigen::Index>(b) * dim, dim) * (seg - candidates[b][next]);
    x.segment(static_cast<Eigen::Index>(b) * dim, dim) = candidates[b][next];
    idx[b] = next;
  };

  while (true) {
    // odometer: rightmost block advances fastest
    int b = blocks - 1;
    while (b >= 0 && idx[b] + 1 == static_cast<int>(candidates[b].size())) --b;
    if (b < 0) break;
    set_block(b, idx[b] + 1);
    for (int j = b + 1; j < blocks; ++j) set_block(j, 0);
    if (++visited % 4096 == 0) residual = y - H * x;  // refresh
    const double obj = residual.squaredNorm();
    if (obj < best) {
      best = obj;
      best_x = x;
    }
  }
  return best_x;
}

}  // namespace

DecodeOutput decode_ml(const Mat& H, const Vec& y, const Constellation& c, int max_bits) {
  const int n = user_count(H, c, "decode_ml");
  const double bits = n * std::log2(static_cast<double>(c.points.size()));
  if (bits > max_bits + 1e-9)
    throw GuardError("decode_ml: " + std::to_string(bits) + " candidate bits exceed guard of " +
                     std::to_string(max_bits));
  std::vector<std::vector<Vec>> candidates(n, c.points);
  Vec best = enumerate_min_residual(H, y, candidates, c.dim);
  DecodeOutput out;
  out.decoder = DecoderId::Ml;
  out.diagnostics["objective"] = (y - H * best).squaredNorm();
  out.estimate = std::move(best);
  return out;
}

DecodeOutput decode_isq(const Mat& H, const Vec& y, const Constellation& c,
                        const BoxLsOptions& opts) {
  user_count(H, c, "decode_isq");
  BoxLsResult r = box_ls(H, y, c.box_radius, opts);
  DecodeOutput out;
  out.decoder = DecoderId::Isq;
  out.estimate = quantize(c, r.x);
  out.relaxed = std::move(r.x);
  out.diagnostics["objective"] = r.objective;
  out.diagnostics["iterations"] = r.iterations;
  out.diagnostics["converged"] = r.converged ? 1.0 : 0.0;
  out.diagnostics["kkt_residual"] = r.kkt_residual;
  return out;
}

SolutionSet solution_set(const Mat& H, const Vec& y, const Constellation& c,
                         const SolutionSetOptions& opts) {
  user_count(H, c, "solution_set");
  SolutionSet s;
  s.channel = H;
  s.box = c.box_radius;
  s.box_constrained = opts.box_constrained;
  if (opts.box_constrained) {
    BoxLsResult r = box_ls(H, y, c.box_radius, opts.box_ls);
    s.x_hat = std::move(r.x);
    s.objective = r.objective;
  } else {
    s.x_hat = H.completeOrthogonalDecomposition().solve(y);
    s.objective = (y - H * s.x_hat).squaredNorm();
  }
  s.null_space = null_basis(H, opts.rank_tol);
  s.z_star = H * s.x_hat;
  return s;
}

DecodeOutput decode_risq(const Mat& H, const Vec& y, const Constellation& c, Rng& rng,
                         const SolutionSetOptions& opts) {
  SolutionSet s = solution_set(H, y, c, opts);
  Vec x_r(H.cols());
  for (Eigen::Index i = 0; i < x_r.size(); ++i) x_r(i) = rng.uniform(-s.box, s.box);
  DecodeOutput out;
  out.decoder = DecoderId::Risq;
  out.relaxed = s.null_rank() == 0 ? s.x_hat : linf_project(s, x_r);
  out.estimate = quantize(c, out.relaxed);
  out.diagnostics["objective"] = s.objective;
  out.diagnostics["null_rank"] = s.null_rank();
  return out;
}

GridSpec grid_build(const Constellation& c, double epsilon, const Vec& delta, int n_users) {
  if (n_users < 1) throw std::invalid_argument("grid_build: n must be >= 1");
  if (!(epsilon > 0.0) || epsilon > 2.0 * c.box_radius)
    throw std::invalid_argument("grid_build: epsilon must lie in (0, 2*box_radius]");
  const Eigen::Index coords = static_cast<Eigen::Index>(n_users) * c.dim;
  if (delta.size() != coords)
    throw std::invalid_argument("grid_build: delta must have one offset per real coordinate");
  const double b = c.box_radius;
  GridSpec g;
  g.epsilon = epsilon;
  g.delta = Vec(coords);
  g.axes.resize(static_cast<std::size_t>(coords));
  for (Eigen::Index i = 0; i < coords; ++i) {
    double off = std::fmod(delta(i), epsilon);
    if (off < 0.0) off += epsilon;
    g.delta(i) = off;
    const long long k_lo = static_cast<long long>(std::ceil((-b - off) / epsilon - 1e-9));
    const long long k_hi = static_cast<long long>(std::floor((b - off) / epsilon + 1e-9));
    auto& axis = g.axes[static_cast<std::size_t>(i)];
    for (long long k = k_lo; k <= k_hi; ++k) {
      double p = off + static_cast<double>(k) * epsilon;
      if (p < -b) p = -b;  // boundary points snapped into the box
      if (p > b) p = b;
      axis.push_back(p);
    }
    if (axis.empty())
      throw std::invalid_argument("grid_build: empty scalar grid (epsilon too large for this offset)");
  }
  return g;
}

GridSpec grid_build(const Constellation& c, double epsilon, double delta, int n_users) {
  return grid_build(c, epsilon,
                    Vec::Constant(static_cast<Eigen::Index>(n_users) * c.dim, delta), n_users);
}

DecodeOutput decode_grid(const Mat& H, const Vec& y, const GridSpec& grid,
                         const Constellation& c, int max_bits) {
  const int n = user_count(H, c, "decode_grid");
  if (static_cast<Eigen::Index>(grid.axes.size()) != H.cols())
    throw std::invalid_argument("decode_grid: grid does not match the channel width");
  double bits = 0.0;
  for (const auto& axis : grid.axes) bits += std::log2(static_cast<double>(axis.size()));
  if (bits > max_bits + 1e-9)
    throw GuardError("decode_grid: " + std::to_string(bits) + " candidate bits exceed guard of " +
                     std::to_string(max_bits));

  // Per-block candidates: product of the block's scalar axes, restricted to
  // the constellation ball for multidimensional symbols.
  std::vector<std::vector<Vec>> candidates(static_cast<std::size_t>(n));
  for (int u = 0; u < n; ++u) {
    std::vector<int> pos(static_cast<std::size_t>(c.dim), 0);
    while (true) {
      Vec p(c.dim);
      for (int t = 0; t < c.dim; ++t)
        p(t) = grid.axes[static_cast<std::size_t>(u * c.dim + t)][static_cast<std::size_t>(pos[static_cast<std::size_t>(t)])];
      if (c.dim == 1 || p.norm() <= c.box_radius + 1e-9)
        candidates[static_cast<std::size_t>(u)].push_back(std::move(p));
      int t = c.dim - 1;
      while (t >= 0 &&
             pos[static_cast<std::size_t>(t)] + 1 ==
                 static_cast<int>(grid.axes[static_cast<std::size_t>(u * c.dim + t)].size()))
        --t;
      if (t < 0) break;
      ++pos[static_cast<std::size_t>(t)];
      for (int j = t + 1; j < c.dim; ++j) pos[static_cast<std::size_t>(j)] = 0;
    }
    if (candidates[static_cast<std::size_t>(u)].empty())
      throw std::invalid_argument("decode_grid: no grid point inside the constellation ball");
  }

  Vec best = enumerate_min_residual(H, y, candidates, c.dim);
  DecodeOutput out;
  out.decoder = DecoderId::Grid;
  out.diagnostics["objective"] = (y - H * best).squaredNorm();
  out.estimate = quantize(c, best);
  out.relaxed = std::move(best);
  return out;
}

DecodeOutput decode_amp(const Mat& H, const Vec& y, const Constellation& c, int iterations) {
  if (!c.is_bpsk()) throw std::invalid_argument("decode_amp: BPSK only");
  if (iterations < 0) throw std::invalid_argument("decode_amp: iterations must be >= 0");
  const Eigen::Index m = H.rows();
  const Eigen::Index n = H.cols();
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  const Mat a = H * scale;
  const Vec y_s = y * scale;

  Vec x = Vec::Zero(n);
  Vec z = y_s;
  bool diverged = false;
  int done = 0;
  for (int it = 0; it < iterations; ++it) {
    const Vec r = x + a.transpose() * z;
    const double tau2 = std::max(z.squaredNorm() / static_cast<double>(m), 1e-12);
    Vec x_new = (r / tau2).array().tanh();
    const double onsager =
        (1.0 - x_new.array().square()).sum() / (static_cast<double>(m) * tau2);
    Vec z_new = y_s - a * x_new + onsager * z;
    if (!x_new.allFinite() || !z_new.allFinite()) {
      diverged = true;
      break;
    }
    x = std::move(x_new);
    z = std::move(z_new);
    done = it + 1;
  }
  DecodeOutput out;
  out.decoder = DecoderId::Amp;
  out.relaxed = x + a.transpose() * z;  // final pseudo-data
  out.estimate = sgn(out.relaxed);
  out.diagnostics["iterations"] = done;
  out.diagnostics["diverged"] = diverged ? 1.0 : 0.0;
  out.diagnostics["objective"] = (y - H * out.estimate).squaredNorm();
  return out;
}

}  // namespace isq
