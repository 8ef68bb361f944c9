//
// Project isqsim - Copyright 2026 the isqsim authors.
// SPDX-License-Identifier: Apache-2.0
//
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <functional>

#include "isq/numerics.hpp"
#include "isq/simplex.hpp"

using namespace isq;

namespace {

Mat random_matrix(int rows, int cols, Rng& rng) {
  Mat h(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) h(i, j) = rng.gaussian();
  return h;
}

// Brute-force LP oracle: enumerate all dim-subsets of rows as candidate
// vertices, keep the feasible ones, return the best objective.
double lp_vertex_oracle(const Mat& g, const Vec& h, const Vec& c) {
  const int rows = static_cast<int>(g.rows());
  const int dim = static_cast<int>(g.cols());
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> pick(static_cast<std::size_t>(dim));
  std::function<void(int, int)> rec = [&](int start, int chosen) {
    if (chosen == dim) {
      Mat sub(dim, dim);
      Vec rhs(dim);
      for (int i = 0; i < dim; ++i) {
        sub.row(i) = g.row(pick[static_cast<std::size_t>(i)]);
        rhs(i) = h(pick[static_cast<std::size_t>(i)]);
      }
      Eigen::FullPivLU<Mat> lu(sub);
      if (!lu.isInvertible()) return;
      const Vec v = lu.solve(rhs);
      if (((g * v - h).array() <= 1e-9).all()) best = std::min(best, c.dot(v));
      return;
    }
    for (int i = start; i <= rows - (dim - chosen); ++i) {
      pick[static_cast<std::size_t>(chosen)] = i;
      rec(i + 1, chosen + 1);
    }
  };
  rec(0, 0);
  return best;
}

}  // namespace

TEST_CASE("spectral_norm_sq against an SVD oracle") {
  CHECK(spectral_norm_sq(Mat::Identity(3, 3)) == doctest::Approx(1.0));
  Mat d = Mat::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  CHECK(spectral_norm_sq(d) == doctest::Approx(9.0));

  Rng rng(17);
  for (int rep = 0; rep < 10; ++rep) {
    const Mat h = random_matrix(5, 8, rng);
    Eigen::JacobiSVD<Mat> svd(h);
    const double oracle = svd.singularValues()(0) * svd.singularValues()(0);
    CHECK(spectral_norm_sq(h) == doctest::Approx(oracle).epsilon(1e-6));
  }
  CHECK_THROWS_AS(spectral_norm_sq(Mat::Zero(2, 2)), std::invalid_argument);
}

TEST_CASE("box_ls worked cases") {
  Vec y(2);
  y << 0.4, -0.7;
  const BoxLsResult inside = box_ls(Mat::Identity(2, 2), y, 1.0);
  CHECK(inside.converged);
  CHECK((inside.x - y).cwiseAbs().maxCoeff() < 1e-7);
  CHECK(inside.objective < 1e-12);

  Vec y2(2);
  y2 << 2.0, -3.0;
  const BoxLsResult clamped = box_ls(Mat::Identity(2, 2), y2, 1.0);
  CHECK(clamped.x(0) == doctest::Approx(1.0));
  CHECK(clamped.x(1) == doctest::Approx(-1.0));
  CHECK(clamped.objective == doctest::Approx(5.0));

  Mat wide(1, 2);
  wide << 1.0, 1.0;
  Vec y3(1);
  y3 << 0.5;
  const BoxLsResult under = box_ls(wide, y3, 1.0);
  CHECK(under.objective < 1e-10);
  CHECK((wide * under.x)(0) == doctest::Approx(0.5).epsilon(1e-6));

  CHECK_THROWS_AS(box_ls(wide, y, 1.0), std::invalid_argument);  // shape mismatch
  CHECK_THROWS_AS(box_ls(wide, y3, 0.0), std::invalid_argument);
}

TEST_CASE("box_ls dominates every box vertex and is start-independent") {
  Rng rng(23);
  for (int rep = 0; rep < 30; ++rep) {
    const int n = 2 + static_cast<int>(rng.index(5));
    const int m = 1 + static_cast<int>(rng.index(static_cast<std::size_t>(n + 2)));
    const Mat h = random_matrix(m, n, rng);
    Vec y(m);
    for (int i = 0; i < m; ++i) y(i) = rng.gaussian() * 2.0;
    const BoxLsResult base = box_ls(h, y, 1.0);

    for (long long mask = 0; mask < (1 << n); ++mask) {
      Vec v(n);
      for (int i = 0; i < n; ++i) v(i) = (mask >> i) & 1 ? 1.0 : -1.0;
      CHECK(base.objective <= (y - h * v).squaredNorm() + 1e-9);
    }

    Vec start(n);
    for (int i = 0; i < n; ++i) start(i) = rng.uniform(-1.0, 1.0);
    BoxLsOptions opts;
    opts.start = &start;
    const BoxLsResult other = box_ls(h, y, 1.0, opts);
    CHECK(std::abs(base.objective - other.objective) <= 1e-6 * (1.0 + base.objective));
  }
}

TEST_CASE("box_ls on a zero channel") {
  Vec y(2);
  y << 1.0, 2.0;
  const BoxLsResult r = box_ls(Mat::Zero(2, 3), y, 1.0);
  CHECK(r.converged);
  CHECK(r.objective == doctest::Approx(5.0));
  CHECK(r.x.cwiseAbs().maxCoeff() <= 1.0);
}

TEST_CASE("null_basis analytic and property") {
  Mat wide(1, 2);
  wide << 1.0, 1.0;
  const Mat z = null_basis(wide);
  REQUIRE(z.cols() == 1);
  Vec dir(2);
  dir << 1.0, -1.0;
  dir.normalize();
  CHECK(std::abs(z.col(0).dot(dir)) == doctest::Approx(1.0));

  Rng rng(29);
  const Mat tall = random_matrix(3, 2, rng);
  CHECK(null_basis(tall).cols() == 0);

  const Mat zfull = null_basis(Mat::Zero(2, 3));
  REQUIRE(zfull.rows() == 3);
  REQUIRE(zfull.cols() == 3);
  CHECK((zfull.transpose() * zfull - Mat::Identity(3, 3)).norm() < 1e-12);

  for (int rep = 0; rep < 20; ++rep) {
    const int n = 3 + static_cast<int>(rng.index(6));
    const int m = 1 + static_cast<int>(rng.index(static_cast<std::size_t>(n)));
    const Mat h = random_matrix(m, n, rng);
    const Mat zz = null_basis(h, 1e-10);
    CHECK(zz.cols() == n - std::min(m, n));  // Gaussian: full rank almost surely
    if (zz.cols() > 0) {
      CHECK((zz.transpose() * zz - Mat::Identity(zz.cols(), zz.cols())).norm() < 1e-10);
      CHECK((h * zz).norm() / h.norm() <= 10.0 * 1e-10);
    }
  }
}

TEST_CASE("simplex solves small inequality-form programs") {
  // min -x - y over the unit square
  Mat g(4, 2);
  g << 1, 0, 0, 1, -1, 0, 0, -1;
  Vec h(4);
  h << 1, 1, 0, 0;
  Vec c(2);
  c << -1, -1;
  Vec v0 = Vec::Zero(2);
  const LpResult r = simplex_solve_inequality(g, h, c, v0);
  CHECK(r.optimal);
  CHECK(r.objective == doctest::Approx(-2.0));
  CHECK(r.x(0) == doctest::Approx(1.0));
  CHECK(r.x(1) == doctest::Approx(1.0));

  // degenerate vertex: three constraints meet at the optimum
  Mat g2(5, 2);
  g2 << 1, 0, 0, 1, 1, 1, -1, 0, 0, -1;
  Vec h2(5);
  h2 << 1, 1, 2, 0, 0;
  const LpResult r2 = simplex_solve_inequality(g2, h2, c, v0);
  CHECK(r2.optimal);
  CHECK(r2.objective == doctest::Approx(-2.0));
}

TEST_CASE("simplex matches a vertex-enumeration oracle on random programs") {
  Rng rng(37);
  for (int rep = 0; rep < 40; ++rep) {
    const int dim = 2 + static_cast<int>(rng.index(3));
    const int rows = dim + 3 + static_cast<int>(rng.index(5));
    Mat g(rows, dim);
    Vec h(rows);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < dim; ++j) g(i, j) = rng.gaussian();
      h(i) = g.row(i).norm() * (0.5 + rng.uniform01());  // 0 stays feasible
    }
    // bound the region so the LP cannot be unbounded
    Mat gb(rows + 2 * dim, dim);
    Vec hb(rows + 2 * dim);
    gb.topRows(rows) = g;
    hb.head(rows) = h;
    for (int j = 0; j < dim; ++j) {
      gb.row(rows + 2 * j).setZero();
      gb(rows + 2 * j, j) = 1.0;
      hb(rows + 2 * j) = 10.0;
      gb.row(rows + 2 * j + 1).setZero();
      gb(rows + 2 * j + 1, j) = -1.0;
      hb(rows + 2 * j + 1) = 10.0;
    }
    Vec c(dim);
    for (int j = 0; j < dim; ++j) c(j) = rng.gaussian();
    const LpResult r = simplex_solve_inequality(gb, hb, c, Vec::Zero(dim));
    const double oracle = lp_vertex_oracle(gb, hb, c);
    CHECK(r.optimal);
    CHECK(r.objective == doctest::Approx(oracle).epsilon(1e-7));
  }
}

TEST_CASE("least_distance_qp matches dense scans") {
  // project beta0 = 2 onto beta <= 1
  Mat n1(1, 1);
  n1 << 1.0;
  Vec d1(1);
  d1 << 1.0;
  Vec b0(1);
  b0 << 2.0;
  const Vec r1 = least_distance_qp(b0, n1, d1, Vec::Zero(1));
  CHECK(r1(0) == doctest::Approx(1.0));

  Rng rng(41);
  for (int rep = 0; rep < 25; ++rep) {
    const int dim = 2;
    const int rows = 6;
    Mat nn(rows, dim);
    Vec dd(rows);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < dim; ++j) nn(i, j) = rng.gaussian();
      dd(i) = nn.row(i).norm() * (0.3 + rng.uniform01());
    }
    Vec beta0(dim);
    beta0 << rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0);
    const Vec got = least_distance_qp(beta0, nn, dd, Vec::Zero(dim));
    CHECK(((nn * got - dd).array() <= 1e-8).all());
    double best = 1e300;
    for (double a = -3.0; a <= 3.0; a += 0.004) {
      for (double b = -3.0; b <= 3.0; b += 0.004) {
        Vec v(2);
        v << a, b;
        if (((nn * v - dd).array() <= 0.0).all()) best = std::min(best, (v - beta0).norm());
      }
    }
    CHECK((got - beta0).norm() <= best + 2e-2);  // scan resolution limits the oracle
  }
}

namespace {

SolutionSet line_solution_set(const Mat& h, const Vec& y, double box) {
  const Constellation c = Constellation::bpsk();
  (void)c;
  SolutionSet s;
  s.channel = h;
  const BoxLsResult r = box_ls(h, y, box);
  s.x_hat = r.x;
  s.objective = r.objective;
  s.null_space = null_basis(h);
  s.box = box;
  s.z_star = h * s.x_hat;
  return s;
}

}  // namespace

TEST_CASE("linf_project worked cases") {
  // S = {(t, t) : t in [-1, 1]}
  Mat h1(1, 2);
  h1 << 1.0, -1.0;
  Vec y0(1);
  y0 << 0.0;
  const SolutionSet diag = line_solution_set(h1, y0, 1.0);
  Vec target(2);
  target << 1.0, 0.0;
  const Vec p1 = linf_project(diag, target);
  CHECK(p1(0) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(p1(1) == doctest::Approx(0.5).epsilon(1e-6));

  // S = {(t, 0) : t in [-1, 1]}, the l2 tie-break picks t = 0.2
  Mat h2(1, 2);
  h2 << 0.0, 1.0;
  const SolutionSet axis = line_solution_set(h2, y0, 1.0);
  Vec target2(2);
  target2 << 0.2, 0.9;
  const Vec p2 = linf_project(axis, target2);
  CHECK(p2(0) == doctest::Approx(0.2).epsilon(1e-6));
  CHECK(p2(1) == doctest::Approx(0.0).epsilon(1e-6));

  // singleton S
  Vec ys(2);
  ys << 0.3, -0.2;
  const SolutionSet single = line_solution_set(Mat::Identity(2, 2), ys, 1.0);
  CHECK(single.null_rank() == 0);
  Vec anywhere(2);
  anywhere << -0.9, 0.9;
  const Vec p3 = linf_project(single, anywhere);
  CHECK((p3 - single.x_hat).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("linf_project membership and optimality against sampled members") {
  const Constellation c = Constellation::bpsk();
  Rng rng(53);
  for (int rep = 0; rep < 40; ++rep) {
    const int n = 3 + static_cast<int>(rng.index(6));
    const int m = std::max(1, n - 1 - static_cast<int>(rng.index(3)));
    const Mat h = random_matrix(m, n, rng);
    Vec x0(n);
    for (int i = 0; i < n; ++i) x0(i) = rng.rademacher();
    Vec y = h * x0;
    for (int i = 0; i < m; ++i) y(i) += 0.2 * rng.gaussian();
    const SolutionSet s = line_solution_set(h, y, c.box_radius);
    if (s.null_rank() == 0) continue;
    Vec target(n);
    for (int i = 0; i < n; ++i) target(i) = rng.uniform(-1.0, 1.0);
    const Vec p = linf_project(s, target);
    CHECK(s.contains(p));
    const double p_dist = (target - p).cwiseAbs().maxCoeff();
    for (int trial = 0; trial < 100; ++trial) {
      Vec beta(s.null_rank());
      for (int j = 0; j < s.null_rank(); ++j) beta(j) = rng.gaussian();
      const Vec dir = s.null_space * beta;
      double lo = -1e300, hi = 1e300;
      for (int j = 0; j < n; ++j) {
        if (std::abs(dir(j)) < 1e-14) continue;
        const double a = (-1.0 - s.x_hat(j)) / dir(j);
        const double b = (1.0 - s.x_hat(j)) / dir(j);
        lo = std::max(lo, std::min(a, b));
        hi = std::min(hi, std::max(a, b));
      }
      if (lo > hi) continue;
      const Vec member = s.x_hat + rng.uniform(lo, hi) * dir;
      CHECK(p_dist <= (target - member).cwiseAbs().maxCoeff() + 1e-7);
    }
  }
}

TEST_CASE("full-column-rank systems give a unique minimizer") {
  Rng rng(61);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 3 + static_cast<int>(rng.index(4));
    const Mat h = random_matrix(n + 2, n, rng);
    Vec y(n + 2);
    for (int i = 0; i < n + 2; ++i) y(i) = rng.gaussian();
    CHECK(null_basis(h).cols() == 0);
    const BoxLsResult a = box_ls(h, y, 1.0);
    Vec start = Vec::Constant(n, 0.9);
    BoxLsOptions opts;
    opts.start = &start;
    const BoxLsResult b = box_ls(h, y, 1.0, opts);
    CHECK((a.x - b.x).cwiseAbs().maxCoeff() < 1e-5);
  }
}
