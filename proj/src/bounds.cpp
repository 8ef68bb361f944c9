//
// Project isqsim - Copyright 2026 the isqsim authors.
// SPDX-License-Identifier: Apache-2.0
//
#include "isq/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "isq/model.hpp"

namespace isq {

double q_function(double x) { return 0.5 * std::erfc(x / 1.4142135623730950488); }

double q_upper(double x) {
  if (x < 0.0) throw std::invalid_argument("q_upper: x must be nonnegative");
  return 0.5 * std::exp(-0.5 * x * x);
}

double binary_entropy(double x) {
  if (x < 0.0 || x > 1.0) throw std::invalid_argument("binary_entropy: x must lie in [0, 1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

int error_count_threshold(double k_fraction, int n) {
  if (!(k_fraction > 0.0) || k_fraction > 1.0)
    throw std::invalid_argument("k fraction must lie in (0, 1]");
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  const int t = static_cast<int>(std::ceil(k_fraction * n - 1e-9));
  return std::max(1, std::min(t, n));
}

ErrorPattern ErrorPattern::make(int n_users, std::vector<int> indices) {
  if (n_users < 1) throw std::invalid_argument("ErrorPattern: n must be >= 1");
  if (indices.empty()) throw std::invalid_argument("ErrorPattern: needs at least one index");
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  if (indices.front() < 0 || indices.back() >= n_users)
    throw std::invalid_argument("ErrorPattern: index out of range");
  return ErrorPattern{n_users, std::move(indices)};
}

PairwiseExponentResult pairwise_exponent(const Mat& H, const ErrorPattern& pattern, double sigma,
                                         const BoxLsOptions& opts) {
  if (pattern.n_users != H.cols())
    throw std::invalid_argument("pairwise_exponent: pattern does not match the channel width");
  if (!(sigma > 0.0)) throw std::invalid_argument("pairwise_exponent: sigma must be positive");
  const Eigen::Index n = H.cols();

  // c = center + u with u in [-1/2, 1/2]^n; center is 3/2 on error positions
  // and 1/2 elsewhere, so min ||H c||^2 = min over u of ||(-H center) - H u||^2.
  Vec center = Vec::Constant(n, 0.5);
  for (int j : pattern.indices) center(j) = 1.5;
  const Vec target = -(H * center);
  BoxLsResult r = box_ls(H, target, 0.5, opts);
  PairwiseExponentResult out;
  out.objective = r.objective;
  out.exponent = r.objective / (8.0 * sigma * sigma);
  out.coefficients = center + r.x;
  out.converged = r.converged;
  return out;
}

double chi_sq_mgf_bound(double t, const Vec& c, int m) {
  if (!(t > 0.0)) throw std::invalid_argument("chi_sq_mgf_bound: t must be positive");
  if (m < 1) throw std::invalid_argument("chi_sq_mgf_bound: m must be >= 1");
  return std::pow(1.0 + 2.0 * t * c.squaredNorm(), -0.5 * m);
}

namespace {

// log of the lemma1 probability bound at Chernoff parameter t.
double log_tail_bound(double t, double threshold, double alpha_n, double sum_c_sq_lower) {
  return t * threshold - 0.5 * alpha_n * std::log1p(2.0 * t * sum_c_sq_lower);
}

}  // namespace

TailBound lemma1_tail_bound(int n, double alpha, double t, double sum_c_sq_lower) {
  if (n < 2) throw std::invalid_argument("lemma1_tail_bound: n must be >= 2");
  if (!(alpha > 0.0)) throw std::invalid_argument("lemma1_tail_bound: alpha must be positive");
  if (!(t > 0.0)) throw std::invalid_argument("lemma1_tail_bound: t must be positive");
  if (sum_c_sq_lower < 0.0)
    throw std::invalid_argument("lemma1_tail_bound: sum_c_sq_lower must be nonnegative");
  const double threshold = 0.25 * alpha * n * std::log(static_cast<double>(n));
  const double lg = log_tail_bound(t, threshold, alpha * n, sum_c_sq_lower);
  return TailBound{threshold, std::min(1.0, std::exp(lg))};
}

double best_chernoff_t(int n, double alpha, double sum_c_sq_lower) {
  if (n < 2) throw std::invalid_argument("best_chernoff_t: n must be >= 2");
  if (!(alpha > 0.0)) throw std::invalid_argument("best_chernoff_t: alpha must be positive");
  const double threshold = 0.25 * alpha * n * std::log(static_cast<double>(n));
  double lo = 1e-9, hi = 64.0;
  const double phi = 0.61803398874989485;
  double a = hi - phi * (hi - lo);
  double b = lo + phi * (hi - lo);
  auto f = [&](double t) { return log_tail_bound(t, threshold, alpha * n, sum_c_sq_lower); };
  double fa = f(a), fb = f(b);
  for (int it = 0; it < 200; ++it) {
    if (fa < fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - phi * (hi - lo);
      fa = f(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + phi * (hi - lo);
      fb = f(b);
    }
  }
  return 0.5 * (lo + hi);
}

double union_bound(int n, double k_prime, std::span<const double> p) {
  if (n < 1) throw std::invalid_argument("union_bound: n must be >= 1");
  if (!(k_prime > 0.0) || k_prime > 1.0)
    throw std::invalid_argument("union_bound: k_prime must lie in (0, 1]");
  if (static_cast<int>(p.size()) != n + 1)
    throw std::invalid_argument("union_bound: p must have n+1 entries indexed by error count");
  const int i_min = error_count_threshold(k_prime, n);

  // log-domain terms, summed with the max factored out
  std::vector<double> logs;
  logs.reserve(static_cast<std::size_t>(n - i_min + 1));
  const double lg_n1 = std::lgamma(n + 1.0);
  for (int i = i_min; i <= n; ++i) {
    const double pi = p[static_cast<std::size_t>(i)];
    if (std::isnan(pi)) throw std::invalid_argument("union_bound: missing p entry at i=" + std::to_string(i));
    if (pi < 0.0 || pi > 1.0)
      throw std::invalid_argument("union_bound: p entry out of [0,1] at i=" + std::to_string(i));
    if (pi == 0.0) continue;
    const double log_binom = lg_n1 - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0);
    logs.push_back(log_binom + std::log(0.5) + std::log(pi));
  }
  if (logs.empty()) return 0.0;
  const double peak = *std::max_element(logs.begin(), logs.end());
  double acc = 0.0;
  for (double l : logs) acc += std::exp(l - peak);
  return std::min(1.0, std::exp(peak) * acc);
}

double grid_union_bound(int n, double k_prime, double epsilon, double a) {
  if (n < 2) throw std::invalid_argument("grid_union_bound: n must be >= 2");
  if (!(k_prime > 0.0) || k_prime > 1.0)
    throw std::invalid_argument("grid_union_bound: k_prime must lie in (0, 1]");
  if (!(epsilon > 0.0) || !(epsilon < 1.0))
    throw std::invalid_argument("grid_union_bound: epsilon must lie in (0, 1)");
  if (!(a > 0.0)) throw std::invalid_argument("grid_union_bound: a must be positive");
  const int i_min = error_count_threshold(k_prime, n);
  double max_h2 = 0.0;
  for (int i = i_min; i <= n; ++i)
    max_h2 = std::max(max_h2, binary_entropy(static_cast<double>(i) / n));
  const double exponent =
      std::log2(static_cast<double>(n)) +
      n * (max_h2 - std::log2(epsilon) - a * std::log2(static_cast<double>(n)));
  return std::min(1.0, std::exp2(exponent));
}

double per_user_bound(double k_prime, double p_block) {
  if (k_prime < 0.0 || k_prime > 1.0 || p_block < 0.0 || p_block > 1.0)
    throw std::invalid_argument("per_user_bound: arguments must lie in [0, 1]");
  return std::min(1.0, k_prime + p_block);
}

void BoundParams::validate() const {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
  if (a && !(*a > 0.0)) throw std::invalid_argument("a must be positive");
  if (!(k_prime > 0.0) || k_prime > 1.0) throw std::invalid_argument("k_prime must lie in (0, 1]");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
}

BoundReport evaluate_bounds(int n, double alpha, const BoundParams& params, bool optimize_t) {
  params.validate();
  if (n < 2) throw std::invalid_argument("n must be >= 2");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");

  BoundReport rep{};
  const double sum_lower = params.k_prime * n;
  rep.chernoff_t = optimize_t ? best_chernoff_t(n, alpha, sum_lower) : params.t;
  const TailBound tb = lemma1_tail_bound(n, alpha, rep.chernoff_t, sum_lower);
  rep.threshold = tb.threshold;
  rep.per_pattern = tb.probability;

  // per-size tail bounds: patterns with i errors give sum(c^2) >= i
  std::vector<double> p(static_cast<std::size_t>(n) + 1,
                        std::numeric_limits<double>::quiet_NaN());
  for (int i = error_count_threshold(params.k_prime, n); i <= n; ++i)
    p[static_cast<std::size_t>(i)] =
        lemma1_tail_bound(n, alpha, rep.chernoff_t, static_cast<double>(i)).probability;
  rep.union_b = union_bound(n, params.k_prime, p);
  rep.grid_union =
      grid_union_bound(n, params.k_prime, params.epsilon, params.a.value_or(alpha / 4.0));
  rep.per_user = per_user_bound(params.k_prime, rep.union_b);
  rep.snr_per_antenna = snr_per_antenna(n, params.sigma);
  return rep;
}

}  // namespace isq
