//
// Project isqsim - Copyright 2026 the isqsim authors.
// SPDX-License-Identifier: Apache-2.0
//
#include "isq/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace isq {

Constellation Constellation::make(std::string name, int dim, std::vector<Vec> points) {
  if (dim < 1) throw std::invalid_argument("constellation dim must be >= 1");
  if (points.size() < 2) throw std::invalid_argument("constellation needs at least 2 points");
  Constellation c;
  c.name = std::move(name);
  c.dim = dim;
  c.points = std::move(points);
  c.min_distance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    if (c.points[i].size() != dim)
      throw std::invalid_argument("constellation point dimension mismatch");
    c.box_radius = std::max(c.box_radius, c.points[i].norm());
    for (std::size_t j = i + 1; j < c.points.size(); ++j) {
      const double d = (c.points[i] - c.points[j]).norm();
      if (d == 0.0) throw std::invalid_argument("constellation points must be distinct");
      c.min_distance = std::min(c.min_distance, d);
    }
  }
  if (c.box_radius <= 0.0) throw std::invalid_argument("constellation box radius must be positive");
  return c;
}

Constellation Constellation::bpsk() {
  Vec minus(1), plus(1);
  minus << -1.0;
  plus << 1.0;
  return make("bpsk", 1, {minus, plus});
}

Constellation Constellation::pam4() {
  const double s = 1.0 / std::sqrt(5.0);  // unit average symbol energy
  std::vector<Vec> pts;
  for (double level : {-3.0, -1.0, 1.0, 3.0}) {
    Vec p(1);
    p << level * s;
    pts.push_back(p);
  }
  return make("pam4", 1, std::move(pts));
}

Constellation Constellation::psk4() {
  std::vector<Vec> pts(4, Vec(2));
  pts[0] << 1.0, 0.0;
  pts[1] << 0.0, 1.0;
  pts[2] << -1.0, 0.0;
  pts[3] << 0.0, -1.0;
  return make("psk4", 2, std::move(pts));
}

Constellation Constellation::by_name(const std::string& name) {
  if (name == "bpsk") return bpsk();
  if (name == "pam4") return pam4();
  if (name == "psk4") return psk4();
  throw std::invalid_argument("unknown constellation: " + name);
}

bool Constellation::is_bpsk() const {
  return dim == 1 && points.size() == 2 && points[0](0) == -1.0 && points[1](0) == 1.0;
}

Fading fading_by_name(const std::string& name) {
  if (name == "gaussian") return Fading::Gaussian;
  if (name == "rademacher") return Fading::Rademacher;
  if (name == "uniform") return Fading::UniformUnitVariance;
  throw std::invalid_argument("unknown fading: " + name);
}

std::string to_string(Fading fading) {
  switch (fading) {
    case Fading::Gaussian: return "gaussian";
    case Fading::Rademacher: return "rademacher";
    case Fading::UniformUnitVariance: return "uniform";
  }
  return "?";
}

double fading_draw(Fading fading, Rng& rng) {
  switch (fading) {
    case Fading::Gaussian: return rng.gaussian();
    case Fading::Rademacher: return rng.rademacher();
    case Fading::UniformUnitVariance:
      // U(-sqrt(3), sqrt(3)) has variance 1.
      return rng.uniform(-1.7320508075688772, 1.7320508075688772);
  }
  throw std::logic_error("unreachable");
}

Dimensions antennas_for(int n_users, double alpha) {
  if (n_users < 1) throw std::invalid_argument("n must be >= 1");
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("alpha must be positive and finite");
  const int m = std::max(1, static_cast<int>(std::floor(alpha * n_users + 0.5)));
  return Dimensions{n_users, m, alpha};
}

Dimensions antennas_for_schedule(int n_users, double xi) {
  if (n_users < 2) throw std::invalid_argument("antenna schedule requires n >= 2");
  if (!(xi > 0.0) || !(xi < 1.0)) throw std::invalid_argument("xi must lie in (0, 1)");
  const double alpha = 1.0 / std::pow(std::log(static_cast<double>(n_users)), xi);
  return antennas_for(n_users, alpha);
}

Mat sample_channel(int rows, int cols, Fading fading, Rng& rng) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("channel shape must be positive");
  Mat h(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) h(i, j) = fading_draw(fading, rng);
  return h;
}

Vec sample_codeword(const Constellation& c, int n_users, Rng& rng) {
  if (n_users < 1) throw std::invalid_argument("n must be >= 1");
  Vec x(static_cast<Eigen::Index>(n_users) * c.dim);
  for (int u = 0; u < n_users; ++u)
    x.segment(static_cast<Eigen::Index>(u) * c.dim, c.dim) = c.points[rng.index(c.points.size())];
  return x;
}

Vec transmit(const Mat& channel, const Vec& x, double sigma, Rng& rng) {
  if (channel.cols() != x.size()) throw std::invalid_argument("transmit: dimension mismatch");
  if (sigma < 0.0) throw std::invalid_argument("sigma must be nonnegative");
  Vec y = channel * x;
  if (sigma > 0.0)
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) += sigma * rng.gaussian();
  return y;
}

SystemInstance make_instance(const Dimensions& dims, const Constellation& c,
                             Fading fading, double sigma, Rng& rng) {
  Rng rng_channel = rng.split(1);
  Rng rng_codeword = rng.split(2);
  Rng rng_noise = rng.split(3);
  SystemInstance inst;
  inst.channel = sample_channel(dims.n_antennas * c.dim, dims.n_users * c.dim, fading, rng_channel);
  inst.codeword = sample_codeword(c, dims.n_users, rng_codeword);
  inst.sigma = sigma;
  inst.received = transmit(inst.channel, inst.codeword, sigma, rng_noise);
  return inst;
}

Vec quantize(const Constellation& c, const Vec& v) {
  if (v.size() % c.dim != 0)
    throw std::invalid_argument("quantize: length must be a multiple of the constellation dim");
  Vec out(v.size());
  const Eigen::Index blocks = v.size() / c.dim;
  for (Eigen::Index b = 0; b < blocks; ++b) {
    const auto seg = v.segment(b * c.dim, c.dim);
    std::size_t best = 0;
    double best_d2 = (seg - c.points[0]).squaredNorm();
    for (std::size_t k = 1; k < c.points.size(); ++k) {
      const double d2 = (seg - c.points[k]).squaredNorm();
      if (d2 < best_d2) {  // strict: ties keep the lowest index
        best_d2 = d2;
        best = k;
      }
    }
    out.segment(b * c.dim, c.dim) = c.points[best];
  }
  return out;
}

Vec sgn(const Vec& v) {
  return v.unaryExpr([](double x) { return x > 0.0 ? 1.0 : -1.0; });
}

Mat lift_block_fading(const Mat& channel, int slots) {
  if (slots < 1) throw std::invalid_argument("slots must be >= 1");
  Mat lifted = Mat::Zero(channel.rows() * slots, channel.cols() * slots);
  for (int t = 0; t < slots; ++t)
    lifted.block(t * channel.rows(), t * channel.cols(), channel.rows(), channel.cols()) = channel;
  return lifted;
}

double snr_per_antenna(int n_users, double sigma) {
  if (sigma == 0.0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(n_users) / (sigma * sigma);
}

}  // namespace isq
