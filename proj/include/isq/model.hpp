//
// Project isqsim - Copyright 2026 the isqsim authors.
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "isq/rng.hpp"

namespace isq {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Finite set of real symbol points, all of dimension `dim`. The point order
// is part of the contract: quantizer ties resolve to the lowest index.
struct Constellation {
  std::string name;
  int dim = 1;
  std::vector<Vec> points;
  double min_distance = 0.0;  // min pairwise Euclidean distance
  double box_radius = 0.0;    // max Euclidean norm over points

  static Constellation make(std::string name, int dim, std::vector<Vec> points);
  static Constellation bpsk();  // points (-1), (+1)
  static Constellation pam4();  // unit-energy 4-PAM
  static Constellation psk4();  // (1,0), (0,1), (-1,0), (0,-1)
  static Constellation by_name(const std::string& name);

  bool is_bpsk() const;
};

enum class Fading { Gaussian, Rademacher, UniformUnitVariance };

Fading fading_by_name(const std::string& name);
std::string to_string(Fading fading);

// Zero-mean unit-variance draw from the given law.
double fading_draw(Fading fading, Rng& rng);

struct Dimensions {
  int n_users = 0;
  int n_antennas = 0;
  double alpha = 0.0;  // effective antenna ratio used to derive n_antennas
};

// n_antennas = max(1, round-half-up(alpha * n)).
Dimensions antennas_for(int n_users, double alpha);

// Antenna schedule alpha_n = 1 / (ln n)^xi, xi in (0,1), n >= 2.
Dimensions antennas_for_schedule(int n_users, double xi);

// One realized problem: received = channel * codeword + noise.
struct SystemInstance {
  Mat channel;
  Vec codeword;
  double sigma = 0.0;
  Vec received;
};

Mat sample_channel(int rows, int cols, Fading fading, Rng& rng);
Vec sample_codeword(const Constellation& c, int n_users, Rng& rng);

// y = H x + nu with nu i.i.d. N(0, sigma^2); sigma == 0 gives exactly H x.
Vec transmit(const Mat& channel, const Vec& x, double sigma, Rng& rng);

SystemInstance make_instance(const Dimensions& dims, const Constellation& c,
                             Fading fading, double sigma, Rng& rng);

// Nearest constellation point per dim-block; ties to the lowest point index.
Vec quantize(const Constellation& c, const Vec& v);

// Coordinatewise signum with sgn(0) = -1.
Vec sgn(const Vec& v);

// Block-diagonal matrix with `slots` copies of the channel.
Mat lift_block_fading(const Mat& channel, int slots);

double snr_per_antenna(int n_users, double sigma);

}  // namespace isq
