// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The phr authors.

#pragma once

#include <cstdint>
#include <random>

#include "phr/types.hpp"

namespace phr {

struct RandomPhOptions {
  Eigen::Index n = 4;
  Eigen::Index m = 2;
  bool lossless = false;       // R = 0 and P = 0
  Eigen::Index s_rank = -1;    // rank of S, -1 for full
  bool skew_feedthrough = true;
  double q_spread = 4.0;       // cond(Q) upper bound
  double t_cond = 1e2;         // cond(T_s) upper bound for scrambling
};

PhRealization random_ph(std::mt19937_64& g, const RandomPhOptions& opt);

struct ScrambledInstance {
  PhRealization original;
  LtiSystem plain;      // ph_to_lti(original)
  LtiSystem scrambled;  // transform_system(plain, Ts, Vs)
  Mat Ts, Vs;
};

ScrambledInstance scrambled_ph(std::uint64_t seed, const RandomPhOptions& opt);

struct BrakeInstance {
  LtiSystem sys;
  Mat Mmass, Kstiff, Ddamp, Ggyro, Ncirc, Fin;
  Mat J, R, Q;                        // first-order blocks, J - R = (A Q^-1)
  double lambda_min_R = 0.0;          // lambda_min(sym(R))
  double max_real = 0.0;              // max Re eig((J - R) Q)
  bool witness_unstable = false;      // x^* R x < 0 for some eigenvector x of J
  double substitution_residual = 0.0; // first-order vs second-order dynamics
  double j_skew_residual = 0.0;
};

// M q'' + (D + G) q' + (K + n_scale * N) q = F u, y = F^T q'
BrakeInstance brake_squeal_instance(Eigen::Index n_q, double omega_ratio, Eigen::Index rank_n,
                                    std::uint64_t seed, double n_scale = 1.0);

// doubles n_scale from the given start until (J - R) Q has an eigenvalue with
// Re > margin, up to max_doublings
BrakeInstance brake_amplified_unstable(Eigen::Index n_q, double omega_ratio, Eigen::Index rank_n,
                                       std::uint64_t seed, double margin = 1e-6, int max_doublings = 40);

}  // namespace phr
