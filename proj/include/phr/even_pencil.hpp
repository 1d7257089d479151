// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The phr authors.

#pragma once

#include "phr/riccati.hpp"
#include "phr/types.hpp"

namespace phr {

// lambda N - M with N = [[0, I, 0], [-I, 0, 0], [0, 0, 0]],
// M = [[0, A, B], [A^T, 0, C^T], [B^T, C, S]], S = D + D^T
struct EvenPencil {
  Mat N, M;
  Eigen::Index n = 0, m = 0;
};

EvenPencil build_even_pencil(const LtiSystem& sys);

struct DeflatingResidual {
  double residual = 0.0;  // ||N X (A - B Y) - M X||
  double scale = 1.0;
};

// X = [Q; -I; Y]
DeflatingResidual even_deflating_check(const EvenPencil& p, const Mat& Q, const Mat& Y);
// Y = S^-1 (C - B^T Q)
Mat deflating_feedback(const LtiSystem& sys, const Mat& Q);

struct PencilSpectrum {
  CVec finite;
  Eigen::Index n_infinite = 0;
  double pairing_residual = 0.0;  // max |lambda + conj(mu)| over the greedy +/- pairing
  bool index_one = false;         // S nonsingular and exactly m infinite eigenvalues
};

// |beta| * max(1, ||M||) <= inf_tol * |alpha| counts as infinite; perturbed
// higher-index blocks only reach |beta| ~ eps^(1/k)
PencilSpectrum pencil_spectrum(const EvenPencil& p, double inf_tol = 1e-5);

struct EvenStaircaseStep {
  Eigen::Index n = 0, m = 0;  // sizes entering the step
  Eigen::Index kernel = 0;    // dim Ker(D + D^T)
  Eigen::Index rank = 0;      // rank of B on the kernel inputs
  double sigma_min_b = 0.0;
  Mat T;    // state transform, T^T Q T = blockdiag(Q_next, Q22)
  Mat Q22;  // fixed block
};

struct EvenStaircase {
  LtiSystem reduced;
  std::vector<EvenStaircaseStep> steps;
  // storage for the original system from a storage matrix of the reduced one
  Mat lift(const Mat& Qk) const;
};

// Throws StructureViolation; the message starts with the failed condition id.
EvenStaircase even_staircase_reduce(const LtiSystem& sys, const Tolerances& tol = {});

// Positive definite storage through the staircase reduction and a terminal
// definite-mode solve.
StorageOutcome even_staircase_storage(const LtiSystem& sys, const Tolerances& tol = {});

}  // namespace phr
