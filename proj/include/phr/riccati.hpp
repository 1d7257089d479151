// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The phr authors.

#pragma once

#include "phr/linalg.hpp"
#include "phr/staircase.hpp"
#include "phr/types.hpp"

namespace phr {

struct HamiltonianMatrix {
  Mat H;
  Eigen::Index k = 0;
};

// [[A - B S^-1 C, B S^-1 B^T], [-C^T S^-1 C, -(A - B S^-1 C)^T]]
HamiltonianMatrix build_hamiltonian(const Mat& A, const Mat& B, const Mat& C, const Mat& S,
                                    const Tolerances& tol = {});
// || Gamma H - (Gamma H)^T ||
double hamiltonian_structure_residual(const HamiltonianMatrix& h);

enum class Side { left, right };

struct LagrangianSubspace {
  Mat W1, W2;
  Mat E;  // H [W1; W2] = [W1; W2] E
  CVec eig_E;
  double isotropy = 0.0;    // ||W1^T W2 - W2^T W1||
  double invariance = 0.0;  // ||H W - W E|| / ||H||
};

// Invariant subspace for the k eigenvalues with smallest (left) or largest
// (right) real part.  Throws NoLagrangianSubspace when that subspace does
// not exist or is not isotropic.
LagrangianSubspace lagrangian_subspace(const HamiltonianMatrix& h, Side side, const Tolerances& tol = {});

enum class RiccatiKind { minimal, maximal };

struct RiccatiHypotheses {
  bool controllable = false;
  bool observable = false;
  bool asymptotically_stable = false;
  bool s_positive = false;
};

struct RiccatiSolution {
  Mat Q;
  CVec closed_loop_spectrum;  // eig(A - B S^-1 (C - B^T Q))
  RiccatiKind kind = RiccatiKind::minimal;
  double residual = 0.0;
  double scale = 1.0;
  RiccatiHypotheses hypotheses;
};

// (A - B S^-1 C)^T Q + Q (A - B S^-1 C) + Q B S^-1 B^T Q + C^T S^-1 C
Mat riccati_residual(const Mat& A, const Mat& B, const Mat& C, const Mat& S, const Mat& Q);

RiccatiSolution solve_are(const Mat& A, const Mat& B, const Mat& C, const Mat& S, Side side,
                          const Tolerances& tol = {});

enum class StorageMode { definite, semidefinite };

struct StorageOutcome {
  bool feasible = false;
  std::string condition;  // thm_a, thm_b, thm_c, not_stable, not_semisimple
  std::string detail;
  StorageCertificate cert;
  double xi = 0.0;        // perturbation size used
  int xi_halvings = 0;
  Eigen::Index n_observable = 0;
  std::vector<RankDecision> decisions;
};

// Storage matrix for the passivity LMI, D + D^T positive definite.
StorageOutcome solve_lmi_storage(const LtiSystem& sys, StorageMode mode, const Tolerances& tol = {});

}  // namespace phr
