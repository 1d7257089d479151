// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The phr authors.

#pragma once

#include "phr/types.hpp"

namespace phr {

struct RankDecision {
  std::string stage;
  int step = 0;
  Eigen::Index rank = 0;
  double sigma_kept = 0.0;     // smallest retained singular value (0 if none)
  double sigma_dropped = 0.0;  // largest discarded singular value (0 if none)
};

// U^T A U = [[Ac, *], [0, Anc]], U^T B = [Bc; 0]
struct ControllabilityStaircase {
  Mat U;
  Eigen::Index n_c = 0;
  std::vector<RankDecision> decisions;
};

ControllabilityStaircase controllability_staircase(const Mat& A, const Mat& B, double rank_tol);

// W^T A W = [[Ao, 0], [*, Auo]], C W = [Co, 0]
struct ObservabilityStaircase {
  Mat W;
  Eigen::Index n_o = 0;
  std::vector<RankDecision> decisions;
};

ObservabilityStaircase observability_staircase(const Mat& A, const Mat& C, double rank_tol);

// U^T A U = [[A11, 0, A13], [A21, A22, A23], [0, 0, A33]]
// U^T B   = [B1; B2; 0],  C U = [C1, 0, C3]
struct StaircaseForm {
  Mat U;
  Eigen::Index n_co = 0, n_cuo = 0, n_uc = 0;
  Mat At, Bt, Ct;  // transformed matrices
  std::vector<RankDecision> decisions;

  Mat A11() const { return At.topLeftCorner(n_co, n_co); }
  Mat A21() const { return At.block(n_co, 0, n_cuo, n_co); }
  Mat A22() const { return At.block(n_co, n_co, n_cuo, n_cuo); }
  Mat A13() const { return At.block(0, n_co + n_cuo, n_co, n_uc); }
  Mat A23() const { return At.block(n_co, n_co + n_cuo, n_cuo, n_uc); }
  Mat A33() const { return At.bottomRightCorner(n_uc, n_uc); }
  Mat B1() const { return Bt.topRows(n_co); }
  Mat B2() const { return Bt.middleRows(n_co, n_cuo); }
  Mat C1() const { return Ct.leftCols(n_co); }
  Mat C3() const { return Ct.rightCols(n_uc); }
};

StaircaseForm staircase_decompose(const LtiSystem& sys, double rank_tol = 1e-10);

bool pbh_controllable(const Mat& A, const Mat& B, double rank_tol = 1e-10);
bool pbh_observable(const Mat& A, const Mat& C, double rank_tol = 1e-10);

}  // namespace phr
