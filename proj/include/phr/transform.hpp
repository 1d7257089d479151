// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The phr authors.

#pragma once

#include <optional>

#include "phr/riccati.hpp"
#include "phr/types.hpp"

namespace phr {

// V0^T (D + D^T) V0 = blockdiag(0, 2 S2), kernel columns of V0 first
struct FeedthroughSplit {
  Mat V0;
  Eigen::Index kernel = 0;
  Mat S2;
  Mat B1, B2, C1, C2;
  double lambda_min = 0.0;  // of D + D^T
};

FeedthroughSplit feedthrough_reduce(const LtiSystem& sys, const Tolerances& tol = {});

struct SkewConditions {
  bool kernel_ok = false, rank_ok = false, psd_ok = false;
  double kernel_residual = 0.0;  // ||C^T N|| / ||C||, N orthonormal basis of Ker B
  Eigen::Index rank_b = 0, rank_c = 0, rank_cb = 0;
  double sigma_r = 0.0;          // r-th singular value of C B
  double lambda_min = 0.0;       // of sym(C11 B11) on the compressed block
  double skew_residual = 0.0;    // ||skew(C11 B11)|| / ||C11 B11||
  bool singular_t = false;       // Q B = C^T forces a singular storage matrix
  Mat Vb;                        // input rotation, range part first
  Mat B11, C11;                  // B Vb(:, :r), Vb(:, :r)^T C
  bool ok() const { return kernel_ok && rank_ok && psd_ok; }
  std::string failed_condition() const;
};

// b_floor, c_floor: absolute rank floors for B and C
SkewConditions check_skew_case_conditions(const Mat& B, const Mat& C, const Tolerances& tol = {},
                                          double b_floor = 0.0, double c_floor = 0.0);

struct T0Factor {
  Mat T0, T0inv;  // T0inv in closed form
  Mat Y;          // symmetric, C11 B11 = Y Y^T
  Mat NB, NC;     // NB^T NC = I, B11^T NB = 0, C11 NC = 0
  double inverse_residual = 0.0;     // ||T0 T0inv - I||
  double constraint_residual = 0.0;  // ||(T0 B11)^T - C11 T0inv||
};

T0Factor build_t0(const Mat& B11, const Mat& C11, const Tolerances& tol = {});

struct RecursionStep {
  int step = 0;
  Eigen::Index n = 0, m = 0, kernel = 0, rank = 0;
  SkewConditions conditions;
  double constraint_residual = 0.0;
  double inverse_residual = 0.0;
  std::string terminal;  // "", "lmi", "lyapunov", "empty"
};

struct RecursionTrace {
  std::vector<RecursionStep> steps;
  LtiSystem terminal_system;
  StorageOutcome terminal_storage;
};

struct RealizationFailure {
  std::string condition;  // lemT_a_kernel, lemT_a_rank, lemT_a_psd, thm_a, thm_b, thm_c, not_stable, not_semisimple
  int step = 0;
  std::string detail;
  bool singular_t = false;
};

struct RealizationResult {
  bool success = false;
  EquivalenceTransform transform;
  PhRealization ph;
  RecursionTrace trace;
  std::optional<RealizationFailure> failure;
  double lmi_lambda_max = 0.0;
  double lmi_scale = 1.0;
  double global_lambda_min = 0.0;  // lambda_min of -LMI, re-verified on Q = T^T T
};

// skew-symmetric feedthrough only
RealizationResult realize_skew_case(const LtiSystem& sys, const Tolerances& tol = {});
RealizationResult realize_general(const LtiSystem& sys, const Tolerances& tol = {});

// storage certificate Q = T^T T from the recursion without assembling the
// realization
struct RecursionStorage {
  std::optional<Mat> T;
  RecursionTrace trace;
  std::optional<RealizationFailure> failure;
};

RecursionStorage recursion_storage(const LtiSystem& sys, const Tolerances& tol = {});

}  // namespace phr
