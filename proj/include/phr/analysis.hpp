// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The phr authors.

#pragma once

#include <optional>
#include <utility>

#include "phr/even_pencil.hpp"
#include "phr/staircase.hpp"
#include "phr/transform.hpp"
#include "phr/types.hpp"

namespace phr {

struct FailureReason {
  std::string condition;  // lemT_a_kernel, lemT_a_rank, lemT_a_psd, thm_a, thm_b, thm_c, not_stable, not_semisimple
  std::string stage;      // stability, passivity, realization
  int step = 0;
  std::string detail;
  std::vector<std::pair<std::string, double>> witnesses;
};

struct AnalysisOptions {
  Tolerances tol;
  bool passive_only = false;
};

struct AnalysisResiduals {
  double lyapunov = 0.0;        // lambda_max(A^T Q + Q A) / (||A|| ||Q||), stability certificate
  double passive_lmi = 0.0;     // lambda_max of the LMI at the passivity certificate / scale
  double lmi_lambda_max = 0.0;  // at Q = T^T T of the realization
  double lmi_scale = 1.0;
  double constraint_residual = 0.0;  // max over recursion steps
  double j_skew = 0.0, r_sym = 0.0, s_sym = 0.0, n_skew = 0.0;
  double k_lambda_min = 0.0;
  double reconstruction = 0.0;  // ||realized - transformed system|| / scale
};

struct AnalysisTiming {
  double stability_ms = 0.0, passivity_ms = 0.0, realization_ms = 0.0;
};

struct AnalysisReport {
  Eigen::Index n = 0, m = 0;
  bool stable = false, asymptotically_stable = false, passive = false, ph_realizable = false;
  bool realization_attempted = false;
  double spectral_abscissa = 0.0;
  std::string passivity_route;  // lmi, recursion_observable, zero_storage, none
  Eigen::Index n_observable = 0;
  std::vector<FailureReason> failure_reasons;
  std::vector<std::string> adjustments;  // verdicts lowered by the monotonicity rule
  std::vector<RecursionStep> recursion;
  std::vector<RankDecision> rank_decisions;
  AnalysisResiduals residuals;
  double cond_T = 0.0;
  Tolerances tol;
  AnalysisTiming timing;
  std::optional<StorageCertificate> passivity_certificate;
  std::optional<RealizationResult> realization;
};

AnalysisReport analyze_system(const LtiSystem& sys, const AnalysisOptions& opt = {});

// ph_realizable => passive => stable; lowers verdicts that violate the chain
void enforce_monotonicity(AnalysisReport& r);

struct SpectrumReport {
  CVec eig_A;
  bool s_definite = false;
  CVec eig_H;  // empty unless D + D^T is positive definite
  double hamiltonian_pairing = 0.0;
  PencilSpectrum pencil;
  std::string warning;
};

SpectrumReport spectrum_report(const LtiSystem& sys, const Tolerances& tol = {});

}  // namespace phr
