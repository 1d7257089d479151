// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The phr authors.

#pragma once

#include <functional>

#include "phr/types.hpp"

namespace phr {

std::vector<std::string> validate_lti(const LtiSystem& sys);

// Violations of the skew/symmetry/definiteness invariants of a realization.
std::vector<std::string> check_ph_invariants(const PhRealization& ph, const Tolerances& tol = {});

// [[A^T Q + Q A, Q B - C^T], [B^T Q - C, -(D + D^T)]]
Mat lmi_matrix(const LtiSystem& sys, const Mat& Q);
double lmi_scale(const LtiSystem& sys, const Mat& Q);
double lmi_lambda_max(const LtiSystem& sys, const Mat& Q);
StorageCertificate make_certificate(const LtiSystem& sys, const Mat& Q, StorageKind kind);

// x -> T x, u -> V u
LtiSystem transform_system(const LtiSystem& sys, const Mat& T, const Mat& V);
LtiSystem ph_to_lti(const PhRealization& ph);

// C (sI - A)^{-1} B + D
CMat transfer_function(const LtiSystem& sys, cplx s);

PhRealization assemble_ph_from_storage(const LtiSystem& sys, const Mat& T, const Tolerances& tol = {});

struct DissipationResult {
  double lhs = 0.0;  // H(x(T_f)) - H(x(0))
  double rhs = 0.0;  // integral of y^T u
};

using InputSignal = std::function<Vec(double)>;

DissipationResult dissipation_check(const PhRealization& ph, const InputSignal& u, const Vec& x0,
                                    double horizon, int steps);

}  // namespace phr
