// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The phr authors.

#pragma once

#include "phr/linalg.hpp"
#include "phr/types.hpp"

namespace phr {

// A^T Q + Q A + Theta = 0, A asymptotically stable.
Mat lyapunov_equation(const Mat& A, const Mat& Theta, const Tolerances& tol = {});

// Symmetric PD Q with Aj^T Q + Q Aj = 0 for a semisimple block whose
// eigenvalues are +/- i*omega.
Mat axis_block_storage(const Mat& Aj, double omega);

struct LyapunovSolution {
  Mat Q;
  Mat Theta;  // -(A^T Q + Q A)
  SpectralSplit split;
  double cond_M = 1.0;
  double margin = 0.0;  // -lambda_max(A^T Q + Q A); > 0 on the asymptotically stable branch
};

// theta1 scales the right-hand side used on the asymptotically stable block.
LyapunovSolution solve_lyapunov_inequality(const Mat& A, const Tolerances& tol = {}, double theta1 = 1.0);

}  // namespace phr
