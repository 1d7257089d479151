// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The phr authors.

#include "phr/lyapunov.hpp"

#include <cmath>

namespace phr {

Mat lyapunov_equation(const Mat& A, const Mat& Theta, const Tolerances& tol) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || Theta.rows() != n || Theta.cols() != n)
    throw Error(ErrorCode::InvalidInput, "lyapunov_equation: dimension mismatch");
  if (n == 0) return Mat(0, 0);
  const CVec ev = eigenvalues(A);
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(ev(i).real() < 0.0)) throw Error(ErrorCode::UnstableMatrix, "lyapunov_equation: A is not asymptotically stable");
  Mat Q;
  try {
    Q = solve_sylvester(A.transpose(), A, -sym(Theta));
  } catch (const Error& e) {
    throw Error(ErrorCode::SolveFailure, std::string("lyapunov_equation: ") + e.what());
  }
  Q = sym(Q);
  const double res = norm2(A.transpose() * Q + Q * A + Theta);
  const double scale = 2.0 * norm2(A) * norm2(Q) + norm2(Theta);
  if (!Q.allFinite() || res > std::max(tol.fact, 1e-9) * std::max(scale, 1e-300))
    throw Error(ErrorCode::SolveFailure, "lyapunov_equation: residual too large");
  return Q;
}

Mat axis_block_storage(const Mat& Aj, double omega) {
  const Eigen::Index k = Aj.rows();
  if (omega <= 0.0) return Mat::Identity(k, k);
  // period average of exp(A^T t) exp(A t) when A^2 = -omega^2 I
  return sym(0.5 * (Mat::Identity(k, k) + Aj.transpose() * Aj / (omega * omega)));
}

LyapunovSolution solve_lyapunov_inequality(const Mat& A, const Tolerances& tol, double theta1) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n) throw Error(ErrorCode::InvalidInput, "solve_lyapunov_inequality: A not square");
  LyapunovSolution sol;
  try {
    sol.split = split_stable_imaginary(A, tol.axis, tol.rank);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::UnstableMatrix)
      throw Error(ErrorCode::NotStable, "A has an eigenvalue in the open right half plane");
    throw;
  }
  const SpectralSplit& sp = sol.split;
  if (!sp.semisimple_flag)
    throw Error(ErrorCode::NotStable, "A has a defective eigenvalue on the imaginary axis");

  const Eigen::Index n1 = sp.n1(), n2 = sp.n2();
  Mat Qb = Mat::Zero(n, n);
  if (n1) Qb.topLeftCorner(n1, n1) = lyapunov_equation(sp.A1, theta1 * Mat::Identity(n1, n1), tol);
  for (const AxisCluster& c : sp.clusters) {
    const Mat Aj = sp.A2.block(c.offset, c.offset, c.size, c.size);
    Qb.block(n1 + c.offset, n1 + c.offset, c.size, c.size) = axis_block_storage(Aj, c.omega);
  }
  (void)n2;
  sol.Q = sym(sp.M.transpose() * Qb * sp.M);
  sol.cond_M = sp.cond_M;
  const Mat L = sym(A.transpose() * sol.Q + sol.Q * A);
  sol.Theta = -L;
  const double lmax = lambda_max_sym(L);
  sol.margin = -lmax;
  if (n && lambda_min_sym(sol.Q) <= 0.0)
    throw Error(ErrorCode::SolveFailure, "solve_lyapunov_inequality: constructed Q is not positive definite");
  if (n && lmax > 1e-9 * norm2(A) * norm2(sol.Q) + 1e-300)
    throw Error(ErrorCode::SolveFailure, "solve_lyapunov_inequality: residual check failed");
  return sol;
}

}  // namespace phr
