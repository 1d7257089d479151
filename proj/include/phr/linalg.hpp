// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The phr authors.

#pragma once

#include <functional>

#include "phr/types.hpp"

namespace phr {

// ---- small helpers ----------------------------------------------------------

Mat sym(const Mat& M);
Mat skew(const Mat& M);
double norm2(const Mat& M);
double cond2(const Mat& M);
double lambda_min_sym(const Mat& M);
double lambda_max_sym(const Mat& M);
// lambda_min(sym(M)) >= -tol * ||M||_2
bool is_psd(const Mat& M, double tol);
Mat blockdiag(const Mat& A, const Mat& B);
CVec eigenvalues(const Mat& A);
// max |lambda + conj(mu)| / max(1, |lambda|) over a greedy +/- pairing
double pm_pairing_residual(const CVec& ev);

// ---- rank revealing SVD -----------------------------------------------------

struct RankedSvd {
  Mat U;
  Vec sigma;  // descending
  Mat Vt;
  Eigen::Index rank = 0;
};

// rank = #{ sigma_i > max(rank_tol * sigma_1, abs_floor) }
RankedSvd ranked_svd(const Mat& M, double rank_tol, double abs_floor = 0.0);
// orthonormal basis of the null space of M (columns)
Mat null_space(const Mat& M, double rank_tol, double abs_floor = 0.0);

// ---- real Schur forms -------------------------------------------------------

struct RealSchurForm {
  Mat T;  // quasi upper triangular, standardised 2x2 blocks
  Mat Z;  // orthogonal, A = Z T Z^T
  CVec eig;
};

RealSchurForm real_schur(const Mat& A);

// Reorders so that eigenvalues with select(lambda) == true lead.  Complex
// pairs are moved together; select is evaluated on the member with Im >= 0.
RealSchurForm ordered_schur(const Mat& A, const std::function<bool(cplx)>& select);
// position based variant; a complex pair moves if either position is selected
RealSchurForm reorder_schur(RealSchurForm s, const std::vector<bool>& select);
Eigen::Index count_selected(const CVec& eig, const std::function<bool(cplx)>& select);

// ---- Sylvester --------------------------------------------------------------

// A X + X B = C via Schur reduction of A and B and quasi-triangular back
// substitution.  sep_tol is an absolute lower bound on min |l_i(A) + l_j(B)|.
Mat solve_sylvester(const Mat& A, const Mat& B, const Mat& C, double sep_tol = 0.0);

// ---- block splitting --------------------------------------------------------

struct BlockSplit {
  Mat M, Minv;  // M A Minv = blockdiag(A1, A2)
  Mat A1, A2;
};

// selected eigenvalues go to A1; the coupling block is removed by a Sylvester
// solve, so the two selections must have disjoint spectra.
BlockSplit split_by_selection(const Mat& A, const std::function<bool(cplx)>& select);

struct AxisCluster {
  double omega = 0.0;         // eigenvalues are +/- i*omega
  Eigen::Index offset = 0;    // position inside A2
  Eigen::Index size = 0;
  Eigen::Index multiplicity = 0;  // algebraic multiplicity of i*omega
  Eigen::Index geometric = 0;     // dim Ker(A2_block - i*omega)
  bool semisimple = true;
};

struct SpectralSplit {
  Mat M, Minv;  // M A Minv = blockdiag(A1, A2)
  Mat A1;       // asymptotically stable part
  Mat A2;       // imaginary axis part, block diagonal by cluster
  bool semisimple_flag = true;
  std::vector<AxisCluster> clusters;
  double cond_M = 1.0;
  Eigen::Index n1() const { return A1.rows(); }
  Eigen::Index n2() const { return A2.rows(); }
};

// Throws Error(UnstableMatrix) when Re(lambda) > axis_tol * ||A|| for some eigenvalue.
SpectralSplit split_stable_imaginary(const Mat& A, double axis_tol, double rank_tol = 1e-10);

// ---- factors and bases ------------------------------------------------------

// symmetric positive square root, M = Y Y^T with Y = Y^T
Mat symmetric_sqrt_factor(const Mat& M, double tol_psd);

struct KernelPair {
  Mat NB;  // n x (n-r), columns span Ker B^T
  Mat NC;  // n x (n-r), columns span Ker C
  double sigma_min = 0.0;  // smallest singular value of NB^T NC before scaling
};

// abs_floor guards rank decisions on matrices that are zero up to round-off
KernelPair biorthogonal_kernel_bases(const Mat& B, const Mat& C, double rank_tol,
                                     double abs_floor = 0.0);

// ---- generalized eigenvalues (QZ) -------------------------------------------

struct GeneralizedEig {
  CVec alpha;
  Vec beta;
};

// det(beta * A - alpha * B) = 0
GeneralizedEig generalized_eigenvalues(const Mat& A, const Mat& B);

}  // namespace phr
