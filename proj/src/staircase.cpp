// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The phr authors.

#include "phr/staircase.hpp"

#include <Eigen/SVD>

#include "phr/linalg.hpp"

namespace phr {

namespace {

Mat embed(Eigen::Index n, Eigen::Index off, const Mat& W) {
  Mat E = Mat::Identity(n, n);
  E.block(off, off, W.rows(), W.cols()) = W;
  return E;
}

bool pbh_full_rank(const Mat& A, const Mat& B, double rank_tol) {
  const Eigen::Index n = A.rows(), m = B.cols();
  if (n == 0) return true;
  const double thr = rank_tol * (norm2(A) + norm2(B));
  const CVec ev = eigenvalues(A);
  for (Eigen::Index k = 0; k < n; ++k) {
    CMat M(n, n + m);
    M.leftCols(n) = ev(k) * CMat::Identity(n, n) - A.cast<cplx>();
    M.rightCols(m) = B.cast<cplx>();
    Eigen::JacobiSVD<CMat> svd(M);
    const Vec& s = svd.singularValues();
    if (s.size() < n || !(s(n - 1) > thr)) return false;
  }
  return true;
}

}  // namespace

ControllabilityStaircase controllability_staircase(const Mat& A, const Mat& B, double rank_tol) {
  const Eigen::Index n = A.rows();
  ControllabilityStaircase out;
  out.U = Mat::Identity(n, n);
  Mat At = A, Bt = B;
  const double floor = rank_tol * (norm2(A) + norm2(B));
  Eigen::Index off = 0, prev = 0;
  for (int step = 0; off < n; ++step) {
    const Eigen::Index p = n - off;
    Mat G = step == 0 ? Mat(Bt) : Mat(At.block(off, off - prev, p, prev));
    RankDecision d;
    d.stage = "controllability";
    d.step = step;
    if (G.cols() == 0) {
      out.decisions.push_back(d);
      break;
    }
    RankedSvd s = ranked_svd(G, rank_tol, floor);
    d.rank = s.rank;
    d.sigma_kept = s.rank ? s.sigma(s.rank - 1) : 0.0;
    d.sigma_dropped = s.rank < s.sigma.size() ? s.sigma(s.rank) : 0.0;
    out.decisions.push_back(d);
    if (s.rank == 0) break;
    const Mat E = embed(n, off, s.U);
    At = E.transpose() * At * E;
    Bt = E.transpose() * Bt;
    out.U = out.U * E;
    if (step == 0)
      Bt.bottomRows(p - s.rank).setZero();
    else
      At.block(off + s.rank, off - prev, p - s.rank, prev).setZero();
    off += s.rank;
    prev = s.rank;
  }
  out.n_c = off;
  return out;
}

ObservabilityStaircase observability_staircase(const Mat& A, const Mat& C, double rank_tol) {
  ControllabilityStaircase cs = controllability_staircase(A.transpose(), C.transpose(), rank_tol);
  ObservabilityStaircase out;
  out.W = cs.U;
  out.n_o = cs.n_c;
  out.decisions = std::move(cs.decisions);
  for (auto& d : out.decisions) d.stage = "observability";
  return out;
}

StaircaseForm staircase_decompose(const LtiSystem& sys, double rank_tol) {
  const Eigen::Index n = sys.n();
  ControllabilityStaircase cs = controllability_staircase(sys.A, sys.B, rank_tol);
  const Eigen::Index nc = cs.n_c;
  const Mat A1 = cs.U.transpose() * sys.A * cs.U;
  const Mat Ac = A1.topLeftCorner(nc, nc);
  const Mat Cc = sys.C * cs.U.leftCols(nc);
  ObservabilityStaircase os = observability_staircase(Ac, Cc, rank_tol);

  StaircaseForm f;
  f.U = cs.U * embed(n, 0, os.W);
  f.n_co = os.n_o;
  f.n_cuo = nc - os.n_o;
  f.n_uc = n - nc;
  f.At = f.U.transpose() * sys.A * f.U;
  f.Bt = f.U.transpose() * sys.B;
  f.Ct = sys.C * f.U;
  f.At.block(nc, 0, f.n_uc, nc).setZero();
  f.At.block(0, f.n_co, f.n_co, f.n_cuo).setZero();
  f.Bt.bottomRows(f.n_uc).setZero();
  f.Ct.middleCols(f.n_co, f.n_cuo).setZero();
  f.decisions = cs.decisions;
  f.decisions.insert(f.decisions.end(), os.decisions.begin(), os.decisions.end());
  return f;
}

bool pbh_controllable(const Mat& A, const Mat& B, double rank_tol) { return pbh_full_rank(A, B, rank_tol); }

bool pbh_observable(const Mat& A, const Mat& C, double rank_tol) {
  return pbh_full_rank(A.transpose(), C.transpose(), rank_tol);
}

}  // namespace phr
