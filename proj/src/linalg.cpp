// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The phr authors.

#include "phr/linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace phr {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

using Blocks = std::vector<std::pair<Eigen::Index, Eigen::Index>>;

// (start, size) of the diagonal blocks of a quasi upper triangular matrix
Blocks schur_blocks(const Mat& T) {
  Blocks blocks;
  const Eigen::Index n = T.rows();
  Eigen::Index i = 0;
  while (i < n) {
    if (i + 1 < n && T(i + 1, i) != 0.0) {
      blocks.emplace_back(i, 2);
      i += 2;
    } else {
      blocks.emplace_back(i, 1);
      i += 1;
    }
  }
  return blocks;
}

// A Y + Y B = C for blocks of order <= 2
Mat solve_small_sylvester(const Mat& A, const Mat& B, const Mat& C) {
  const Eigen::Index p = A.rows(), q = B.rows();
  Mat K = Mat::Zero(p * q, p * q);
  // vec(A Y) = (I_q kron A) vec(Y), vec(Y B) = (B^T kron I_p) vec(Y)
  for (Eigen::Index j = 0; j < q; ++j) {
    K.block(j * p, j * p, p, p) += A;
    for (Eigen::Index l = 0; l < q; ++l) {
      K.block(j * p, l * p, p, p) += B(l, j) * Mat::Identity(p, p);
    }
  }
  Vec rhs = Eigen::Map<const Vec>(C.data(), p * q);
  Eigen::FullPivLU<Mat> lu(K);
  Vec y = lu.solve(rhs);
  return Eigen::Map<Mat>(y.data(), p, q);
}

}  // namespace

const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::SingularT: return "SingularT";
    case ErrorCode::CertificateRejected: return "CertificateRejected";
    case ErrorCode::IntegrationFailure: return "IntegrationFailure";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::UnstableMatrix: return "UnstableMatrix";
    case ErrorCode::NotStable: return "NotStable";
    case ErrorCode::SolveFailure: return "SolveFailure";
    case ErrorCode::SpectraOverlap: return "SpectraOverlap";
    case ErrorCode::NotPsd: return "NotPsd";
    case ErrorCode::DegenerateKernelPairing: return "DegenerateKernelPairing";
    case ErrorCode::SingularS: return "SingularS";
    case ErrorCode::NoLagrangianSubspace: return "NoLagrangianSubspace";
    case ErrorCode::W1Singular: return "W1Singular";
    case ErrorCode::ConditionViolated: return "ConditionViolated";
    case ErrorCode::StructureViolation: return "StructureViolation";
  }
  return "Unknown";
}

Mat sym(const Mat& M) { return 0.5 * (M + M.transpose()); }
Mat skew(const Mat& M) { return 0.5 * (M - M.transpose()); }

double norm2(const Mat& M) {
  if (M.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(M);
  return svd.singularValues()(0);
}

double cond2(const Mat& M) {
  if (M.size() == 0) return 1.0;
  Eigen::JacobiSVD<Mat> svd(M);
  const Vec& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

double lambda_min_sym(const Mat& M) {
  if (M.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(sym(M), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double lambda_max_sym(const Mat& M) {
  if (M.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(sym(M), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

bool is_psd(const Mat& M, double tol) {
  if (M.size() == 0) return true;
  return lambda_min_sym(M) >= -tol * norm2(M);
}

Mat blockdiag(const Mat& A, const Mat& B) {
  Mat R = Mat::Zero(A.rows() + B.rows(), A.cols() + B.cols());
  R.topLeftCorner(A.rows(), A.cols()) = A;
  R.bottomRightCorner(B.rows(), B.cols()) = B;
  return R;
}

CVec eigenvalues(const Mat& A) { return real_schur(A).eig; }

double pm_pairing_residual(const CVec& ev) {
  const Eigen::Index k = ev.size();
  std::vector<bool> used(static_cast<std::size_t>(k), false);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) {
    if (used[i]) continue;
    // a purely imaginary eigenvalue may pair with itself
    double best = std::abs(ev(i) + std::conj(ev(i)));
    Eigen::Index bj = i;
    for (Eigen::Index j = 0; j < k; ++j) {
      if (j == i || used[j]) continue;
      const double d = std::abs(ev(i) + std::conj(ev(j)));
      if (d < best) best = d, bj = j;
    }
    used[i] = used[bj] = true;
    worst = std::max(worst, best / std::max(1.0, std::abs(ev(i))));
  }
  return worst;
}

RankedSvd ranked_svd(const Mat& M, double rank_tol, double abs_floor) {
  RankedSvd out;
  if (!M.allFinite()) throw Error(ErrorCode::InvalidInput, "ranked_svd: non-finite entry");
  Eigen::BDCSVD<Mat> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) throw Error(ErrorCode::ConvergenceFailure, "SVD did not converge");
  out.U = svd.matrixU();
  out.sigma = svd.singularValues();
  out.Vt = svd.matrixV().transpose();
  const double s1 = out.sigma.size() ? out.sigma(0) : 0.0;
  const double thr = std::max(rank_tol * s1, abs_floor);
  out.rank = 0;
  for (Eigen::Index i = 0; i < out.sigma.size(); ++i) {
    if (out.sigma(i) > thr) ++out.rank;
  }
  return out;
}

Mat null_space(const Mat& M, double rank_tol, double abs_floor) {
  RankedSvd s = ranked_svd(M, rank_tol, abs_floor);
  const Eigen::Index q = M.cols();
  return s.Vt.transpose().rightCols(q - s.rank);
}

RealSchurForm real_schur(const Mat& A) {
  const Eigen::Index n = A.rows();
  RealSchurForm out;
  out.T = A;
  out.Z = Mat::Identity(n, n);
  out.eig.resize(n);
  if (n == 0) return out;
  if (!A.allFinite()) throw Error(ErrorCode::InvalidInput, "real_schur: non-finite entry");
  std::vector<double> wr(n), wi(n);
  lapack_int sdim = 0;
  lapack_int info = LAPACKE_dgees(LAPACK_COL_MAJOR, 'V', 'N', nullptr, static_cast<lapack_int>(n),
                                  out.T.data(), static_cast<lapack_int>(n), &sdim, wr.data(),
                                  wi.data(), out.Z.data(), static_cast<lapack_int>(n));
  if (info != 0) throw Error(ErrorCode::ConvergenceFailure, "dgees failed");
  for (Eigen::Index i = 0; i < n; ++i) out.eig(i) = cplx(wr[i], wi[i]);
  return out;
}

Eigen::Index count_selected(const CVec& eig, const std::function<bool(cplx)>& select) {
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    cplx l = eig(i);
    if (select(cplx(l.real(), std::abs(l.imag())))) ++k;
  }
  return k;
}

RealSchurForm reorder_schur(RealSchurForm s, const std::vector<bool>& select) {
  const Eigen::Index n = s.T.rows();
  if (n == 0) return s;
  if (static_cast<Eigen::Index>(select.size()) != n)
    throw Error(ErrorCode::InvalidInput, "reorder_schur: selection size mismatch");
  std::vector<lapack_logical> sel(n, 0);
  for (Eigen::Index i = 0; i < n; ++i) sel[i] = select[i] ? 1 : 0;
  std::vector<double> wr(n), wi(n);
  lapack_int nn = static_cast<lapack_int>(n), m = 0, info = 0;
  lapack_int lwork = std::max<lapack_int>(1, nn), liwork = 1, iwork = 0;
  std::vector<double> work(lwork);
  double sdum = 0.0, sepdum = 0.0;
  char job = 'N', compq = 'V';
  dtrsen_(&job, &compq, sel.data(), &nn, s.T.data(), &nn, s.Z.data(), &nn, wr.data(), wi.data(), &m, &sdum,
          &sepdum, work.data(), &lwork, &iwork, &liwork, &info, 1, 1);
  if (info != 0) throw Error(ErrorCode::ConvergenceFailure, "dtrsen: reordering rejected");
  for (Eigen::Index i = 0; i < n; ++i) s.eig(i) = cplx(wr[i], wi[i]);
  return s;
}

RealSchurForm ordered_schur(const Mat& A, const std::function<bool(cplx)>& select) {
  RealSchurForm s = real_schur(A);
  const Eigen::Index n = A.rows();
  std::vector<bool> sel(n, false);
  for (Eigen::Index i = 0; i < n; ++i) {
    cplx l = s.eig(i);
    sel[i] = select(cplx(l.real(), std::abs(l.imag())));
  }
  return reorder_schur(std::move(s), sel);
}

Mat solve_sylvester(const Mat& A, const Mat& B, const Mat& C, double sep_tol) {
  const Eigen::Index p = A.rows(), q = B.rows();
  if (A.cols() != p || B.cols() != q || C.rows() != p || C.cols() != q)
    throw Error(ErrorCode::InvalidInput, "solve_sylvester: dimension mismatch");
  if (p == 0 || q == 0) return Mat::Zero(p, q);

  RealSchurForm sa = real_schur(A);
  RealSchurForm sb = real_schur(B);

  const double scale = std::max(norm2(A) + norm2(B), std::numeric_limits<double>::min());
  const double thr = std::max(sep_tol, 64.0 * kEps * scale);
  double sep = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < q; ++j) sep = std::min(sep, std::abs(sa.eig(i) + sb.eig(j)));
  if (sep <= thr) throw Error(ErrorCode::SpectraOverlap, "solve_sylvester: spectra of A and -B overlap");

  const Mat& TA = sa.T;
  const Mat& TB = sb.T;
  Mat F = sa.Z.transpose() * C * sb.Z;
  Mat Y = Mat::Zero(p, q);
  const Blocks ba = schur_blocks(TA);
  const Blocks bb = schur_blocks(TB);

  for (const auto& [cj, sj] : bb) {
    Mat rhs = F.middleCols(cj, sj);
    if (cj > 0) rhs -= Y.leftCols(cj) * TB.block(0, cj, cj, sj);
    for (auto it = ba.rbegin(); it != ba.rend(); ++it) {
      const auto [ri, si] = *it;
      Mat r = rhs.middleRows(ri, si);
      const Eigen::Index tail = p - ri - si;
      if (tail > 0) r -= TA.block(ri, ri + si, si, tail) * Y.block(ri + si, cj, tail, sj);
      Y.block(ri, cj, si, sj) = solve_small_sylvester(TA.block(ri, ri, si, si), TB.block(cj, cj, sj, sj), r);
    }
  }
  Mat X = sa.Z * Y * sb.Z.transpose();
  if (!X.allFinite()) throw Error(ErrorCode::SolveFailure, "solve_sylvester: non-finite solution");
  return X;
}

BlockSplit split_by_selection(const Mat& A, const std::function<bool(cplx)>& select) {
  const Eigen::Index n = A.rows();
  RealSchurForm s = ordered_schur(A, select);
  const Eigen::Index k = count_selected(s.eig, select);
  BlockSplit out;
  const Mat T11 = s.T.topLeftCorner(k, k);
  const Mat T12 = s.T.topRightCorner(k, n - k);
  const Mat T22 = s.T.bottomRightCorner(n - k, n - k);
  Mat X = Mat::Zero(k, n - k);
  if (k > 0 && k < n) X = solve_sylvester(T11, -T22, -T12);
  Mat Pinv = Mat::Identity(n, n);
  Pinv.topRightCorner(k, n - k) = -X;
  Mat P = Mat::Identity(n, n);
  P.topRightCorner(k, n - k) = X;
  out.M = Pinv * s.Z.transpose();
  out.Minv = s.Z * P;
  out.A1 = T11;
  out.A2 = T22;
  return out;
}

SpectralSplit split_stable_imaginary(const Mat& A, double axis_tol, double rank_tol) {
  const Eigen::Index n = A.rows();
  const double nA = norm2(A);
  const double band = axis_tol * nA;
  CVec eig = eigenvalues(A);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (eig(i).real() > band)
      throw Error(ErrorCode::UnstableMatrix, "eigenvalue in the open right half plane");
  }
  BlockSplit st = split_by_selection(A, [band](cplx l) { return l.real() < -band; });

  SpectralSplit out;
  out.A1 = st.A1;
  const Eigen::Index n1 = st.A1.rows();
  const Eigen::Index n2 = n - n1;

  // cluster the imaginary-axis eigenvalues by |Im|
  CVec e2 = eigenvalues(st.A2);
  std::vector<double> om(n2);
  for (Eigen::Index i = 0; i < n2; ++i) om[i] = std::abs(e2(i).imag());
  std::sort(om.begin(), om.end());
  const double ctol = 1e-6 * std::max(nA, std::numeric_limits<double>::min());
  std::vector<std::pair<double, double>> ranges;  // [lo, hi] of each cluster
  for (double w : om) {
    if (ranges.empty() || w - ranges.back().second > ctol)
      ranges.emplace_back(w, w);
    else
      ranges.back().second = w;
  }

  Mat Mc = Mat::Identity(n2, n2), Mcinv = Mat::Identity(n2, n2);
  Mat rest = st.A2;
  Eigen::Index off = 0;
  std::vector<Mat> blocks;
  for (size_t c = 0; c < ranges.size(); ++c) {
    const double lo = ranges[c].first - 0.5 * ctol, hi = ranges[c].second + 0.5 * ctol;
    if (c + 1 == ranges.size()) {
      blocks.push_back(rest);
      break;
    }
    BlockSplit cs = split_by_selection(rest, [lo, hi](cplx l) { return l.imag() >= lo && l.imag() <= hi; });
    const Eigen::Index r = rest.rows();
    Mat Mstep = Mat::Identity(n2, n2), Mstepinv = Mat::Identity(n2, n2);
    Mstep.bottomRightCorner(r, r) = cs.M;
    Mstepinv.bottomRightCorner(r, r) = cs.Minv;
    Mc = Mstep * Mc;
    Mcinv = Mcinv * Mstepinv;
    blocks.push_back(cs.A1);
    rest = cs.A2;
  }

  out.A2 = Mat::Zero(n2, n2);
  for (size_t c = 0; c < blocks.size(); ++c) {
    const Mat& Cb = blocks[c];
    const Eigen::Index d = Cb.rows();
    out.A2.block(off, off, d, d) = Cb;
    AxisCluster cl;
    cl.offset = off;
    cl.size = d;
    CVec ec = eigenvalues(Cb);
    double w = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) w += std::abs(ec(i).imag());
    w /= static_cast<double>(d);
    if (w <= ctol) w = 0.0;
    cl.omega = w;
    cl.multiplicity = (w > 0.0 && d % 2 == 0) ? d / 2 : d;
    CMat shifted = Cb.cast<cplx>() - cplx(0.0, w) * CMat::Identity(d, d);
    Eigen::JacobiSVD<CMat> svd(shifted);
    const Vec& s = svd.singularValues();
    const double thr = std::max(rank_tol * (s.size() ? s(0) : 0.0), rank_tol * nA);
    Eigen::Index rk = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) > thr) ++rk;
    cl.geometric = d - rk;
    cl.semisimple = (cl.geometric == cl.multiplicity);
    out.semisimple_flag = out.semisimple_flag && cl.semisimple;
    out.clusters.push_back(cl);
    off += d;
  }

  Mat Mfull = Mat::Identity(n, n), Mfullinv = Mat::Identity(n, n);
  Mfull.bottomRightCorner(n2, n2) = Mc;
  Mfullinv.bottomRightCorner(n2, n2) = Mcinv;
  out.M = Mfull * st.M;
  out.Minv = st.Minv * Mfullinv;
  out.cond_M = cond2(out.M);
  return out;
}

Mat symmetric_sqrt_factor(const Mat& M, double tol_psd) {
  if (M.rows() != M.cols()) throw Error(ErrorCode::InvalidInput, "symmetric_sqrt_factor: not square");
  if (M.size() == 0) return M;
  Eigen::SelfAdjointEigenSolver<Mat> es(sym(M));
  const Vec& l = es.eigenvalues();
  const double nM = std::max(std::abs(l(0)), std::abs(l(l.size() - 1)));
  if (l(0) < -tol_psd * nM) throw Error(ErrorCode::NotPsd, "symmetric_sqrt_factor: matrix is not PSD");
  Vec r = l.cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * r.asDiagonal() * es.eigenvectors().transpose();
}

KernelPair biorthogonal_kernel_bases(const Mat& B, const Mat& C, double rank_tol, double abs_floor) {
  const Eigen::Index n = B.rows();
  if (C.cols() != n) throw Error(ErrorCode::InvalidInput, "biorthogonal_kernel_bases: dimension mismatch");
  RankedSvd sb = ranked_svd(B, rank_tol, abs_floor);
  RankedSvd sc = ranked_svd(C, rank_tol, abs_floor);
  if (sb.rank != sc.rank)
    throw Error(ErrorCode::DegenerateKernelPairing, "rank B differs from rank C");
  const Eigen::Index r = sb.rank;
  KernelPair kp;
  Mat NB = sb.U.rightCols(n - r);
  Mat NC = sc.Vt.transpose().rightCols(n - r);
  if (n - r == 0) {
    kp.NB = NB;
    kp.NC = NC;
    kp.sigma_min = 1.0;
    return kp;
  }
  Eigen::JacobiSVD<Mat> w(NB.transpose() * NC, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec& d = w.singularValues();
  kp.sigma_min = d(d.size() - 1);
  if (kp.sigma_min < rank_tol)
    throw Error(ErrorCode::DegenerateKernelPairing, "Ker B^T and Ker C are not complementary to Ran B");
  Vec dinv = d.cwiseSqrt().cwiseInverse();
  kp.NB = NB * w.matrixU() * dinv.asDiagonal();
  kp.NC = NC * w.matrixV() * dinv.asDiagonal();
  return kp;
}

GeneralizedEig generalized_eigenvalues(const Mat& A, const Mat& B) {
  const Eigen::Index n = A.rows();
  GeneralizedEig out;
  out.alpha.resize(n);
  out.beta.resize(n);
  if (n == 0) return out;
  Mat a = A, b = B;
  std::vector<double> ar(n), ai(n), be(n);
  double dummy = 0.0;
  lapack_int info = LAPACKE_dggev(LAPACK_COL_MAJOR, 'N', 'N', static_cast<lapack_int>(n), a.data(),
                                  static_cast<lapack_int>(n), b.data(), static_cast<lapack_int>(n),
                                  ar.data(), ai.data(), be.data(), &dummy, 1, &dummy, 1);
  if (info != 0) throw Error(ErrorCode::ConvergenceFailure, "dggev failed");
  for (Eigen::Index i = 0; i < n; ++i) {
    out.alpha(i) = cplx(ar[i], ai[i]);
    out.beta(i) = be[i];
  }
  return out;
}

}  // namespace phr
