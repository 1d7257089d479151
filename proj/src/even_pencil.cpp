// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The phr authors.

#include "phr/even_pencil.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <sstream>

#include "phr/linalg.hpp"
#include "phr/lyapunov.hpp"
#include "phr/system_model.hpp"

namespace phr {

namespace {

[[noreturn]] void violation(const std::string& id, const std::string& what) {
  throw Error(ErrorCode::StructureViolation, id + ": " + what);
}

double sigma_min_of(const Mat& M) {
  if (M.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(M);
  return svd.singularValues().minCoeff();
}

struct InputSplit {
  Mat V;  // orthogonal, kernel columns first
  Eigen::Index kernel = 0;
};

InputSplit split_inputs(const Mat& S, const Tolerances& tol) {
  InputSplit out;
  const Eigen::Index m = S.rows();
  out.V = Mat::Identity(m, m);
  if (m == 0) return out;
  Eigen::SelfAdjointEigenSolver<Mat> es(sym(S));
  const Vec& ev = es.eigenvalues();
  const double thr = tol.rank * std::max(ev.cwiseAbs().maxCoeff(), 1.0);
  if (ev(0) < -std::max(thr, tol.psd * ev.cwiseAbs().maxCoeff())) {
    std::ostringstream os;
    os << "feedthrough D + D^T is indefinite (lambda_min = " << ev(0) << ")";
    violation("lemT_a_psd", os.str());
  }
  for (Eigen::Index i = 0; i < m; ++i)
    if (ev(i) <= thr) ++out.kernel;
  out.V = es.eigenvectors();
  return out;
}

}  // namespace

EvenPencil build_even_pencil(const LtiSystem& sys) {
  const Eigen::Index n = sys.n(), m = sys.m(), N = 2 * n + m;
  EvenPencil p;
  p.n = n;
  p.m = m;
  p.N = Mat::Zero(N, N);
  p.N.block(0, n, n, n).setIdentity();
  p.N.block(n, 0, n, n) = -Mat::Identity(n, n);
  p.M = Mat::Zero(N, N);
  p.M.block(0, n, n, n) = sys.A;
  p.M.block(0, 2 * n, n, m) = sys.B;
  p.M.block(n, 0, n, n) = sys.A.transpose();
  p.M.block(n, 2 * n, n, m) = sys.C.transpose();
  p.M.block(2 * n, 0, m, n) = sys.B.transpose();
  p.M.block(2 * n, n, m, n) = sys.C;
  p.M.block(2 * n, 2 * n, m, m) = sys.D + sys.D.transpose();
  return p;
}

Mat deflating_feedback(const LtiSystem& sys, const Mat& Q) {
  const Mat S = sym(sys.D + sys.D.transpose());
  return Eigen::LLT<Mat>(S).solve(sys.C - sys.B.transpose() * Q);
}

DeflatingResidual even_deflating_check(const EvenPencil& p, const Mat& Q, const Mat& Y) {
  const Eigen::Index n = p.n, m = p.m;
  Mat X(2 * n + m, n);
  X << Q, -Mat::Identity(n, n), Y;
  const Mat A = p.M.block(0, n, n, n), B = p.M.block(0, 2 * n, n, m);
  const Mat L = A - B * Y;
  DeflatingResidual r;
  r.residual = norm2(p.N * X * L - p.M * X);
  r.scale = std::max(1.0, norm2(p.M) * norm2(X) * (1.0 + norm2(X)));
  return r;
}

PencilSpectrum pencil_spectrum(const EvenPencil& p, double inf_tol) {
  PencilSpectrum out;
  const Eigen::Index N = p.M.rows();
  if (N == 0) {
    out.index_one = true;
    return out;
  }
  GeneralizedEig ge = generalized_eigenvalues(p.M, p.N);
  const double sc = std::max(1.0, norm2(p.M));
  std::vector<cplx> fin;
  for (Eigen::Index i = 0; i < N; ++i) {
    if (std::abs(ge.beta(i)) * sc <= inf_tol * std::abs(ge.alpha(i)))
      ++out.n_infinite;
    else
      fin.push_back(ge.alpha(i) / ge.beta(i));
  }
  out.finite = CVec(static_cast<Eigen::Index>(fin.size()));
  for (std::size_t i = 0; i < fin.size(); ++i) out.finite(static_cast<Eigen::Index>(i)) = fin[i];
  out.pairing_residual = pm_pairing_residual(out.finite);
  const Mat S = p.M.bottomRightCorner(p.m, p.m);
  const bool s_regular = p.m == 0 || ranked_svd(S, 1e-10, 1e-10 * sc).rank == p.m;
  out.index_one = s_regular && out.n_infinite == p.m;
  return out;
}

Mat EvenStaircase::lift(const Mat& Qk) const {
  Mat Q = Qk;
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    if (it->T.size() == 0) continue;
    const Mat Tinv = it->T.inverse();
    Q = sym(Tinv.transpose() * blockdiag(Q, it->Q22) * Tinv);
  }
  return Q;
}

EvenStaircase even_staircase_reduce(const LtiSystem& sys, const Tolerances& tol) {
  auto v = validate_lti(sys);
  if (!v.empty()) throw Error(ErrorCode::InvalidInput, v.front());
  EvenStaircase out;
  LtiSystem cur = sys;
  const double floor = tol.rank * std::max(1.0, norm2(sys.A) + norm2(sys.B) + norm2(sys.C));
  for (int guard = 0; guard <= sys.n() + sys.m() + 1; ++guard) {
    const Eigen::Index n = cur.n(), m = cur.m();
    if (n == 0 || m == 0) {
      if (m) split_inputs(cur.D + cur.D.transpose(), tol);
      break;
    }
    InputSplit sp = split_inputs(cur.D + cur.D.transpose(), tol);
    if (sp.kernel == 0) break;
    const Eigen::Index l = sp.kernel, m2 = m - l;
    const Mat V1 = sp.V.leftCols(l), V2 = sp.V.rightCols(m2);
    const Mat B1 = cur.B * V1, C1 = V1.transpose() * cur.C;
    const Mat B2 = cur.B * V2, C2 = V2.transpose() * cur.C;

    EvenStaircaseStep st;
    st.n = n;
    st.m = m;
    st.kernel = l;
    RankedSvd sv = ranked_svd(B1, tol.rank, floor);
    const Eigen::Index r = sv.rank;
    st.rank = r;
    st.sigma_min_b = r ? sv.sigma(r - 1) : 0.0;
    const Mat Vb = sv.Vt.transpose();
    // kernel inputs of B1 must not reach the output
    const Mat Cker = Vb.rightCols(l - r).transpose() * C1;
    if (Cker.size() && norm2(Cker) > floor + tol.rank * norm2(C1)) {
      std::ostringstream os;
      os << "Ker B1 is not contained in Ker C1^T (residual " << norm2(Cker) << ")";
      violation("lemT_a_kernel", os.str());
    }
    Mat Ut(n, n);
    Ut << sv.U.rightCols(n - r), sv.U.leftCols(r);
    const Mat Crot = Vb.leftCols(r).transpose() * C1 * Ut;  // [C11, C12]
    const Mat C11 = Crot.leftCols(n - r), C12 = Crot.rightCols(r);
    const Mat SigB = sv.sigma.head(r).asDiagonal();
    if (r) {
      const Mat CS = C12 * SigB;
      if (sigma_min_of(CS) <= tol.rank * std::max(norm2(C1) * norm2(B1), floor)) {
        violation("lemT_a_rank", "C1 B1 is rank deficient on the range of B1");
      }
      if (norm2(skew(CS)) > tol.psd * norm2(CS) || !(lambda_min_sym(CS) > tol.psd * norm2(CS))) {
        std::ostringstream os;
        os << "C12 Sigma_B is not symmetric positive definite (lambda_min = " << lambda_min_sym(CS) << ")";
        violation("lemT_a_psd", os.str());
      }
    }
    const Mat SigInv = sv.sigma.head(r).cwiseInverse().asDiagonal();
    const Mat Q22 = sym(C12.transpose() * SigInv);
    const Mat Q12 = C11.transpose() * SigInv;
    Mat T0 = Mat::Identity(n, n);
    if (r) T0.bottomLeftCorner(r, n - r) = -Eigen::LLT<Mat>(Q22).solve(Q12.transpose());
    const Mat T = Ut * T0;
    const Mat Tinv = T0.inverse() * Ut.transpose();
    const Mat Ah = Tinv * cur.A * T;
    const Mat Bh2 = Tinv * B2, Ch2 = C2 * T;
    const Eigen::Index n1 = n - r;
    const Mat A11 = Ah.topLeftCorner(n1, n1), A12 = Ah.topRightCorner(n1, r);
    const Mat A21 = Ah.bottomLeftCorner(r, n1), A22 = Ah.bottomRightCorner(r, r);

    LtiSystem nxt;
    nxt.A = A11;
    nxt.B.resize(n1, r + m2);
    nxt.B << A12, Bh2.topRows(n1);
    nxt.C.resize(r + m2, n1);
    nxt.C << -Q22 * A21, Ch2.leftCols(n1);
    Mat Dn(r + m2, r + m2);
    const Mat S2 = sym(V2.transpose() * (cur.D + cur.D.transpose()) * V2);
    const Mat X12 = Ch2.rightCols(r).transpose() - Q22 * Bh2.bottomRows(r);
    Dn << -sym(A22.transpose() * Q22 + Q22 * A22), X12, X12.transpose(), S2;
    nxt.D = 0.5 * Dn;
    st.T = T;
    st.Q22 = Q22;
    out.steps.push_back(std::move(st));
    cur = std::move(nxt);
  }
  out.reduced = std::move(cur);
  return out;
}

StorageOutcome even_staircase_storage(const LtiSystem& sys, const Tolerances& tol) {
  StorageOutcome out;
  try {
    SpectralSplit sp = split_stable_imaginary(sys.A, tol.axis, tol.rank);
    if (!sp.semisimple_flag) {
      out.condition = "not_semisimple";
      out.detail = "A has a defective eigenvalue on the imaginary axis";
      return out;
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UnstableMatrix) throw;
    out.condition = "not_stable";
    out.detail = e.what();
    return out;
  }
  EvenStaircase es;
  try {
    es = even_staircase_reduce(sys, tol);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::StructureViolation) throw;
    const std::string w = e.what();
    const auto colon = w.find(':');
    out.condition = w.substr(0, colon);
    out.detail = colon == std::string::npos ? w : w.substr(colon + 2);
    return out;
  }
  const LtiSystem& red = es.reduced;
  Mat Qk;
  if (red.n() == 0) {
    Qk = Mat(0, 0);
  } else if (red.m() == 0) {
    try {
      Qk = solve_lyapunov_inequality(red.A, tol).Q;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotStable) throw;
      out.condition = "not_stable";
      out.detail = std::string("reduced dynamics: ") + e.what();
      return out;
    }
  } else {
    StorageOutcome inner = solve_lmi_storage(red, StorageMode::definite, tol);
    if (!inner.feasible) {
      inner.detail = "terminal step: " + inner.detail;
      return inner;
    }
    Qk = inner.cert.Q;
    out.xi = inner.xi;
    out.xi_halvings = inner.xi_halvings;
    out.decisions = std::move(inner.decisions);
  }
  const Mat Q = es.lift(Qk);
  out.cert = make_certificate(sys, Q, StorageKind::positive_definite);
  out.n_observable = sys.n();
  if (sys.n() && !(lambda_min_sym(Q) > 0.0))
    throw Error(ErrorCode::CertificateRejected, "lifted storage matrix is not positive definite");
  if (out.cert.lmi_residual > tol.psd * out.cert.scale)
    throw Error(ErrorCode::CertificateRejected, "lifted storage matrix violates the passivity LMI");
  out.feasible = true;
  return out;
}

}  // namespace phr
