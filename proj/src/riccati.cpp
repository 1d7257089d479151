// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The phr authors.

#include "phr/riccati.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <limits>
#include <optional>
#include <sstream>

#include "phr/lyapunov.hpp"
#include "phr/system_model.hpp"

namespace phr {

namespace {

constexpr double kIsotropyTol = 1.5e-7;

Eigen::LLT<Mat> spd_factor(const Mat& S, const Tolerances& tol) {
  const Mat Ss = sym(S);
  if (Ss.rows() && !(lambda_min_sym(Ss) > tol.psd * norm2(Ss)))
    throw Error(ErrorCode::SingularS, "S = D + D^T is not positive definite");
  Eigen::LLT<Mat> llt(Ss);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::SingularS, "Cholesky factorisation of S failed");
  return llt;
}

double max_real(const Mat& A) {
  if (A.rows() == 0) return -std::numeric_limits<double>::infinity();
  return eigenvalues(A).real().maxCoeff();
}

Mat solve_right(const Mat& X, const Mat& W1) {
  // X W1^{-1}
  return Eigen::PartialPivLU<Mat>(W1.transpose()).solve(X.transpose()).transpose();
}

double sigma_min(const Mat& M) {
  if (M.size() == 0) return 1.0;
  Eigen::JacobiSVD<Mat> svd(M);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

// symmetric unknowns in an orthonormal (Frobenius) basis
Mat sym_basis_element(Eigen::Index s, Eigen::Index i, Eigen::Index j) {
  Mat E = Mat::Zero(s, s);
  if (i == j) {
    E(i, i) = 1.0;
  } else {
    E(i, j) = E(j, i) = std::sqrt(0.5);
  }
  return E;
}

// Q with Bj^T Q = Cj, Aj^T Q + Q Aj = 0, Q > 0
std::optional<Mat> axis_cluster_storage(const Mat& Aj, double omega, const Mat& Bj, const Mat& Cj,
                                        const Tolerances& tol) {
  const Eigen::Index s = Aj.rows(), m = Bj.cols();
  const Eigen::Index p = s * (s + 1) / 2;
  std::vector<Mat> basis;
  basis.reserve(p);
  for (Eigen::Index j = 0; j < s; ++j)
    for (Eigen::Index i = 0; i <= j; ++i) basis.push_back(sym_basis_element(s, i, j));

  Mat L(s * s + m * s, p);
  for (Eigen::Index k = 0; k < p; ++k) {
    Mat Ly = Aj.transpose() * basis[k] + basis[k] * Aj;
    Mat Lb = Bj.transpose() * basis[k];
    L.col(k).head(s * s) = Eigen::Map<const Vec>(Ly.data(), s * s);
    L.col(k).tail(m * s) = Eigen::Map<const Vec>(Lb.data(), m * s);
  }
  Vec rhs = Vec::Zero(s * s + m * s);
  rhs.tail(m * s) = Eigen::Map<const Vec>(Cj.data(), m * s);

  const double nL = norm2(L);
  RankedSvd sv = ranked_svd(L, tol.rank, tol.rank * nL);
  const Eigen::Index r = sv.rank;
  Mat V = sv.Vt.transpose();
  Vec x = Vec::Zero(p);
  if (r > 0) {
    Vec c = sv.U.leftCols(r).transpose() * rhs;
    x = V.leftCols(r) * c.cwiseQuotient(sv.sigma.head(r));
  }
  const double res = (L * x - rhs).norm();
  if (res > 1e-8 * (nL * x.norm() + rhs.norm()) + 1e-300) return std::nullopt;

  auto assemble = [&](const Vec& y) {
    Mat Q = Mat::Zero(s, s);
    for (Eigen::Index k = 0; k < p; ++k) Q += y(k) * basis[k];
    return Q;
  };
  const Mat N = V.rightCols(p - r);
  const Mat qref = axis_block_storage(Aj, omega);
  Vec yref(p);
  for (Eigen::Index k = 0; k < p; ++k) yref(k) = (basis[k].array() * qref.array()).sum();
  const Vec dir = N * (N.transpose() * yref);
  const double base = std::max(1.0, x.norm());
  for (double c : {0.0, 1.0, 1e1, 1e2, 1e3, 1e4, 1e6}) {
    Mat Q = assemble(x + c * base * dir);
    if (lambda_min_sym(Q) > tol.psd * norm2(Q)) return Q;
  }
  return std::nullopt;
}

struct ReducedResult {
  bool ok = false;
  std::string condition, detail;
  Mat Q1;
  double xi = 0.0;
  int halvings = 0;
};

ReducedResult solve_reduced(const Mat& A1, const Mat& B1, const Mat& C1, const Mat& S, const Eigen::LLT<Mat>& Sf,
                            const Tolerances& tol, std::vector<RankDecision>& decisions) {
  ReducedResult out;
  const Eigen::Index n1 = A1.rows(), m = B1.cols();
  if (n1 == 0) {
    out.ok = true;
    out.Q1 = Mat(0, 0);
    return out;
  }
  StaircaseForm f = staircase_decompose(LtiSystem{A1, B1, C1, Mat::Zero(m, m)}, tol.rank);
  decisions.insert(decisions.end(), f.decisions.begin(), f.decisions.end());
  const Eigen::Index nco = f.n_co, ncuo = f.n_cuo, nc = nco + ncuo, nuc = f.n_uc;
  const double nA = std::max(norm2(A1), std::numeric_limits<double>::min());

  Mat Q110(nco, nco);
  if (nco > 0) {
    const Mat A11 = f.A11(), B1s = f.B1(), C1s = f.C1();
    const Mat K11 = A11 - B1s * Sf.solve(C1s);
    const double band = tol.axis * std::max(nA, norm2(K11));
    if (!(max_real(K11) < -band)) {
      out.condition = "thm_b";
      std::ostringstream os;
      os << "A11 - B1 S^-1 C1 is not asymptotically stable (max Re = " << max_real(K11) << ")";
      out.detail = os.str();
      return out;
    }
    try {
      HamiltonianMatrix h = build_hamiltonian(A11, B1s, C1s, S, tol);
      LagrangianSubspace ls = lagrangian_subspace(h, Side::left, tol);
      if (sigma_min(ls.W1) < tol.rank) throw Error(ErrorCode::W1Singular, "W1 is singular");
      Q110 = sym(solve_right(ls.W2, ls.W1));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoLagrangianSubspace && e.code() != ErrorCode::W1Singular) throw;
      out.condition = "thm_c";
      out.detail = e.what();
      return out;
    }
    if (!(lambda_min_sym(Q110) > 0.0)) {
      out.condition = "thm_c";
      out.detail = "Riccati solution of the controllable-observable block is not positive definite";
      return out;
    }
  }

  const Mat& At = f.At;
  const Mat At11 = At.topLeftCorner(nc, nc), At12 = At.topRightCorner(nc, nuc), At22 = At.bottomRightCorner(nuc, nuc);
  const Mat Bt1 = f.Bt.topRows(nc);
  const Mat Ct1 = f.Ct.leftCols(nc), Ct2 = f.Ct.rightCols(nuc);

  Mat Qt11 = Mat::Zero(nc, nc), Xi = Mat::Zero(nc, nc);
  if (nc > 0) {
    Mat Qt110 = Mat::Zero(nc, nc);
    Qt110.topLeftCorner(nco, nco) = Q110;
    const Mat A0 = At11 - Bt1 * Sf.solve(Ct1 - Bt1.transpose() * Qt110);
    const double band = tol.axis * std::max(nA, norm2(A0));
    BlockSplit sp = split_by_selection(A0, [band](cplx l) { return l.real() >= -band; });
    const Eigen::Index k1 = sp.A1.rows(), k2 = nc - k1;
    if (k2 == 0) {
      Qt11 = Qt110;
    } else {
      const Mat Sigma2 = sp.A2;
      const Mat B20 = (sp.M * Bt1).bottomRows(k2);
      const Mat G2 = sym(B20 * Sf.solve(B20.transpose()));
      double eps = tol.xi * std::max(norm2(A1), 1e-300);
      bool done = false;
      for (int t = 0; t <= tol.xi_retries && !done; ++t, eps *= 0.5) {
        HamiltonianMatrix hy;
        hy.k = k2;
        hy.H.resize(2 * k2, 2 * k2);
        hy.H << Sigma2, G2, -eps * Mat::Identity(k2, k2), -Sigma2.transpose();
        Mat Y2;
        try {
          LagrangianSubspace ls = lagrangian_subspace(hy, Side::left, tol);
          if (sigma_min(ls.W1) < tol.rank) continue;
          Y2 = sym(solve_right(ls.W2, ls.W1));
        } catch (const Error& e) {
          if (e.code() != ErrorCode::NoLagrangianSubspace) throw;
          continue;
        }
        if (!(lambda_min_sym(Y2) > 0.0)) continue;
        Mat Yb = Mat::Zero(nc, nc), Xb = Mat::Zero(nc, nc);
        Yb.bottomRightCorner(k2, k2) = Y2;
        Xb.bottomRightCorner(k2, k2) = eps * Mat::Identity(k2, k2);
        Mat cand = sym(Qt110 + sp.M.transpose() * Yb * sp.M);
        if (!(lambda_min_sym(cand) > 0.0)) continue;
        Qt11 = cand;
        Xi = sym(sp.M.transpose() * Xb * sp.M);
        out.xi = eps;
        out.halvings = t;
        done = true;
      }
      if (!done) {
        out.condition = "thm_c";
        out.detail = "perturbed Riccati equation has no stabilising positive definite solution";
        return out;
      }
    }
    if (!(lambda_min_sym(Qt11) > 0.0)) {
      out.condition = "thm_c";
      out.detail = "controllable block storage is not positive definite";
      return out;
    }
  }

  Mat Qt12 = Mat::Zero(nc, nuc), Qt22(nuc, nuc);
  if (nuc > 0) {
    Mat Wm;
    if (nc > 0) {
      const Mat E = At11 - Bt1 * Sf.solve(Ct1 - Bt1.transpose() * Qt11);
      const Mat rhs = -(Qt11 * (At12 - Bt1 * Sf.solve(Ct2)) + Ct1.transpose() * Sf.solve(Ct2));
      Qt12 = solve_sylvester(E.transpose(), At22, rhs);
      const Mat X = Eigen::LLT<Mat>(Qt11).solve(Qt12);
      const Mat Cx = Ct2 - Ct1 * X;
      Wm = Cx.transpose() * Sf.solve(Cx) + X.transpose() * Xi * X;
    } else {
      Wm = Ct2.transpose() * Sf.solve(Ct2);
    }
    const Mat Pi = lyapunov_equation(At22, Mat::Identity(nuc, nuc) + sym(Wm), tol);
    Qt22 = Pi;
    if (nc > 0) Qt22 += Qt12.transpose() * Eigen::LLT<Mat>(Qt11).solve(Qt12);
  }
  Mat Qt(n1, n1);
  Qt << Qt11, Qt12, Qt12.transpose(), Qt22;
  out.Q1 = sym(f.U * Qt * f.U.transpose());
  out.ok = true;
  return out;
}

StorageOutcome definite_storage(const LtiSystem& sys, const Tolerances& tol) {
  StorageOutcome out;
  const Eigen::Index n = sys.n();
  const Mat S = sym(sys.D + sys.D.transpose());
  Eigen::LLT<Mat> Sf = spd_factor(S, tol);

  SpectralSplit sp;
  try {
    sp = split_stable_imaginary(sys.A, tol.axis, tol.rank);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UnstableMatrix) throw;
    out.condition = "not_stable";
    out.detail = "A has an eigenvalue in the open right half plane";
    return out;
  }
  if (!sp.semisimple_flag) {
    out.condition = "not_semisimple";
    out.detail = "A has a defective eigenvalue on the imaginary axis";
    return out;
  }
  const Eigen::Index n1 = sp.n1(), n2 = sp.n2();
  const Mat Bh = sp.M * sys.B, Ch = sys.C * sp.Minv;

  Mat Q2 = Mat::Zero(n2, n2);
  for (const AxisCluster& c : sp.clusters) {
    const Mat Aj = sp.A2.block(c.offset, c.offset, c.size, c.size);
    const Mat Bj = Bh.middleRows(n1 + c.offset, c.size);
    const Mat Cj = Ch.middleCols(n1 + c.offset, c.size);
    auto q = axis_cluster_storage(Aj, c.omega, Bj, Cj, tol);
    if (!q) {
      out.condition = "thm_a";
      std::ostringstream os;
      os << "no positive definite Q2 with B2^T Q2 = C2 on the imaginary-axis block at omega = " << c.omega;
      out.detail = os.str();
      return out;
    }
    Q2.block(c.offset, c.offset, c.size, c.size) = *q;
  }

  ReducedResult rr = solve_reduced(sp.A1, Bh.topRows(n1), Ch.leftCols(n1), S, Sf, tol, out.decisions);
  if (!rr.ok) {
    out.condition = rr.condition;
    out.detail = rr.detail;
    return out;
  }
  out.xi = rr.xi;
  out.xi_halvings = rr.halvings;
  const Mat Q = sp.M.transpose() * blockdiag(rr.Q1, Q2) * sp.M;
  out.cert = make_certificate(sys, Q, StorageKind::positive_definite);
  out.n_observable = n;
  if (n && !(lambda_min_sym(out.cert.Q) > 0.0))
    throw Error(ErrorCode::CertificateRejected, "constructed storage matrix is not positive definite");
  if (out.cert.lmi_residual > tol.psd * out.cert.scale)
    throw Error(ErrorCode::CertificateRejected, "constructed storage matrix violates the passivity LMI");
  out.feasible = true;
  return out;
}

}  // namespace

HamiltonianMatrix build_hamiltonian(const Mat& A, const Mat& B, const Mat& C, const Mat& S, const Tolerances& tol) {
  const Eigen::Index k = A.rows(), m = B.cols();
  if (A.cols() != k || B.rows() != k || C.rows() != m || C.cols() != k || S.rows() != m || S.cols() != m)
    throw Error(ErrorCode::InvalidInput, "build_hamiltonian: dimension mismatch");
  Eigen::LLT<Mat> Sf = spd_factor(S, tol);
  const Mat F = A - B * Sf.solve(C);
  HamiltonianMatrix h;
  h.k = k;
  h.H.resize(2 * k, 2 * k);
  h.H << F, sym(B * Sf.solve(B.transpose())), -sym(C.transpose() * Sf.solve(C)), -F.transpose();
  return h;
}

double hamiltonian_structure_residual(const HamiltonianMatrix& h) {
  const Eigen::Index k = h.k;
  Mat G = Mat::Zero(2 * k, 2 * k);
  G.topRightCorner(k, k).setIdentity();
  G.bottomLeftCorner(k, k) = -Mat::Identity(k, k);
  const Mat GH = G * h.H;
  return norm2(GH - GH.transpose());
}

LagrangianSubspace lagrangian_subspace(const HamiltonianMatrix& h, Side side, const Tolerances& tol) {
  (void)tol;
  const Eigen::Index k = h.k, n = 2 * k;
  LagrangianSubspace out;
  if (k == 0) {
    out.W1 = out.W2 = out.E = Mat(0, 0);
    return out;
  }
  RealSchurForm s = real_schur(h.H);
  // numerically zero complex pairs come from perturbed Jordan blocks at the origin
  const double zero_band = 1e-7 * std::max(norm2(h.H), std::numeric_limits<double>::min());
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    if (s.T(i + 1, i) == 0.0 || std::abs(s.eig(i)) > zero_band) continue;
    Eigen::JacobiSVD<Mat> svd(s.T.block(i, i, 2, 2), Eigen::ComputeFullV);
    Mat G(2, 2);
    G.col(0) = svd.matrixV().col(1);
    G.col(1) << -G(1, 0), G(0, 0);
    s.T.middleRows(i, 2) = G.transpose() * s.T.middleRows(i, 2);
    s.T.middleCols(i, 2) = s.T.middleCols(i, 2) * G;
    s.Z.middleCols(i, 2) = s.Z.middleCols(i, 2) * G;
    s.T(i + 1, i) = 0.0;
    s.eig(i) = s.T(i, i);
    s.eig(i + 1) = s.T(i + 1, i + 1);
    ++i;
  }
  std::vector<Eigen::Index> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  const double sgn = side == Side::left ? 1.0 : -1.0;
  std::stable_sort(idx.begin(), idx.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return sgn * s.eig(a).real() < sgn * s.eig(b).real(); });
  std::vector<bool> sel(n, false);
  for (Eigen::Index i = 0; i < k; ++i) sel[idx[i]] = true;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    if (s.T(i + 1, i) != 0.0 && sel[i] != sel[i + 1]) {
      std::ostringstream os;
      os << "complex pair " << s.eig(i) << " straddles the half-spectrum split; no real Lagrangian subspace";
      throw Error(ErrorCode::NoLagrangianSubspace, os.str());
    }
  }
  s = reorder_schur(std::move(s), sel);
  const Mat W = s.Z.leftCols(k);
  out.W1 = W.topRows(k);
  out.W2 = W.bottomRows(k);
  out.E = s.T.topLeftCorner(k, k);
  out.eig_E = s.eig.head(k);
  out.isotropy = norm2(out.W1.transpose() * out.W2 - out.W2.transpose() * out.W1);
  out.invariance = norm2(h.H * W - W * out.E) / std::max(norm2(h.H), 1e-300);
  if (out.isotropy > kIsotropyTol) {
    std::ostringstream os;
    os << "selected invariant subspace is not Lagrangian (isotropy defect " << out.isotropy << ")";
    throw Error(ErrorCode::NoLagrangianSubspace, os.str());
  }
  return out;
}

Mat riccati_residual(const Mat& A, const Mat& B, const Mat& C, const Mat& S, const Mat& Q) {
  Eigen::LLT<Mat> Sf(sym(S));
  const Mat F = A - B * Sf.solve(C);
  return sym(F.transpose() * Q + Q * F + Q * B * Sf.solve(B.transpose() * Q) + C.transpose() * Sf.solve(C));
}

RiccatiSolution solve_are(const Mat& A, const Mat& B, const Mat& C, const Mat& S, Side side, const Tolerances& tol) {
  RiccatiSolution out;
  out.kind = side == Side::left ? RiccatiKind::minimal : RiccatiKind::maximal;
  out.hypotheses.controllable = pbh_controllable(A, B, tol.rank);
  out.hypotheses.observable = pbh_observable(A, C, tol.rank);
  out.hypotheses.asymptotically_stable = max_real(A) < 0.0;
  out.hypotheses.s_positive = S.rows() == 0 || lambda_min_sym(S) > tol.psd * norm2(S);

  HamiltonianMatrix h = build_hamiltonian(A, B, C, S, tol);
  LagrangianSubspace ls = lagrangian_subspace(h, side, tol);
  if (sigma_min(ls.W1) < tol.rank)
    throw Error(ErrorCode::W1Singular, "W1 is singular; the pair (A, B) is not controllable");
  out.Q = sym(solve_right(ls.W2, ls.W1));
  Eigen::LLT<Mat> Sf(sym(S));
  const Mat F = A - B * Sf.solve(C);
  const Mat G = sym(B * Sf.solve(B.transpose()));
  const Mat Hc = sym(C.transpose() * Sf.solve(C));
  out.closed_loop_spectrum = eigenvalues(F + G * out.Q);
  const Mat R = riccati_residual(A, B, C, S, out.Q);
  out.residual = norm2(R);
  const double nQ = norm2(out.Q);
  out.scale = std::max(2.0 * norm2(F) * nQ + norm2(G) * nQ * nQ + norm2(Hc), 1e-300);
  return out;
}

StorageOutcome solve_lmi_storage(const LtiSystem& sys, StorageMode mode, const Tolerances& tol) {
  auto v = validate_lti(sys);
  if (!v.empty()) throw Error(ErrorCode::InvalidInput, v.front());
  if (mode == StorageMode::definite) return definite_storage(sys, tol);

  const Eigen::Index n = sys.n();
  ObservabilityStaircase os = observability_staircase(sys.A, sys.C, tol.rank);
  const Eigen::Index no = os.n_o;
  const Mat& W = os.W;
  LtiSystem red;
  red.A = (W.transpose() * sys.A * W).topLeftCorner(no, no);
  red.B = (W.transpose() * sys.B).topRows(no);
  red.C = (sys.C * W).leftCols(no);
  red.D = sys.D;
  StorageOutcome out;
  if (no == 0) {
    const Mat S = sym(sys.D + sys.D.transpose());
    if (S.rows() && lambda_min_sym(S) < -tol.psd * norm2(S)) {
      out.condition = "lemT_a_psd";
      out.detail = "D + D^T is indefinite";
      return out;
    }
    out.cert = make_certificate(sys, Mat::Zero(n, n), StorageKind::positive_semidefinite);
  } else {
    out = definite_storage(red, tol);
    if (!out.feasible) return out;
    Mat Qb = Mat::Zero(n, n);
    Qb.topLeftCorner(no, no) = out.cert.Q;
    out.cert = make_certificate(sys, W * Qb * W.transpose(),
                                no == n ? StorageKind::positive_definite : StorageKind::positive_semidefinite);
  }
  out.decisions.insert(out.decisions.begin(), os.decisions.begin(), os.decisions.end());
  out.n_observable = no;
  if (out.cert.lmi_residual > tol.psd * out.cert.scale)
    throw Error(ErrorCode::CertificateRejected, "semidefinite storage matrix violates the passivity LMI");
  out.feasible = true;
  return out;
}

}  // namespace phr
