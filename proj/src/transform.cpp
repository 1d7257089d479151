// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The phr authors.

#include "phr/transform.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "phr/linalg.hpp"
#include "phr/lyapunov.hpp"
#include "phr/system_model.hpp"

namespace phr {

namespace {

double psd_threshold(const LtiSystem& sys, const Mat& S, const Tolerances& tol) {
  const double nA = norm2(sys.A);
  double port = norm2(sys.D);
  if (nA > 0.0) port += norm2(sys.B) * norm2(sys.C) / nA;
  return std::max(tol.psd * norm2(S), tol.rank * port);
}

RealizationFailure make_failure(std::string cond, int step, std::string detail, bool singular_t = false) {
  RealizationFailure f;
  f.condition = std::move(cond);
  f.step = step;
  f.detail = std::move(detail);
  f.singular_t = singular_t;
  return f;
}

}  // namespace

FeedthroughSplit feedthrough_reduce(const LtiSystem& sys, const Tolerances& tol) {
  const Eigen::Index m = sys.m();
  FeedthroughSplit fs;
  const Mat S = sym(sys.D + sys.D.transpose());
  if (m == 0) {
    fs.V0 = Mat(0, 0);
    fs.S2 = Mat(0, 0);
    fs.B1 = fs.B2 = Mat(sys.n(), 0);
    fs.C1 = fs.C2 = Mat(0, sys.n());
    return fs;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(S);
  const Vec& ev = es.eigenvalues();
  fs.lambda_min = ev(0);
  const double thr = psd_threshold(sys, S, tol);
  for (Eigen::Index i = 0; i < m; ++i)
    if (std::abs(ev(i)) <= thr) ++fs.kernel;
  // negative eigenvalues beyond the band stay in the S2 block and are reported by the caller
  std::vector<Eigen::Index> order;
  for (Eigen::Index i = 0; i < m; ++i)
    if (std::abs(ev(i)) <= thr) order.push_back(i);
  for (Eigen::Index i = 0; i < m; ++i)
    if (std::abs(ev(i)) > thr) order.push_back(i);
  fs.V0.resize(m, m);
  for (Eigen::Index j = 0; j < m; ++j) fs.V0.col(j) = es.eigenvectors().col(order[j]);
  const Eigen::Index l = fs.kernel;
  const Mat V1 = fs.V0.leftCols(l), V2 = fs.V0.rightCols(m - l);
  fs.S2 = 0.5 * sym(V2.transpose() * S * V2);
  fs.B1 = sys.B * V1;
  fs.B2 = sys.B * V2;
  fs.C1 = V1.transpose() * sys.C;
  fs.C2 = V2.transpose() * sys.C;
  return fs;
}

std::string SkewConditions::failed_condition() const {
  if (!kernel_ok) return "lemT_a_kernel";
  if (!rank_ok) return "lemT_a_rank";
  if (!psd_ok) return "lemT_a_psd";
  return "";
}

SkewConditions check_skew_case_conditions(const Mat& B, const Mat& C, const Tolerances& tol, double b_floor,
                                          double c_floor) {
  SkewConditions sc;
  const Eigen::Index l = B.cols();
  RankedSvd sb = ranked_svd(B, tol.rank, b_floor);
  RankedSvd scv = ranked_svd(C, tol.rank, c_floor);
  sc.rank_b = sb.rank;
  sc.rank_c = scv.rank;
  const Eigen::Index r = sb.rank;
  sc.Vb = sb.Vt.transpose();
  const Mat Nk = sc.Vb.rightCols(l - r);
  const double nC = norm2(C);
  const double kres = Nk.cols() ? norm2(C.transpose() * Nk) : 0.0;
  sc.kernel_residual = nC > 0.0 ? kres / nC : 0.0;
  sc.kernel_ok = sc.rank_b == sc.rank_c && kres <= c_floor + tol.rank * nC;
  sc.B11 = B * sc.Vb.leftCols(r);
  sc.C11 = sc.Vb.leftCols(r).transpose() * C;
  const Mat CB = sc.C11 * sc.B11;
  if (r > 0) {
    RankedSvd scb = ranked_svd(CB, tol.rank, tol.rank * norm2(sc.C11) * norm2(sc.B11));
    sc.rank_cb = scb.rank;
    sc.sigma_r = scb.sigma(r - 1);
    sc.rank_ok = scb.rank == r;
    const double ncb = norm2(CB);
    sc.skew_residual = ncb > 0.0 ? norm2(skew(CB)) / ncb : 0.0;
    sc.lambda_min = lambda_min_sym(CB);
    sc.psd_ok = sc.skew_residual <= tol.psd && sc.lambda_min > tol.psd * ncb;
  } else {
    sc.rank_ok = sc.psd_ok = true;
  }
  sc.singular_t = sc.rank_c < sc.rank_b || (sc.kernel_ok && !sc.rank_ok);
  return sc;
}

T0Factor build_t0(const Mat& B11, const Mat& C11, const Tolerances& tol) {
  const Eigen::Index n = B11.rows();
  T0Factor f;
  KernelPair kp = biorthogonal_kernel_bases(B11, C11, tol.rank);
  f.NB = kp.NB;
  f.NC = kp.NC;
  f.Y = symmetric_sqrt_factor(sym(C11 * B11), tol.psd);
  const Mat Yinv = f.Y.inverse();
  f.T0.resize(n, n);
  f.T0 << f.NB.transpose(), Yinv * C11;
  f.T0inv.resize(n, n);
  f.T0inv << f.NC, B11 * Yinv.transpose();
  f.inverse_residual = norm2(f.T0 * f.T0inv - Mat::Identity(n, n));
  f.constraint_residual = norm2((f.T0 * B11).transpose() - C11 * f.T0inv);
  return f;
}

RecursionStorage recursion_storage(const LtiSystem& sys, const Tolerances& tol) {
  RecursionStorage out;
  auto v = validate_lti(sys);
  if (!v.empty()) throw Error(ErrorCode::InvalidInput, v.front());
  try {
    SpectralSplit sp = split_stable_imaginary(sys.A, tol.axis, tol.rank);
    if (!sp.semisimple_flag) {
      out.failure = make_failure("not_semisimple", 0, "A has a defective eigenvalue on the imaginary axis");
      return out;
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UnstableMatrix) throw;
    out.failure = make_failure("not_stable", 0, e.what());
    return out;
  }

  struct Frame {
    Mat T0;
    Eigen::Index r = 0;
  };
  std::vector<Frame> frames;
  LtiSystem cur = sys;
  const double base_floor = psd_threshold(sys, Mat::Zero(0, 0), tol);
  Mat Z;
  const int guard = static_cast<int>(sys.n() + sys.m()) + 2;
  for (int step = 0;; ++step) {
    if (step > guard) {
      out.failure = make_failure("numerical", step, "recursion depth guard reached");
      return out;
    }
    const Eigen::Index n = cur.n(), m = cur.m();
    RecursionStep rec;
    rec.step = step;
    rec.n = n;
    rec.m = m;
    FeedthroughSplit fs = feedthrough_reduce(cur, tol);
    const Mat S = sym(cur.D + cur.D.transpose());
    if (m > 0 && fs.lambda_min < -std::max(psd_threshold(cur, S, tol), base_floor)) {
      std::ostringstream os;
      os << "D + D^T is indefinite at step " << step << " (lambda_min = " << fs.lambda_min << ")";
      out.trace.steps.push_back(rec);
      out.failure = make_failure("lemT_a_psd", step, os.str());
      return out;
    }
    rec.kernel = fs.kernel;
    if (n == 0) {
      rec.terminal = "empty";
      out.trace.steps.push_back(rec);
      Z = Mat(0, 0);
      break;
    }
    if (m == 0) {
      rec.terminal = "lyapunov";
      out.trace.steps.push_back(rec);
      out.trace.terminal_system = cur;
      try {
        LyapunovSolution ls = solve_lyapunov_inequality(cur.A, tol);
        Eigen::LLT<Mat> llt(ls.Q);
        Z = llt.matrixL().transpose();
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NotStable) throw;
        out.failure = make_failure("not_stable", step, e.what());
        return out;
      }
      break;
    }
    if (fs.kernel == 0) {
      rec.terminal = "lmi";
      out.trace.steps.push_back(rec);
      out.trace.terminal_system = cur;
      StorageOutcome so = solve_lmi_storage(cur, StorageMode::definite, tol);
      out.trace.terminal_storage = so;
      if (!so.feasible) {
        out.failure = make_failure(so.condition, step, so.detail);
        return out;
      }
      Eigen::LLT<Mat> llt(so.cert.Q);
      if (llt.info() != Eigen::Success) {
        out.failure = make_failure("numerical", step, "terminal storage matrix is not numerically positive definite");
        return out;
      }
      Z = llt.matrixL().transpose();
      break;
    }
    const double b_floor = tol.rank * (norm2(cur.A) + norm2(cur.B));
    const double c_floor = tol.rank * (norm2(cur.A) + norm2(cur.C));
    SkewConditions sc = check_skew_case_conditions(fs.B1, fs.C1, tol, b_floor, c_floor);
    rec.conditions = sc;
    rec.rank = sc.rank_b;
    if (!sc.ok()) {
      out.trace.steps.push_back(rec);
      std::ostringstream os;
      const std::string id = sc.failed_condition();
      if (id == "lemT_a_kernel")
        os << "Ker C1^T differs from Ker B1 (rank B1 = " << sc.rank_b << ", rank C1 = " << sc.rank_c
           << ", kernel residual " << sc.kernel_residual << ")";
      else if (id == "lemT_a_rank")
        os << "rank C1 B1 = " << sc.rank_cb << " < " << sc.rank_b << " (sigma_r = " << sc.sigma_r << ")";
      else
        os << "C1 B1 is not symmetric positive semidefinite (lambda_min = " << sc.lambda_min << ", skew residual "
           << sc.skew_residual << ")";
      if (sc.singular_t) os << "; the constraint Q B1 = C1^T forces a singular storage matrix, so T would be singular";
      out.failure = make_failure(id, step, os.str(), sc.singular_t);
      return out;
    }
    const Eigen::Index l = fs.kernel, r = sc.rank_b, m2 = m - l;
    const Mat V2 = fs.V0.rightCols(m2);
    const Mat D22 = V2.transpose() * cur.D * V2;
    LtiSystem nxt;
    if (r == 0) {
      nxt = LtiSystem{cur.A, fs.B2, fs.C2, D22};
      frames.push_back(Frame{Mat::Identity(n, n), 0});
    } else {
      T0Factor t0 = build_t0(sc.B11, sc.C11, tol);
      rec.constraint_residual = t0.constraint_residual;
      rec.inverse_residual = t0.inverse_residual;
      const Eigen::Index n1 = n - r;
      const Mat Yinv = t0.Y.inverse();
      const Mat At = t0.T0 * cur.A * t0.T0inv;
      nxt.A = At.topLeftCorner(n1, n1);
      nxt.B.resize(n1, r + m2);
      nxt.B << At.topRightCorner(n1, r), t0.NB.transpose() * fs.B2;
      nxt.C.resize(r + m2, n1);
      nxt.C << -At.bottomLeftCorner(r, n1), fs.C2 * t0.NC;
      nxt.D.resize(r + m2, r + m2);
      nxt.D << -At.bottomRightCorner(r, r), -Yinv * sc.C11 * fs.B2, fs.C2 * sc.B11 * Yinv.transpose(), D22;
      frames.push_back(Frame{t0.T0, r});
    }
    out.trace.steps.push_back(rec);
    cur = std::move(nxt);
  }
  Mat T = Z;
  for (auto it = frames.rbegin(); it != frames.rend(); ++it) {
    T = blockdiag(T, Mat::Identity(it->r, it->r)) * it->T0;
  }
  out.T = T;
  return out;
}

RealizationResult realize_general(const LtiSystem& sys, const Tolerances& tol) {
  RealizationResult res;
  RecursionStorage rs = recursion_storage(sys, tol);
  res.trace = std::move(rs.trace);
  if (rs.failure) {
    res.failure = rs.failure;
    return res;
  }
  const Mat& T = *rs.T;
  const Eigen::Index m = sys.m();
  try {
    res.ph = assemble_ph_from_storage(sys, T, tol);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SingularT && e.code() != ErrorCode::CertificateRejected) throw;
    res.failure = make_failure("numerical", static_cast<int>(res.trace.steps.size()), e.what(),
                               e.code() == ErrorCode::SingularT);
    return res;
  }
  res.transform.T = T;
  res.transform.V = Mat::Identity(m, m);
  res.transform.cond_T = sys.n() ? cond2(T) : 1.0;
  const Mat Q = T.transpose() * T;
  res.lmi_lambda_max = lmi_lambda_max(sys, Q);
  res.lmi_scale = lmi_scale(sys, Q);
  res.global_lambda_min = -res.lmi_lambda_max;
  res.success = true;
  return res;
}

RealizationResult realize_skew_case(const LtiSystem& sys, const Tolerances& tol) {
  const Mat S = sys.D + sys.D.transpose();
  if (norm2(S) > tol.sym * std::max(1.0, norm2(sys.D)))
    throw Error(ErrorCode::InvalidInput, "realize_skew_case needs D = -D^T");
  return realize_general(sys, tol);
}

}  // namespace phr
