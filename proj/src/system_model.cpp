// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The phr authors.

#include "phr/system_model.hpp"

#include <algorithm>

#include <cmath>
#include <sstream>

#include "phr/linalg.hpp"

namespace phr {

Mat PhRealization::K() const {
  const Eigen::Index n = R.rows(), m = S.rows();
  Mat K(n + m, n + m);
  K << R, P, P.transpose(), S;
  return K;
}

std::vector<std::string> validate_lti(const LtiSystem& sys) {
  std::vector<std::string> v;
  const Eigen::Index n = sys.A.rows(), m = sys.B.cols();
  auto dim = [&](const char* name, const Mat& M, Eigen::Index r, Eigen::Index c) {
    if (M.rows() != r || M.cols() != c) {
      std::ostringstream os;
      os << "dimension mismatch: " << name << " is " << M.rows() << "x" << M.cols() << ", expected " << r
         << "x" << c;
      v.push_back(os.str());
    }
  };
  dim("A", sys.A, n, n);
  dim("B", sys.B, n, m);
  dim("C", sys.C, m, n);
  dim("D", sys.D, m, m);
  auto fin = [&](const char* name, const Mat& M) {
    if (!M.allFinite()) v.push_back(std::string("non-finite entry in ") + name);
  };
  fin("A", sys.A);
  fin("B", sys.B);
  fin("C", sys.C);
  fin("D", sys.D);
  return v;
}

std::vector<std::string> check_ph_invariants(const PhRealization& ph, const Tolerances& tol) {
  std::vector<std::string> v;
  auto rel = [](const Mat& M) { return std::max(1.0, norm2(M)); };
  if (norm2(ph.J + ph.J.transpose()) > tol.sym * rel(ph.J)) v.push_back("J is not skew-symmetric");
  if (norm2(ph.R - ph.R.transpose()) > tol.sym * rel(ph.R)) v.push_back("R is not symmetric");
  if (norm2(ph.S - ph.S.transpose()) > tol.sym * rel(ph.S)) v.push_back("S is not symmetric");
  if (norm2(ph.N + ph.N.transpose()) > tol.sym * rel(ph.N)) v.push_back("N is not skew-symmetric");
  if (ph.Q.size() && lambda_min_sym(ph.Q) <= 0.0) v.push_back("Q is not positive definite");
  const Mat K = ph.K();
  if (K.size() && lambda_min_sym(K) < -tol.psd * std::max({1.0, norm2(K), norm2(ph.J)}))
    v.push_back("K is not positive semidefinite");
  return v;
}

Mat lmi_matrix(const LtiSystem& sys, const Mat& Q) {
  const Eigen::Index n = sys.n(), m = sys.m();
  Mat L(n + m, n + m);
  const Mat QB = Q * sys.B;
  L.topLeftCorner(n, n) = sys.A.transpose() * Q + Q * sys.A;
  L.topRightCorner(n, m) = QB - sys.C.transpose();
  L.bottomLeftCorner(m, n) = QB.transpose() - sys.C;
  L.bottomRightCorner(m, m) = -(sys.D + sys.D.transpose());
  return sym(L);
}

double lmi_scale(const LtiSystem& sys, const Mat& Q) {
  const double nQ = norm2(Q);
  return std::max(1e-300, 2.0 * norm2(sys.A) * nQ + norm2(sys.B) * nQ + norm2(sys.C) + 2.0 * norm2(sys.D));
}

double lmi_lambda_max(const LtiSystem& sys, const Mat& Q) { return lambda_max_sym(lmi_matrix(sys, Q)); }

StorageCertificate make_certificate(const LtiSystem& sys, const Mat& Q, StorageKind kind) {
  StorageCertificate c;
  c.Q = sym(Q);
  c.kind = kind;
  c.lmi_residual = lmi_lambda_max(sys, c.Q);
  c.scale = lmi_scale(sys, c.Q);
  return c;
}

LtiSystem transform_system(const LtiSystem& sys, const Mat& T, const Mat& V) {
  const Mat Tinv = T.size() ? Mat(Eigen::PartialPivLU<Mat>(T).inverse()) : Mat(0, 0);
  LtiSystem out;
  out.A = T * sys.A * Tinv;
  out.B = T * sys.B * V;
  out.C = V.transpose() * sys.C * Tinv;
  out.D = V.transpose() * sys.D * V;
  return out;
}

LtiSystem ph_to_lti(const PhRealization& ph) {
  LtiSystem s;
  s.A = (ph.J - ph.R) * ph.Q;
  s.B = ph.F - ph.P;
  s.C = (ph.F + ph.P).transpose() * ph.Q;
  s.D = ph.S + ph.N;
  return s;
}

CMat transfer_function(const LtiSystem& sys, cplx s) {
  const Eigen::Index n = sys.n();
  CMat M = s * CMat::Identity(n, n) - sys.A.cast<cplx>();
  CMat X = M.partialPivLu().solve(sys.B.cast<cplx>());
  return sys.C.cast<cplx>() * X + sys.D.cast<cplx>();
}

PhRealization assemble_ph_from_storage(const LtiSystem& sys, const Mat& T, const Tolerances& tol) {
  const Eigen::Index n = sys.n();
  if (T.rows() != n || T.cols() != n) throw Error(ErrorCode::InvalidInput, "T has wrong dimensions");
  if (n > 0 && cond2(T) > 1.0 / (64.0 * std::numeric_limits<double>::epsilon()))
    throw Error(ErrorCode::SingularT, "T is singular to working precision");
  const Mat Q = T.transpose() * T;
  StorageCertificate cert = make_certificate(sys, Q, StorageKind::positive_definite);
  if (cert.lmi_residual > tol.psd * cert.scale)
    throw Error(ErrorCode::CertificateRejected, "storage matrix violates the passivity LMI");

  Eigen::PartialPivLU<Mat> lu(T);
  const Mat Tinv = n ? lu.inverse() : Mat(0, 0);
  const Mat Ah = T * sys.A * Tinv;
  const Mat Bh = T * sys.B;
  const Mat Ch = sys.C * Tinv;
  PhRealization ph;
  ph.J = skew(Ah);
  ph.R = -sym(Ah);
  ph.F = 0.5 * (Bh + Ch.transpose());
  ph.P = -0.5 * (Bh - Ch.transpose());
  ph.S = sym(sys.D);
  ph.N = skew(sys.D);
  ph.Q = Mat::Identity(n, n);

  // round-off can leave K slightly indefinite when it is (nearly) zero;
  // eigenvalues within tol.sym of the realization scale are clipped
  const Mat K = ph.K();
  if (K.size()) {
    Eigen::SelfAdjointEigenSolver<Mat> es(K);
    const double lmin = es.eigenvalues().minCoeff();
    const double sc = std::max({1.0, norm2(Ah), norm2(Bh), norm2(Ch), norm2(sys.D)});
    if (lmin < 0.0 && -lmin <= tol.psd * sc) {
      const Mat Kc = sym(es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).asDiagonal() *
                         es.eigenvectors().transpose());
      const Eigen::Index m = sys.m();
      ph.R = Kc.topLeftCorner(n, n);
      ph.P = Kc.topRightCorner(n, m);
      ph.S = Kc.bottomRightCorner(m, m);
    }
  }
  return ph;
}

namespace {

struct PhRhs {
  Mat AQ, G;  // x' = AQ x + G u
  Vec operator()(const Vec& x, const Vec& u) const { return AQ * x + G * u; }
};

}  // namespace

DissipationResult dissipation_check(const PhRealization& ph, const InputSignal& u, const Vec& x0,
                                    double horizon, int steps) {
  if (steps < 2) throw Error(ErrorCode::InvalidInput, "dissipation_check: steps must be >= 2");
  const double h = horizon / steps;
  if (!(h > 0.0) || h < 1e3 * std::numeric_limits<double>::min())
    throw Error(ErrorCode::IntegrationFailure, "dissipation_check: step size underflow");
  PhRhs f{(ph.J - ph.R) * ph.Q, ph.F - ph.P};
  const Mat Cy = (ph.F + ph.P).transpose() * ph.Q;
  const Mat Dy = ph.S + ph.N;
  auto supply = [&](const Vec& x, const Vec& uu) { return (Cy * x + Dy * uu).dot(uu); };

  // the supply integral rides along as an extra RK4 state
  Vec x = x0;
  double integral = 0.0;
  for (int k = 0; k < steps; ++k) {
    const double t = k * h;
    const Vec ua = u(t), ub = u(t + 0.5 * h), uc = u(t + h);
    const Vec k1 = f(x, ua);
    const Vec x2 = x + 0.5 * h * k1;
    const Vec k2 = f(x2, ub);
    const Vec x3 = x + 0.5 * h * k2;
    const Vec k3 = f(x3, ub);
    const Vec x4 = x + h * k3;
    const Vec k4 = f(x4, uc);
    integral += (h / 6.0) * (supply(x, ua) + 2.0 * supply(x2, ub) + 2.0 * supply(x3, ub) + supply(x4, uc));
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!x.allFinite()) throw Error(ErrorCode::IntegrationFailure, "dissipation_check: trajectory diverged");
  }
  DissipationResult r;
  r.lhs = 0.5 * x.dot(ph.Q * x) - 0.5 * x0.dot(ph.Q * x0);
  r.rhs = integral;
  return r;
}

}  // namespace phr
