// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The phr authors.

#include "phr/generators.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "phr/linalg.hpp"
#include "phr/system_model.hpp"

namespace phr {

namespace {

Mat gauss(std::mt19937_64& g, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> d;
  Mat M(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i) M(i, j) = d(g);
  return M;
}

Mat orth(std::mt19937_64& g, Eigen::Index n) {
  if (n == 0) return Mat(0, 0);
  Eigen::HouseholderQR<Mat> qr(gauss(g, n, n));
  Mat Qm = qr.householderQ() * Mat::Identity(n, n);
  const Vec d = qr.matrixQR().diagonal();
  for (Eigen::Index i = 0; i < n; ++i)
    if (d(i) < 0) Qm.col(i) = -Qm.col(i);
  return Qm;
}

// singular values log-uniform in [1, cond]
Mat with_condition(std::mt19937_64& g, Eigen::Index n, double cond) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vec s(n);
  for (Eigen::Index i = 0; i < n; ++i) s(i) = std::pow(cond, u(g));
  if (n > 1) {
    s(0) = 1.0;
    s(n - 1) = cond;
  }
  return orth(g, n) * s.asDiagonal() * orth(g, n).transpose();
}

}  // namespace

PhRealization random_ph(std::mt19937_64& g, const RandomPhOptions& opt) {
  const Eigen::Index n = opt.n, m = opt.m;
  const Eigen::Index k = n + m;
  const Eigen::Index sr = opt.s_rank < 0 ? m : std::min(opt.s_rank, m);
  PhRealization ph;
  const Mat Jr = gauss(g, n, n);
  ph.J = Jr - Jr.transpose();
  const Mat G1 = opt.lossless ? Mat::Zero(n, k) : Mat(gauss(g, n, k) / std::sqrt(double(k)));
  const Mat G2 = sr > 0 ? Mat(gauss(g, m, sr) * gauss(g, sr, k) / std::sqrt(double(k))) : Mat::Zero(m, k);
  ph.R = sym(G1 * G1.transpose());
  if (!opt.lossless) ph.R += 0.05 * Mat::Identity(n, n);
  ph.P = G1 * G2.transpose();
  ph.S = sym(G2 * G2.transpose());
  if (sr == m && m > 0) ph.S += 0.1 * Mat::Identity(m, m);
  const Mat Nr = gauss(g, m, m);
  ph.N = opt.skew_feedthrough ? Mat(0.5 * (Nr - Nr.transpose())) : Mat::Zero(m, m);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vec e(n);
  for (Eigen::Index i = 0; i < n; ++i) e(i) = std::pow(opt.q_spread, u(g) - 0.5);
  const Mat W = orth(g, n);
  ph.Q = sym(W * e.asDiagonal() * W.transpose());
  ph.F = gauss(g, n, m);
  return ph;
}

ScrambledInstance scrambled_ph(std::uint64_t seed, const RandomPhOptions& opt) {
  std::mt19937_64 g(seed);
  ScrambledInstance s;
  s.original = random_ph(g, opt);
  s.plain = ph_to_lti(s.original);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double cond = std::pow(opt.t_cond, u(g));
  s.Ts = with_condition(g, opt.n, cond);
  s.Vs = orth(g, opt.m);
  s.scrambled = transform_system(s.plain, s.Ts, s.Vs);
  return s;
}

BrakeInstance brake_squeal_instance(Eigen::Index n_q, double omega_ratio, Eigen::Index rank_n, std::uint64_t seed,
                                    double n_scale) {
  if (n_q < 1 || rank_n < 0 || rank_n > n_q) throw Error(ErrorCode::InvalidInput, "brake: need 1 <= n_q, 0 <= rank_n <= n_q");
  std::mt19937_64 g(seed);
  const Eigen::Index nq = n_q, m = std::min<Eigen::Index>(2, nq);
  BrakeInstance b;
  const Mat Mr = gauss(g, nq, nq) / std::sqrt(double(nq));
  b.Mmass = sym(Mat::Identity(nq, nq) + 0.2 * Mr * Mr.transpose());
  Vec w(nq);
  for (Eigen::Index i = 0; i < nq; ++i)
    w(i) = nq == 1 ? 1.0 : std::pow(std::max(omega_ratio, 1.0), double(i) / double(nq - 1));
  const Mat Wk = orth(g, nq);
  b.Kstiff = sym(Wk * w.cwiseAbs2().asDiagonal() * Wk.transpose());
  const Mat Dr = gauss(g, nq, nq) / std::sqrt(double(nq));
  b.Ddamp = sym(0.01 * Dr * Dr.transpose() + 0.01 * Mat::Identity(nq, nq));
  const Mat Gr = gauss(g, nq, nq);
  b.Ggyro = 0.1 * (Gr - Gr.transpose());
  b.Ncirc = Mat::Zero(nq, nq);
  // a real skew matrix has even rank; pairs of dyads give rank 2 * ceil(rank_n / 2)
  const Eigen::Index pairs = (rank_n + 1) / 2;
  for (Eigen::Index p = 0; p < pairs && 2 * p + 1 < nq + 1; ++p) {
    const Vec a = gauss(g, nq, 1).col(0).normalized(), c = gauss(g, nq, 1).col(0).normalized();
    b.Ncirc += a * c.transpose() - c * a.transpose();
  }
  b.Ncirc *= n_scale;
  b.Fin = gauss(g, nq, m);

  const Mat I = Mat::Identity(nq, nq);
  const Mat Kinv = b.Kstiff.inverse();
  Mat X(2 * nq, 2 * nq);
  X << -b.Ggyro - b.Ddamp, -I - b.Ncirc * Kinv, I, Mat::Zero(nq, nq);
  b.J = skew(X);
  b.R = -sym(X);
  b.Q = blockdiag(b.Mmass.inverse(), b.Kstiff);
  b.sys.A = (b.J - b.R) * b.Q;
  b.sys.B = Mat::Zero(2 * nq, m);
  b.sys.B.topRows(nq) = b.Fin;
  b.sys.C = b.sys.B.transpose() * b.Q;
  b.sys.D = Mat::Zero(m, m);

  b.lambda_min_R = lambda_min_sym(b.R);
  b.max_real = eigenvalues(b.sys.A).real().maxCoeff();
  b.j_skew_residual = norm2(b.J + b.J.transpose());
  Eigen::ComplexEigenSolver<CMat> ces(b.J.cast<cplx>());
  const CMat Rc = b.R.cast<cplx>();
  for (Eigen::Index i = 0; i < ces.eigenvectors().cols(); ++i) {
    const CVec x = ces.eigenvectors().col(i);
    if ((x.adjoint() * Rc * x)(0, 0).real() < -1e-12 * norm2(b.R)) b.witness_unstable = true;
  }
  const Mat qd = gauss(g, nq, 1), q = gauss(g, nq, 1);
  Mat x(2 * nq, 1);
  x << b.Mmass * qd, q;
  const Mat lhs = (b.J - b.R) * b.Q * x;
  Mat rhs(2 * nq, 1);
  rhs << -(b.Ddamp + b.Ggyro) * qd - (b.Kstiff + b.Ncirc) * q, qd;
  b.substitution_residual = (lhs - rhs).norm() / std::max(1.0, rhs.norm());
  return b;
}

BrakeInstance brake_amplified_unstable(Eigen::Index n_q, double omega_ratio, Eigen::Index rank_n, std::uint64_t seed,
                                       double margin, int max_doublings) {
  double s = 1.0;
  BrakeInstance b = brake_squeal_instance(n_q, omega_ratio, rank_n, seed, s);
  for (int i = 0; i < max_doublings && !(b.max_real > margin); ++i) {
    s *= 2.0;
    b = brake_squeal_instance(n_q, omega_ratio, rank_n, seed, s);
  }
  return b;
}

}  // namespace phr
