// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The phr authors.

#include "phr/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "phr/linalg.hpp"
#include "phr/lyapunov.hpp"
#include "phr/riccati.hpp"
#include "phr/system_model.hpp"

namespace phr {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

FailureReason reason(std::string cond, std::string stage, int step, std::string detail) {
  FailureReason r;
  r.condition = std::move(cond);
  r.stage = std::move(stage);
  r.step = step;
  r.detail = std::move(detail);
  return r;
}

void append_decisions(AnalysisReport& rep, const std::vector<RankDecision>& ds, const std::string& phase) {
  for (RankDecision d : ds) {
    d.stage = phase + "." + d.stage;
    rep.rank_decisions.push_back(std::move(d));
  }
}

void check_stability(const LtiSystem& sys, AnalysisReport& rep) {
  const Tolerances& tol = rep.tol;
  if (sys.n() == 0) {
    rep.stable = rep.asymptotically_stable = true;
    return;
  }
  const CVec ev = eigenvalues(sys.A);
  Eigen::Index arg = 0;
  rep.spectral_abscissa = ev.real().maxCoeff(&arg);
  try {
    SpectralSplit sp = split_stable_imaginary(sys.A, tol.axis, tol.rank);
    if (!sp.semisimple_flag) {
      auto r = reason("not_semisimple", "stability", 0, "A has a defective eigenvalue on the imaginary axis");
      for (const auto& c : sp.clusters) {
        if (c.semisimple) continue;
        r.witnesses.push_back({"omega", c.omega});
        r.witnesses.push_back({"multiplicity", static_cast<double>(c.multiplicity)});
        r.witnesses.push_back({"geometric", static_cast<double>(c.geometric)});
      }
      rep.failure_reasons.push_back(std::move(r));
      return;
    }
    LyapunovSolution ls = solve_lyapunov_inequality(sys.A, tol);
    rep.stable = true;
    rep.asymptotically_stable = sp.n2() == 0;
    const double sc = std::max(norm2(sys.A) * norm2(ls.Q), 1e-300);
    rep.residuals.lyapunov = lambda_max_sym(sys.A.transpose() * ls.Q + ls.Q * sys.A) / sc;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UnstableMatrix && e.code() != ErrorCode::NotStable) throw;
    auto r = reason("not_stable", "stability", 0, e.what());
    r.witnesses.push_back({"re_lambda", ev(arg).real()});
    r.witnesses.push_back({"im_lambda", ev(arg).imag()});
    rep.failure_reasons.push_back(std::move(r));
  }
}

void add_realization_failure(const RealizationFailure& f, const RecursionTrace& trace, const std::string& stage,
                             AnalysisReport& rep) {
  auto r = reason(f.condition, stage, f.step, f.detail);
  r.witnesses.push_back({"singular_t", f.singular_t ? 1.0 : 0.0});
  for (const auto& s : trace.steps) {
    if (s.step != f.step || s.terminal != "") continue;
    const auto& c = s.conditions;
    r.witnesses.push_back({"rank_b", static_cast<double>(c.rank_b)});
    r.witnesses.push_back({"rank_c", static_cast<double>(c.rank_c)});
    r.witnesses.push_back({"rank_cb", static_cast<double>(c.rank_cb)});
    r.witnesses.push_back({"kernel_residual", c.kernel_residual});
    r.witnesses.push_back({"sigma_r", c.sigma_r});
    r.witnesses.push_back({"lambda_min", c.lambda_min});
    r.witnesses.push_back({"skew_residual", c.skew_residual});
  }
  rep.failure_reasons.push_back(std::move(r));
}

// Passivity certificate Q >= 0. A singular D + D^T goes through the recursion
// on the observable part, which only certifies realizable observable parts.
void check_passivity(const LtiSystem& sys, AnalysisReport& rep) {
  const Tolerances& tol = rep.tol;
  const Eigen::Index m = sys.m();
  const Mat S = sym(sys.D + sys.D.transpose());
  const double nS = norm2(S);
  const double smin = m ? lambda_min_sym(S) : 0.0;
  if (m && smin < -tol.psd * std::max(nS, 1e-300)) {
    auto r = reason("lemT_a_psd", "passivity", 0, "D + D^T is indefinite");
    r.witnesses.push_back({"lambda_min", smin});
    rep.failure_reasons.push_back(std::move(r));
    rep.passivity_route = "none";
    return;
  }
  const bool s_definite = m == 0 || smin > tol.rank * std::max(nS, 1.0);
  if (s_definite && m > 0) {
    rep.passivity_route = "lmi";
    StorageOutcome so = solve_lmi_storage(sys, StorageMode::semidefinite, tol);
    append_decisions(rep, so.decisions, "passivity");
    rep.n_observable = so.n_observable;
    if (!so.feasible) {
      rep.failure_reasons.push_back(reason(so.condition, "passivity", 0, so.detail));
      return;
    }
    rep.passive = true;
    rep.residuals.passive_lmi = so.cert.lmi_residual / so.cert.scale;
    rep.passivity_certificate = so.cert;
    return;
  }

  ObservabilityStaircase os = observability_staircase(sys.A, sys.C, tol.rank);
  append_decisions(rep, os.decisions, "passivity");
  rep.n_observable = os.n_o;
  const Eigen::Index n = sys.n(), no = os.n_o;
  if (no == 0) {
    rep.passivity_route = "zero_storage";
    rep.passive = true;
    rep.passivity_certificate = make_certificate(sys, Mat::Zero(n, n), StorageKind::positive_semidefinite);
    rep.residuals.passive_lmi = rep.passivity_certificate->lmi_residual / rep.passivity_certificate->scale;
    return;
  }
  rep.passivity_route = "recursion_observable";
  const Mat& W = os.W;
  LtiSystem red{(W.transpose() * sys.A * W).topLeftCorner(no, no), (W.transpose() * sys.B).topRows(no),
                (sys.C * W).leftCols(no), sys.D};
  RecursionStorage rs = recursion_storage(red, tol);
  if (rs.failure) {
    add_realization_failure(*rs.failure, rs.trace, "passivity", rep);
    return;
  }
  Mat Qb = Mat::Zero(n, n);
  Qb.topLeftCorner(no, no) = rs.T->transpose() * *rs.T;
  StorageCertificate cert = make_certificate(sys, W * Qb * W.transpose(),
                                             no == n ? StorageKind::positive_definite
                                                     : StorageKind::positive_semidefinite);
  rep.residuals.passive_lmi = cert.lmi_residual / cert.scale;
  if (cert.lmi_residual > tol.psd * cert.scale) {
    auto r = reason("numerical", "passivity", 0, "lifted storage matrix violates the passivity LMI");
    r.witnesses.push_back({"lmi_lambda_max", cert.lmi_residual});
    rep.failure_reasons.push_back(std::move(r));
    return;
  }
  rep.passive = true;
  rep.passivity_certificate = cert;
}

void check_realization(const LtiSystem& sys, AnalysisReport& rep) {
  rep.realization_attempted = true;
  RealizationResult res = realize_general(sys, rep.tol);
  rep.recursion = res.trace.steps;
  for (const auto& s : res.trace.steps)
    rep.residuals.constraint_residual = std::max(rep.residuals.constraint_residual, s.constraint_residual);
  append_decisions(rep, res.trace.terminal_storage.decisions, "realization");
  if (!res.success) {
    add_realization_failure(*res.failure, res.trace, "realization", rep);
    rep.realization = std::move(res);
    return;
  }
  rep.ph_realizable = true;
  const PhRealization& ph = res.ph;
  auto rel = [](const Mat& X, const Mat& Y) { return X.size() ? norm2(X) / std::max(1.0, norm2(Y)) : 0.0; };
  rep.residuals.lmi_lambda_max = res.lmi_lambda_max;
  rep.residuals.lmi_scale = res.lmi_scale;
  rep.residuals.j_skew = rel(ph.J + ph.J.transpose(), ph.J);
  rep.residuals.r_sym = rel(ph.R - ph.R.transpose(), ph.R);
  rep.residuals.s_sym = rel(ph.S - ph.S.transpose(), ph.S);
  rep.residuals.n_skew = rel(ph.N + ph.N.transpose(), ph.N);
  const Mat K = ph.K();
  rep.residuals.k_lambda_min = K.size() ? lambda_min_sym(K) : 0.0;
  const LtiSystem target = transform_system(sys, res.transform.T, res.transform.V);
  const LtiSystem back = ph_to_lti(ph);
  const double sc = std::max({1.0, norm2(target.A), norm2(target.B), norm2(target.C), norm2(target.D)});
  double rec = 0.0;
  for (auto [X, Y] : {std::pair{&back.A, &target.A}, {&back.B, &target.B}, {&back.C, &target.C},
                      {&back.D, &target.D}})
    if (X->size()) rec = std::max(rec, norm2(*X - *Y));
  rep.residuals.reconstruction = rec / sc;
  rep.cond_T = res.transform.cond_T;
  rep.realization = std::move(res);
}

}  // namespace

void enforce_monotonicity(AnalysisReport& r) {
  if (r.asymptotically_stable && !r.stable) {
    r.asymptotically_stable = false;
    r.adjustments.push_back("asymptotically_stable lowered: not stable");
  }
  if (r.passive && !r.stable) {
    r.passive = false;
    r.adjustments.push_back("passive lowered: not stable");
  }
  if (r.ph_realizable && !r.passive) {
    r.ph_realizable = false;
    r.adjustments.push_back("ph_realizable lowered: not passive");
  }
}

AnalysisReport analyze_system(const LtiSystem& sys, const AnalysisOptions& opt) {
  auto v = validate_lti(sys);
  if (!v.empty()) throw Error(ErrorCode::InvalidInput, v.front());
  AnalysisReport rep;
  rep.n = sys.n();
  rep.m = sys.m();
  rep.tol = opt.tol;

  auto t0 = Clock::now();
  check_stability(sys, rep);
  rep.timing.stability_ms = ms_since(t0);

  t0 = Clock::now();
  check_passivity(sys, rep);
  rep.timing.passivity_ms = ms_since(t0);

  if (!opt.passive_only) {
    t0 = Clock::now();
    check_realization(sys, rep);
    rep.timing.realization_ms = ms_since(t0);
  }
  enforce_monotonicity(rep);
  return rep;
}

SpectrumReport spectrum_report(const LtiSystem& sys, const Tolerances& tol) {
  auto v = validate_lti(sys);
  if (!v.empty()) throw Error(ErrorCode::InvalidInput, v.front());
  SpectrumReport out;
  out.eig_A = sys.n() ? eigenvalues(sys.A) : CVec();
  const Mat S = sym(sys.D + sys.D.transpose());
  const Eigen::Index m = sys.m();
  out.s_definite = m == 0 || lambda_min_sym(S) > tol.rank * std::max(norm2(S), 1.0);
  if (out.s_definite && sys.n() > 0) {
    HamiltonianMatrix h = build_hamiltonian(sys.A, sys.B, sys.C, S);
    out.eig_H = eigenvalues(h.H);
    out.hamiltonian_pairing = pm_pairing_residual(out.eig_H);
  }
  out.pencil = pencil_spectrum(build_even_pencil(sys));
  if (!out.pencil.index_one)
    out.warning = "D + D^T is singular: the even pencil has Jordan blocks of size larger than one at infinity";
  return out;
}

}  // namespace phr
