// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The phr authors.

#include "phr/phr.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "phr/analysis.hpp"
#include "phr/generators.hpp"
#include "phr/io.hpp"
#include "phr/system_model.hpp"
#include "phr/transform.hpp"

struct phr_system {
  phr::LtiSystem sys;
};

struct phr_report {
  phr::AnalysisReport rep;
};

struct phr_realization {
  phr::LtiSystem sys;
  phr::RealizationResult res;
};

namespace {

thread_local std::string g_last_error;

phr_status_t fail(phr_status_t s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

template <class F>
phr_status_t guarded(F&& f) {
  g_last_error.clear();
  try {
    return f();
  } catch (const phr::Error& e) {
    return fail(e.code() == phr::ErrorCode::InvalidInput ? PHR_INPUT_ERROR : PHR_NUMERICAL_ERROR, e.what());
  } catch (const std::bad_alloc&) {
    return fail(PHR_NUMERICAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return fail(PHR_NUMERICAL_ERROR, e.what());
  } catch (...) {
    return fail(PHR_NUMERICAL_ERROR, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

phr::Tolerances to_tol(const phr_options_t* opt) {
  phr::Tolerances t;
  if (!opt) return t;
  auto pick = [](double v, double def) {
    if (v == 0.0) return def;
    if (!(v > 0.0 && v < 1.0)) throw phr::Error(phr::ErrorCode::InvalidInput, "tolerances must lie in (0, 1)");
    return v;
  };
  t.rank = pick(opt->rank_tol, t.rank);
  t.psd = pick(opt->psd_tol, t.psd);
  t.axis = pick(opt->axis_tol, t.axis);
  return t;
}

phr::Mat from_row_major(const double* p, int rows, int cols) {
  phr::Mat M(rows, cols);
  if (rows * cols > 0 && !p) throw phr::Error(phr::ErrorCode::InvalidInput, "null matrix pointer");
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k) M(i, k) = p[static_cast<std::size_t>(i) * cols + k];
  return M;
}

#define PHR_REQUIRE(cond, msg) \
  if (!(cond)) return fail(PHR_INPUT_ERROR, msg)

}  // namespace

extern "C" {

const char* phr_version(void) { return "1.0.0"; }

const char* phr_last_error_message(void) { return g_last_error.c_str(); }

void phr_string_free(char* s) { std::free(s); }

void phr_options_default(phr_options_t* opt) {
  if (!opt) return;
  const phr::Tolerances t;
  opt->rank_tol = t.rank;
  opt->psd_tol = t.psd;
  opt->axis_tol = t.axis;
  opt->passive_only = 0;
}

phr_status_t phr_system_create(int n, int m, const double* A, const double* B, const double* C, const double* D,
                               phr_system_t** out) {
  PHR_REQUIRE(out, "null output handle");
  PHR_REQUIRE(n >= 0 && m >= 0, "negative dimension");
  return guarded([&] {
    phr::LtiSystem s{from_row_major(A, n, n), from_row_major(B, n, m), from_row_major(C, m, n),
                     from_row_major(D, m, m)};
    auto v = phr::validate_lti(s);
    if (!v.empty()) return fail(PHR_INPUT_ERROR, v.front());
    *out = new phr_system{std::move(s)};
    return PHR_OK;
  });
}

phr_status_t phr_system_load(const char* path, phr_system_t** out) {
  PHR_REQUIRE(path && out, "null argument");
  return guarded([&] {
    *out = new phr_system{phr::load_system(path)};
    return PHR_OK;
  });
}

phr_status_t phr_system_from_json(const char* text, phr_system_t** out) {
  PHR_REQUIRE(text && out, "null argument");
  return guarded([&] {
    *out = new phr_system{phr::parse_system_json(text)};
    return PHR_OK;
  });
}

phr_status_t phr_system_dims(const phr_system_t* sys, int* n, int* m) {
  PHR_REQUIRE(sys, "null system");
  if (n) *n = static_cast<int>(sys->sys.n());
  if (m) *m = static_cast<int>(sys->sys.m());
  return PHR_OK;
}

phr_status_t phr_system_to_json(const phr_system_t* sys, char** json) {
  PHR_REQUIRE(sys && json, "null argument");
  return guarded([&] {
    *json = dup_string(phr::system_to_json(sys->sys));
    return PHR_OK;
  });
}

void phr_system_free(phr_system_t* sys) { delete sys; }

phr_status_t phr_analyze(const phr_system_t* sys, const phr_options_t* opt, phr_report_t** out) {
  PHR_REQUIRE(sys && out, "null argument");
  return guarded([&] {
    phr::AnalysisOptions o;
    o.tol = to_tol(opt);
    o.passive_only = opt && opt->passive_only;
    *out = new phr_report{phr::analyze_system(sys->sys, o)};
    return PHR_OK;
  });
}

phr_status_t phr_report_verdicts(const phr_report_t* rep, int* stable, int* asymptotically_stable, int* passive,
                                 int* ph_realizable) {
  PHR_REQUIRE(rep, "null report");
  if (stable) *stable = rep->rep.stable;
  if (asymptotically_stable) *asymptotically_stable = rep->rep.asymptotically_stable;
  if (passive) *passive = rep->rep.passive;
  if (ph_realizable) *ph_realizable = rep->rep.ph_realizable;
  return PHR_OK;
}

phr_status_t phr_report_to_json(const phr_report_t* rep, int include_timing, char** json) {
  PHR_REQUIRE(rep && json, "null argument");
  return guarded([&] {
    *json = dup_string(phr::report_to_json(rep->rep, include_timing != 0));
    return PHR_OK;
  });
}

void phr_report_free(phr_report_t* rep) { delete rep; }

phr_status_t phr_realize(const phr_system_t* sys, const phr_options_t* opt, phr_realization_t** out) {
  PHR_REQUIRE(sys && out, "null argument");
  return guarded([&] {
    auto* r = new phr_realization{sys->sys, phr::realize_general(sys->sys, to_tol(opt))};
    *out = r;
    if (r->res.success) return PHR_OK;
    const auto& f = *r->res.failure;
    if (f.condition == "numerical") return fail(PHR_NUMERICAL_ERROR, f.detail);
    return fail(PHR_INFEASIBLE, f.condition + ": " + f.detail);
  });
}

int phr_realization_success(const phr_realization_t* r) { return r && r->res.success ? 1 : 0; }

phr_status_t phr_realization_matrix(const phr_realization_t* r, const char* name, double* buf, size_t cap,
                                    int* rows, int* cols) {
  PHR_REQUIRE(r && name, "null argument");
  PHR_REQUIRE(r->res.success, "realization failed; no matrices available");
  const std::string key(name);
  const auto& ph = r->res.ph;
  const phr::Mat* M = key == "T"   ? &r->res.transform.T
                      : key == "V" ? &r->res.transform.V
                      : key == "J" ? &ph.J
                      : key == "R" ? &ph.R
                      : key == "Q" ? &ph.Q
                      : key == "F" ? &ph.F
                      : key == "P" ? &ph.P
                      : key == "S" ? &ph.S
                      : key == "N" ? &ph.N
                                   : nullptr;
  PHR_REQUIRE(M, "unknown matrix name " + key);
  if (rows) *rows = static_cast<int>(M->rows());
  if (cols) *cols = static_cast<int>(M->cols());
  if (!buf) return PHR_OK;
  PHR_REQUIRE(cap >= static_cast<size_t>(M->size()), "buffer too small");
  for (Eigen::Index i = 0; i < M->rows(); ++i)
    for (Eigen::Index k = 0; k < M->cols(); ++k) buf[i * M->cols() + k] = (*M)(i, k);
  return PHR_OK;
}

phr_status_t phr_realization_to_json(const phr_realization_t* r, char** json) {
  PHR_REQUIRE(r && json, "null argument");
  return guarded([&] {
    *json = dup_string(phr::realization_to_json(r->sys, r->res));
    return PHR_OK;
  });
}

void phr_realization_free(phr_realization_t* r) { delete r; }

phr_status_t phr_spectrum_json(const phr_system_t* sys, const phr_options_t* opt, char** json) {
  PHR_REQUIRE(sys && json, "null argument");
  return guarded([&] {
    *json = dup_string(phr::spectrum_to_json(phr::spectrum_report(sys->sys, to_tol(opt))));
    return PHR_OK;
  });
}

phr_status_t phr_generate_brake(int n_q, double omega_ratio, int rank_n, uint64_t seed, double n_scale, int amplify,
                                char** json) {
  PHR_REQUIRE(json, "null argument");
  PHR_REQUIRE(n_q >= 1 && rank_n >= 0 && rank_n <= n_q, "brake generator needs n_q >= 1 and 0 <= rank_n <= n_q");
  PHR_REQUIRE(omega_ratio > 0.0 && n_scale > 0.0, "omega_ratio and n_scale must be positive");
  return guarded([&] {
    phr::BrakeInstance b = amplify ? phr::brake_amplified_unstable(n_q, omega_ratio, rank_n, seed)
                                   : phr::brake_squeal_instance(n_q, omega_ratio, rank_n, seed, n_scale);
    *json = dup_string(phr::brake_to_json(b));
    return PHR_OK;
  });
}

phr_status_t phr_generate_scrambled(uint64_t seed, int n, int m, int lossless, int s_rank, char** json) {
  PHR_REQUIRE(json, "null argument");
  PHR_REQUIRE(n >= 1 && m >= 1 && s_rank <= m, "scrambled generator needs n >= 1, m >= 1, s_rank <= m");
  return guarded([&] {
    phr::RandomPhOptions o;
    o.n = n;
    o.m = m;
    o.lossless = lossless != 0;
    o.s_rank = s_rank;
    *json = dup_string(phr::scrambled_to_json(phr::scrambled_ph(seed, o)));
    return PHR_OK;
  });
}

}  // extern "C"
