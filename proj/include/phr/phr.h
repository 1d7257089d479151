/* SPDX-License-Identifier: Apache-2.0 */
/* Copyright (c) 2026 The phr authors. */

#ifndef PHR_PHR_H
#define PHR_PHR_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(PHR_BUILDING_LIBRARY)
#define PHR_API __declspec(dllexport)
#else
#define PHR_API __declspec(dllimport)
#endif
#else
#define PHR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  PHR_OK = 0,
  PHR_INFEASIBLE = 1,
  PHR_INPUT_ERROR = 2,
  PHR_NUMERICAL_ERROR = 3
} phr_status_t;

typedef struct phr_system phr_system_t;
typedef struct phr_report phr_report_t;
typedef struct phr_realization phr_realization_t;

/* a zero tolerance selects the default */
typedef struct {
  double rank_tol;
  double psd_tol;
  double axis_tol;
  int passive_only;
} phr_options_t;

PHR_API const char* phr_version(void);
/* message of the last failed call on this thread, "" if none */
PHR_API const char* phr_last_error_message(void);
PHR_API void phr_string_free(char* s);
PHR_API void phr_options_default(phr_options_t* opt);

/* matrices are row-major; B is n x m, C is m x n, D is m x m */
PHR_API phr_status_t phr_system_create(int n, int m, const double* A, const double* B, const double* C,
                                       const double* D, phr_system_t** out);
PHR_API phr_status_t phr_system_load(const char* path, phr_system_t** out);
PHR_API phr_status_t phr_system_from_json(const char* text, phr_system_t** out);
PHR_API phr_status_t phr_system_dims(const phr_system_t* sys, int* n, int* m);
PHR_API phr_status_t phr_system_to_json(const phr_system_t* sys, char** json);
PHR_API void phr_system_free(phr_system_t* sys);

PHR_API phr_status_t phr_analyze(const phr_system_t* sys, const phr_options_t* opt, phr_report_t** out);
PHR_API phr_status_t phr_report_verdicts(const phr_report_t* rep, int* stable, int* asymptotically_stable,
                                         int* passive, int* ph_realizable);
PHR_API phr_status_t phr_report_to_json(const phr_report_t* rep, int include_timing, char** json);
PHR_API void phr_report_free(phr_report_t* rep);

/* on PHR_INFEASIBLE and numerical failures *out still carries the failure */
PHR_API phr_status_t phr_realize(const phr_system_t* sys, const phr_options_t* opt, phr_realization_t** out);
PHR_API int phr_realization_success(const phr_realization_t* r);
/* name is one of T V J R Q F P S N; copies row-major into buf of capacity cap */
PHR_API phr_status_t phr_realization_matrix(const phr_realization_t* r, const char* name, double* buf, size_t cap,
                                            int* rows, int* cols);
PHR_API phr_status_t phr_realization_to_json(const phr_realization_t* r, char** json);
PHR_API void phr_realization_free(phr_realization_t* r);

PHR_API phr_status_t phr_spectrum_json(const phr_system_t* sys, const phr_options_t* opt, char** json);

/* amplify != 0 doubles the circulatory scale until (J - R) Q is unstable */
PHR_API phr_status_t phr_generate_brake(int n_q, double omega_ratio, int rank_n, uint64_t seed, double n_scale,
                                        int amplify, char** json);
/* s_rank < 0 means full rank */
PHR_API phr_status_t phr_generate_scrambled(uint64_t seed, int n, int m, int lossless, int s_rank, char** json);

#ifdef __cplusplus
}
#endif

#endif
