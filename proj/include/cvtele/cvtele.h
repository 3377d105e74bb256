/*
 * cvtele: continuous-variable teleportation of Gaussian states.
 *
 * C interface to the simulation library. Objects are opaque handles created
 * by cvt_*_create / factory functions and released with the matching
 * cvt_*_free function. Every fallible call returns a cvt_status; on failure
 * the calling thread's last error message (and, where meaningful, a numeric
 * diagnostic such as a minimum eigenvalue or achieved truncation deficit) is
 * available through cvt_last_error_message / cvt_last_error_value.
 *
 * Conventions: q = (a + a†)/√2, p = (a − a†)/(i√2), vacuum variance 1/2.
 * Phase-space vectors are interleaved (q1, p1, q2, p2, ...). Matrices are
 * passed row-major. Strings returned through char** must be released with
 * cvt_string_free.
 */
#ifndef CVTELE_CVTELE_H
#define CVTELE_CVTELE_H

#include <stddef.h>
#include <stdint.h>

#if defined(CVTELE_BUILDING_LIBRARY)
#define CVTELE_API __attribute__((visibility("default")))
#else
#define CVTELE_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cvt_status {
  CVT_OK = 0,
  CVT_ERR_INVALID_ARGUMENT = 1,
  CVT_ERR_DIMENSION = 2,
  CVT_ERR_UNPHYSICAL = 3,
  CVT_ERR_NOT_SYMPLECTIC = 4,
  CVT_ERR_PARSE = 5,
  CVT_ERR_TRUNCATION = 6,
  CVT_ERR_DEGENERATE = 7,
  CVT_ERR_NUMERICAL = 8,
  CVT_ERR_NULL_POINTER = 9,
  CVT_ERR_IO = 10,
  CVT_ERR_INTERNAL = 11
} cvt_status;

typedef struct cvt_complex {
  double re;
  double im;
} cvt_complex;

typedef struct cvt_state cvt_state;
typedef struct cvt_symplectic cvt_symplectic;
typedef struct cvt_field cvt_field;
typedef struct cvt_fock cvt_fock;
typedef struct cvt_ensemble cvt_ensemble;

/* ---- errors and utilities ------------------------------------------------ */

CVTELE_API const char* cvt_version(void);
CVTELE_API const char* cvt_status_string(cvt_status status);
CVTELE_API const char* cvt_last_error_message(void);
CVTELE_API double cvt_last_error_value(void);
CVTELE_API void cvt_string_free(char* s);

/* ---- Gaussian states ----------------------------------------------------- */

CVTELE_API cvt_status cvt_state_vacuum(int n_modes, cvt_state** out);
CVTELE_API cvt_status cvt_state_coherent(cvt_complex alpha, cvt_state** out);
CVTELE_API cvt_status cvt_state_two_mode_squeezed_vacuum(double r, cvt_state** out);
CVTELE_API cvt_status cvt_state_thermal(double nbar, cvt_state** out);
/* Validates symmetry and cov + (i/2)J >= 0. */
CVTELE_API cvt_status cvt_state_from_moments(int n_modes, const double* mean,
                                             const double* cov, cvt_state** out);
/* {"n_modes": int, "mean": [...], "cov": [[...]]} */
CVTELE_API cvt_status cvt_state_from_json(const char* text, cvt_state** out);
CVTELE_API cvt_status cvt_state_to_json(const cvt_state* state, char** out_json);
CVTELE_API cvt_status cvt_state_clone(const cvt_state* state, cvt_state** out);
CVTELE_API void cvt_state_free(cvt_state* state);

CVTELE_API int cvt_state_n_modes(const cvt_state* state);
/* len must be 2*n_modes (mean) or (2*n_modes)^2 (cov). */
CVTELE_API cvt_status cvt_state_mean(const cvt_state* state, double* out, size_t len);
CVTELE_API cvt_status cvt_state_cov(const cvt_state* state, double* out, size_t len);

/* dim x dim row-major covariance; *physical is 1 iff min eig >= -max(1e-10, 1e-14 * max abs entry). */
CVTELE_API cvt_status cvt_check_physical(int dim, const double* cov, int* physical,
                                         double* min_eigenvalue);

CVTELE_API cvt_status cvt_characteristic_function(const cvt_state* state,
                                                  const cvt_complex* lambdas, size_t n,
                                                  cvt_complex* out);
CVTELE_API cvt_status cvt_state_displace(const cvt_state* state, const cvt_complex* alphas,
                                         size_t n, cvt_state** out);
CVTELE_API cvt_status cvt_state_tensor(const cvt_state* a, const cvt_state* b, cvt_state** out);
CVTELE_API cvt_status cvt_state_apply_symplectic(const cvt_state* state,
                                                 const cvt_symplectic* s, cvt_state** out);

CVTELE_API cvt_status cvt_symplectic_from_matrix(int n_modes, const double* matrix,
                                                 cvt_symplectic** out);
CVTELE_API cvt_status cvt_symplectic_beamsplitter(int mode_i, int mode_j, int n_modes,
                                                  cvt_symplectic** out);
CVTELE_API cvt_status cvt_symplectic_matrix(const cvt_symplectic* s, double* out, size_t len);
CVTELE_API void cvt_symplectic_free(cvt_symplectic* s);

/* ---- EPR statistics of two-mode resources -------------------------------- */

typedef struct cvt_epr_moments {
  double mean_Q;
  double mean_P;
  double var_QQ; /* raw second moments */
  double var_PP;
  double cov_QP;
  double delta_mean;
} cvt_epr_moments;

CVTELE_API cvt_status cvt_epr_moments_of(const cvt_state* resource, cvt_epr_moments* out);
CVTELE_API cvt_status cvt_epr_uncertainty(const cvt_state* resource, double* delta_mean,
                                          int* inseparable);
CVTELE_API cvt_status cvt_exp_neg_delta(const cvt_state* resource, double* out);

/* ---- distorting field ---------------------------------------------------- */

CVTELE_API cvt_status cvt_field_create(const cvt_state* resource, cvt_field** out);
CVTELE_API void cvt_field_free(cvt_field* field);
CVTELE_API cvt_status cvt_field_state(const cvt_field* field, cvt_state** out);
CVTELE_API cvt_status cvt_field_source_epr(const cvt_field* field, cvt_epr_moments* out);
CVTELE_API cvt_status cvt_field_classicality_margin(const cvt_field* field, double* out);
CVTELE_API cvt_status cvt_field_normally_ordered_cf(const cvt_field* field, cvt_complex lambda,
                                                    cvt_complex* out);
CVTELE_API cvt_status cvt_field_p_function(const cvt_field* field, cvt_complex alpha,
                                           double* out);
CVTELE_API cvt_status cvt_field_q_function(const cvt_field* field, cvt_complex beta,
                                           double* out);
CVTELE_API cvt_status cvt_field_r_function(const cvt_field* field, cvt_complex beta_conj,
                                           cvt_complex beta_prime, cvt_complex* out);
CVTELE_API cvt_status cvt_field_generating_function(const cvt_field* field, double s,
                                                    double* out);
CVTELE_API cvt_status cvt_field_correlation(const cvt_field* field, int l, int m,
                                            cvt_complex* out);
/* max_deficit <= 0 disables the bound. */
CVTELE_API cvt_status cvt_field_fock_matrix(const cvt_field* field, int cutoff,
                                            double max_deficit, cvt_fock** out);
/* len must be cutoff + 1. */
CVTELE_API cvt_status cvt_field_photon_distribution(const cvt_field* field, int cutoff,
                                                    double max_deficit, double* out,
                                                    size_t len);

CVTELE_API void cvt_fock_free(cvt_fock* fock);
CVTELE_API int cvt_fock_cutoff(const cvt_fock* fock);
CVTELE_API double cvt_fock_deficit(const cvt_fock* fock);
CVTELE_API cvt_status cvt_fock_entry(const cvt_fock* fock, int l, int m, cvt_complex* out);
/* {"cutoff": int, "re": [[...]], "im": [[...]], "deficit": float} */
CVTELE_API cvt_status cvt_fock_to_json(const cvt_fock* fock, char** out_json);

/* ---- teleportation channel ----------------------------------------------- */

CVTELE_API cvt_status cvt_teleport(const cvt_state* input, const cvt_state* resource,
                                   cvt_state** out);
CVTELE_API cvt_status cvt_channel_displacement_average(const cvt_state* input,
                                                       const cvt_state* resource,
                                                       int n_quadrature_nodes,
                                                       cvt_state** out);
CVTELE_API cvt_status cvt_added_noise(const cvt_state* resource, double* out);
CVTELE_API cvt_status cvt_fidelity_coherent(const cvt_state* resource, double* out);
CVTELE_API cvt_status cvt_state_overlap(const cvt_state* a, const cvt_state* b, double* out);
/* {"output": state, "added_noise", "fidelity_coherent", "inseparable"} */
CVTELE_API cvt_status cvt_channel_report_json(const cvt_state* input, const cvt_state* resource,
                                              char** out_json);

/* ---- Monte Carlo protocol ------------------------------------------------ */

typedef struct cvt_protocol_config {
  int64_t n_samples;
  uint64_t seed;
  int record_outcomes;
  int threads; /* 0 = hardware concurrency; results are independent of it */
} cvt_protocol_config;

typedef struct cvt_comparison {
  double z_mean[2];
  double z_cov[4];
  double max_abs_z;
  double threshold;
  int pass;
} cvt_comparison;

CVTELE_API cvt_status cvt_outcome_distribution(const cvt_state* input, const cvt_state* resource,
                                               double mean[2], double cov[4]);
CVTELE_API cvt_status cvt_conditional_b_state(const cvt_state* input, const cvt_state* resource,
                                              double q, double p, cvt_state** out);
CVTELE_API cvt_status cvt_run_protocol(const cvt_state* input, const cvt_state* resource,
                                       const cvt_protocol_config* config, cvt_ensemble** out);
CVTELE_API void cvt_ensemble_free(cvt_ensemble* ensemble);
CVTELE_API cvt_status cvt_ensemble_moments(const cvt_ensemble* ensemble, double mean[2],
                                           double cov[4], double mean_se[2], double cov_se[4]);
CVTELE_API cvt_status cvt_ensemble_to_json(const cvt_ensemble* ensemble, char** out_json);
/* "sample,q,p" CSV of recorded outcomes. */
CVTELE_API cvt_status cvt_ensemble_outcomes_csv(const cvt_ensemble* ensemble, char** out_csv);
CVTELE_API cvt_status cvt_ensemble_write_outcomes_csv(const cvt_ensemble* ensemble,
                                                      const char* path);
CVTELE_API cvt_status cvt_compare_to_analytic(const cvt_ensemble* ensemble,
                                              const cvt_state* analytic, double threshold,
                                              cvt_comparison* out);

#ifdef __cplusplus
}
#endif

#endif /* CVTELE_CVTELE_H */
