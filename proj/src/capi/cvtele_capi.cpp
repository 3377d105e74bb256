#include "cvtele/cvtele.h"

#include "core/channel.hpp"
#include "core/distorting_field.hpp"
#include "core/epr.hpp"
#include "core/error.hpp"
#include "core/gaussian_state.hpp"
#include "core/serialization.hpp"
#include "core/simulator.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>
#include <vector>

struct cvt_state {
  cvtele::GaussianState value;
};
struct cvt_symplectic {
  cvtele::SymplecticMatrix value;
};
struct cvt_field {
  cvtele::DistortingFieldState value;
};
struct cvt_fock {
  cvtele::FockMatrix value;
};
struct cvt_ensemble {
  cvtele::EnsembleEstimate value;
};

namespace {

thread_local std::string g_last_error;
thread_local double g_last_value = 0.0;

cvt_status to_status(cvtele::ErrorCode code) {
  using cvtele::ErrorCode;
  switch (code) {
    case ErrorCode::invalid_argument: return CVT_ERR_INVALID_ARGUMENT;
    case ErrorCode::dimension_mismatch: return CVT_ERR_DIMENSION;
    case ErrorCode::unphysical: return CVT_ERR_UNPHYSICAL;
    case ErrorCode::not_symplectic: return CVT_ERR_NOT_SYMPLECTIC;
    case ErrorCode::parse_error: return CVT_ERR_PARSE;
    case ErrorCode::truncation: return CVT_ERR_TRUNCATION;
    case ErrorCode::degenerate_distribution: return CVT_ERR_DEGENERATE;
    case ErrorCode::numerical: return CVT_ERR_NUMERICAL;
  }
  return CVT_ERR_INTERNAL;
}

cvt_status fail(cvt_status status, std::string message, double value = 0.0) {
  g_last_error = std::move(message);
  g_last_value = value;
  return status;
}

template <typename F>
cvt_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    g_last_value = 0.0;
    return CVT_OK;
  } catch (const cvtele::Error& e) {
    return fail(to_status(e.code()), e.what(), e.value());
  } catch (const std::bad_alloc&) {
    return fail(CVT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CVT_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(CVT_ERR_INTERNAL, "unknown error");
  }
}

#define CVT_REQUIRE(ptr)                                                     \
  do {                                                                       \
    if ((ptr) == nullptr) return fail(CVT_ERR_NULL_POINTER, #ptr " is null"); \
  } while (0)

cvtele::Complex to_cpp(cvt_complex z) { return {z.re, z.im}; }
cvt_complex to_c(cvtele::Complex z) { return {z.real(), z.imag()}; }

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::vector<cvtele::Complex> to_cpp(const cvt_complex* values, size_t n) {
  std::vector<cvtele::Complex> out(n);
  for (size_t i = 0; i < n; ++i) out[i] = to_cpp(values[i]);
  return out;
}

cvt_epr_moments to_c(const cvtele::EprMoments& e) {
  return {e.mean_Q, e.mean_P, e.var_QQ, e.var_PP, e.cov_QP, e.delta_mean};
}

void copy_matrix(const Eigen::MatrixXd& m, double* out, size_t len) {
  if (len != static_cast<size_t>(m.size())) {
    throw cvtele::Error(cvtele::ErrorCode::dimension_mismatch,
                        "output buffer has length " + std::to_string(len) + ", need " +
                            std::to_string(m.size()));
  }
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out[r * m.cols() + c] = m(r, c);
}

void copy2(const Eigen::Matrix2d& m, double out[4]) {
  out[0] = m(0, 0);
  out[1] = m(0, 1);
  out[2] = m(1, 0);
  out[3] = m(1, 1);
}

cvt_state* wrap(cvtele::GaussianState s) { return new cvt_state{std::move(s)}; }

}  // namespace

extern "C" {

const char* cvt_version(void) { return "0.1.0"; }

const char* cvt_status_string(cvt_status status) {
  switch (status) {
    case CVT_OK: return "ok";
    case CVT_ERR_INVALID_ARGUMENT: return "invalid argument";
    case CVT_ERR_DIMENSION: return "dimension mismatch";
    case CVT_ERR_UNPHYSICAL: return "unphysical state";
    case CVT_ERR_NOT_SYMPLECTIC: return "matrix is not symplectic";
    case CVT_ERR_PARSE: return "parse error";
    case CVT_ERR_TRUNCATION: return "Fock truncation bound exceeded";
    case CVT_ERR_DEGENERATE: return "degenerate distribution";
    case CVT_ERR_NUMERICAL: return "numerical failure";
    case CVT_ERR_NULL_POINTER: return "null pointer";
    case CVT_ERR_IO: return "I/O error";
    case CVT_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* cvt_last_error_message(void) { return g_last_error.c_str(); }
double cvt_last_error_value(void) { return g_last_value; }
void cvt_string_free(char* s) { std::free(s); }

// ---- states -----------------------------------------------------------------

cvt_status cvt_state_vacuum(int n_modes, cvt_state** out) {
  CVT_REQUIRE(out);
  return guarded([&] { *out = wrap(cvtele::vacuum(n_modes)); });
}

cvt_status cvt_state_coherent(cvt_complex alpha, cvt_state** out) {
  CVT_REQUIRE(out);
  return guarded([&] { *out = wrap(cvtele::coherent(to_cpp(alpha))); });
}

cvt_status cvt_state_two_mode_squeezed_vacuum(double r, cvt_state** out) {
  CVT_REQUIRE(out);
  return guarded([&] { *out = wrap(cvtele::two_mode_squeezed_vacuum(r)); });
}

cvt_status cvt_state_thermal(double nbar, cvt_state** out) {
  CVT_REQUIRE(out);
  return guarded([&] { *out = wrap(cvtele::thermal(nbar)); });
}

cvt_status cvt_state_from_moments(int n_modes, const double* mean, const double* cov,
                                  cvt_state** out) {
  CVT_REQUIRE(mean);
  CVT_REQUIRE(cov);
  CVT_REQUIRE(out);
  if (n_modes < 1) return fail(CVT_ERR_INVALID_ARGUMENT, "n_modes must be >= 1");
  return guarded([&] {
    const int dim = 2 * n_modes;
    cvtele::Vector m = Eigen::Map<const cvtele::Vector>(mean, dim);
    cvtele::Matrix c =
        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
            cov, dim, dim);
    *out = wrap(cvtele::GaussianState::from_moments(std::move(m), std::move(c)));
  });
}

cvt_status cvt_state_from_json(const char* text, cvt_state** out) {
  CVT_REQUIRE(text);
  CVT_REQUIRE(out);
  return guarded([&] { *out = wrap(cvtele::state_from_json_text(text)); });
}

cvt_status cvt_state_to_json(const cvt_state* state, char** out_json) {
  CVT_REQUIRE(state);
  CVT_REQUIRE(out_json);
  return guarded([&] { *out_json = dup_string(cvtele::to_json(state->value).dump()); });
}

cvt_status cvt_state_clone(const cvt_state* state, cvt_state** out) {
  CVT_REQUIRE(state);
  CVT_REQUIRE(out);
  return guarded([&] { *out = new cvt_state{state->value}; });
}

void cvt_state_free(cvt_state* state) { delete state; }

int cvt_state_n_modes(const cvt_state* state) { return state ? state->value.n_modes() : 0; }

cvt_status cvt_state_mean(const cvt_state* state, double* out, size_t len) {
  CVT_REQUIRE(state);
  CVT_REQUIRE(out);
  return guarded([&] { copy_matrix(state->value.mean(), out, len); });
}

cvt_status cvt_state_cov(const cvt_state* state, double* out, size_t len) {
  CVT_REQUIRE(state);
  CVT_REQUIRE(out);
  return guarded([&] { copy_matrix(state->value.cov(), out, len); });
}

cvt_status cvt_check_physical(int dim, const double* cov, int* physical, double* min_eigenvalue) {
  CVT_REQUIRE(cov);
  CVT_REQUIRE(physical);
  if (dim < 1) return fail(CVT_ERR_DIMENSION, "dim must be >= 1");
  return guarded([&] {
    cvtele::Matrix c =
        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
            cov, dim, dim);
    const cvtele::PhysicalityCheck check = cvtele::check_physical(c);
    *physical = check.physical ? 1 : 0;
    if (min_eigenvalue) *min_eigenvalue = check.min_eigenvalue;
  });
}

cvt_status cvt_characteristic_function(const cvt_state* state, const cvt_complex* lambdas,
                                       size_t n, cvt_complex* out) {
  CVT_REQUIRE(state);
  CVT_REQUIRE(lambdas);
  CVT_REQUIRE(out);
  return guarded([&] {
    const auto l = to_cpp(lambdas, n);
    *out = to_c(cvtele::characteristic_function(state->value, l));
  });
}

cvt_status cvt_state_displace(const cvt_state* state, const cvt_complex* alphas, size_t n,
                              cvt_state** out) {
  CVT_REQUIRE(state);
  CVT_REQUIRE(alphas);
  CVT_REQUIRE(out);
  return guarded([&] {
    const auto a = to_cpp(alphas, n);
    *out = wrap(cvtele::displace(state->value, a));
  });
}

cvt_status cvt_state_tensor(const cvt_state* a, const cvt_state* b, cvt_state** out) {
  CVT_REQUIRE(a);
  CVT_REQUIRE(b);
  CVT_REQUIRE(out);
  return guarded([&] { *out = wrap(cvtele::tensor(a->value, b->value)); });
}

cvt_status cvt_state_apply_symplectic(const cvt_state* state, const cvt_symplectic* s,
                                      cvt_state** out) {
  CVT_REQUIRE(state);
  CVT_REQUIRE(s);
  CVT_REQUIRE(out);
  return guarded([&] { *out = wrap(cvtele::apply_symplectic(state->value, s->value)); });
}

cvt_status cvt_symplectic_from_matrix(int n_modes, const double* matrix, cvt_symplectic** out) {
  CVT_REQUIRE(matrix);
  CVT_REQUIRE(out);
  if (n_modes < 1) return fail(CVT_ERR_INVALID_ARGUMENT, "n_modes must be >= 1");
  return guarded([&] {
    const int dim = 2 * n_modes;
    cvtele::Matrix m =
        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
            matrix, dim, dim);
    *out = new cvt_symplectic{cvtele::SymplecticMatrix::from_matrix(std::move(m))};
  });
}

cvt_status cvt_symplectic_beamsplitter(int mode_i, int mode_j, int n_modes, cvt_symplectic** out) {
  CVT_REQUIRE(out);
  return guarded(
      [&] { *out = new cvt_symplectic{cvtele::beamsplitter_50_50(mode_i, mode_j, n_modes)}; });
}

cvt_status cvt_symplectic_matrix(const cvt_symplectic* s, double* out, size_t len) {
  CVT_REQUIRE(s);
  CVT_REQUIRE(out);
  return guarded([&] { copy_matrix(s->value.matrix(), out, len); });
}

void cvt_symplectic_free(cvt_symplectic* s) { delete s; }

// ---- EPR ----------------------------------------------------------------------

cvt_status cvt_epr_moments_of(const cvt_state* resource, cvt_epr_moments* out) {
  CVT_REQUIRE(resource);
  CVT_REQUIRE(out);
  return guarded([&] { *out = to_c(cvtele::epr_moments(resource->value)); });
}

cvt_status cvt_epr_uncertainty(const cvt_state* resource, double* delta_mean, int* inseparable) {
  CVT_REQUIRE(resource);
  CVT_REQUIRE(delta_mean);
  return guarded([&] {
    const auto u = cvtele::epr_uncertainty(resource->value);
    *delta_mean = u.delta_mean;
    if (inseparable) *inseparable = u.inseparable ? 1 : 0;
  });
}

cvt_status cvt_exp_neg_delta(const cvt_state* resource, double* out) {
  CVT_REQUIRE(resource);
  CVT_REQUIRE(out);
  return guarded([&] { *out = cvtele::exp_neg_delta(resource->value); });
}

// ---- distorting field ---------------------------------------------------------

cvt_status cvt_field_create(const cvt_state* resource, cvt_field** out) {
  CVT_REQUIRE(resource);
  CVT_REQUIRE(out);
  return guarded([&] { *out = new cvt_field{cvtele::distorting_field(resource->value)}; });
}

void cvt_field_free(cvt_field* field) { delete field; }

cvt_status cvt_field_state(const cvt_field* field, cvt_state** out) {
  CVT_REQUIRE(field);
  CVT_REQUIRE(out);
  return guarded([&] { *out = wrap(field->value.state); });
}

cvt_status cvt_field_source_epr(const cvt_field* field, cvt_epr_moments* out) {
  CVT_REQUIRE(field);
  CVT_REQUIRE(out);
  *out = to_c(field->value.source_epr);
  return CVT_OK;
}

cvt_status cvt_field_classicality_margin(const cvt_field* field, double* out) {
  CVT_REQUIRE(field);
  CVT_REQUIRE(out);
  return guarded([&] { *out = cvtele::classicality_margin(field->value); });
}

cvt_status cvt_field_normally_ordered_cf(const cvt_field* field, cvt_complex lambda,
                                         cvt_complex* out) {
  CVT_REQUIRE(field);
  CVT_REQUIRE(out);
  return guarded(
      [&] { *out = to_c(cvtele::normally_ordered_cf(field->value, to_cpp(lambda))); });
}

cvt_status cvt_field_p_function(const cvt_field* field, cvt_complex alpha, double* out) {
  CVT_REQUIRE(field);
  CVT_REQUIRE(out);
  return guarded([&] { *out = cvtele::p_function(field->value, to_cpp(alpha)); });
}

cvt_status cvt_field_q_function(const cvt_field* field, cvt_complex beta, double* out) {
  CVT_REQUIRE(field);
  CVT_REQUIRE(out);
  return guarded([&] { *out = cvtele::q_function(field->value, to_cpp(beta)); });
}

cvt_status cvt_field_r_function(const cvt_field* field, cvt_complex beta_conj,
                                cvt_complex beta_prime, cvt_complex* out) {
  CVT_REQUIRE(field);
  CVT_REQUIRE(out);
  return guarded([&] {
    *out = to_c(cvtele::r_function(field->value, to_cpp(beta_conj), to_cpp(beta_prime)));
  });
}

cvt_status cvt_field_generating_function(const cvt_field* field, double s, double* out) {
  CVT_REQUIRE(field);
  CVT_REQUIRE(out);
  return guarded([&] { *out = cvtele::generating_function(field->value, s); });
}

cvt_status cvt_field_correlation(const cvt_field* field, int l, int m, cvt_complex* out) {
  CVT_REQUIRE(field);
  CVT_REQUIRE(out);
  return guarded([&] { *out = to_c(cvtele::correlation_function(field->value, l, m)); });
}

cvt_status cvt_field_fock_matrix(const cvt_field* field, int cutoff, double max_deficit,
                                 cvt_fock** out) {
  CVT_REQUIRE(field);
  CVT_REQUIRE(out);
  const double bound = max_deficit > 0.0 ? max_deficit : 1.0;
  return guarded(
      [&] { *out = new cvt_fock{cvtele::fock_matrix(field->value, cutoff, bound)}; });
}

cvt_status cvt_field_photon_distribution(const cvt_field* field, int cutoff, double max_deficit,
                                         double* out, size_t len) {
  CVT_REQUIRE(field);
  CVT_REQUIRE(out);
  if (cutoff < 0 || len != static_cast<size_t>(cutoff) + 1) {
    return fail(CVT_ERR_DIMENSION, "output buffer length must be cutoff + 1");
  }
  const double bound = max_deficit > 0.0 ? max_deficit : 1.0;
  return guarded([&] {
    const auto p = cvtele::photon_distribution(field->value, cutoff, bound);
    std::copy(p.begin(), p.end(), out);
  });
}

void cvt_fock_free(cvt_fock* fock) { delete fock; }
int cvt_fock_cutoff(const cvt_fock* fock) { return fock ? fock->value.cutoff : 0; }
double cvt_fock_deficit(const cvt_fock* fock) { return fock ? fock->value.truncation_deficit : 0.0; }

cvt_status cvt_fock_entry(const cvt_fock* fock, int l, int m, cvt_complex* out) {
  CVT_REQUIRE(fock);
  CVT_REQUIRE(out);
  if (l < 0 || m < 0 || l > fock->value.cutoff || m > fock->value.cutoff) {
    return fail(CVT_ERR_INVALID_ARGUMENT, "Fock index out of range");
  }
  *out = to_c(fock->value.entries(l, m));
  return CVT_OK;
}

cvt_status cvt_fock_to_json(const cvt_fock* fock, char** out_json) {
  CVT_REQUIRE(fock);
  CVT_REQUIRE(out_json);
  return guarded([&] { *out_json = dup_string(cvtele::to_json(fock->value).dump()); });
}

// ---- channel ------------------------------------------------------------------

cvt_status cvt_teleport(const cvt_state* input, const cvt_state* resource, cvt_state** out) {
  CVT_REQUIRE(input);
  CVT_REQUIRE(resource);
  CVT_REQUIRE(out);
  return guarded([&] { *out = wrap(cvtele::teleport(input->value, resource->value)); });
}

cvt_status cvt_channel_displacement_average(const cvt_state* input, const cvt_state* resource,
                                            int n_quadrature_nodes, cvt_state** out) {
  CVT_REQUIRE(input);
  CVT_REQUIRE(resource);
  CVT_REQUIRE(out);
  return guarded([&] {
    *out = wrap(
        cvtele::channel_as_displacement_average(input->value, resource->value, n_quadrature_nodes));
  });
}

cvt_status cvt_added_noise(const cvt_state* resource, double* out) {
  CVT_REQUIRE(resource);
  CVT_REQUIRE(out);
  return guarded([&] { *out = cvtele::added_noise(resource->value); });
}

cvt_status cvt_fidelity_coherent(const cvt_state* resource, double* out) {
  CVT_REQUIRE(resource);
  CVT_REQUIRE(out);
  return guarded([&] { *out = cvtele::fidelity_coherent(resource->value); });
}

cvt_status cvt_state_overlap(const cvt_state* a, const cvt_state* b, double* out) {
  CVT_REQUIRE(a);
  CVT_REQUIRE(b);
  CVT_REQUIRE(out);
  return guarded([&] { *out = cvtele::state_overlap(a->value, b->value); });
}

cvt_status cvt_channel_report_json(const cvt_state* input, const cvt_state* resource,
                                   char** out_json) {
  CVT_REQUIRE(input);
  CVT_REQUIRE(resource);
  CVT_REQUIRE(out_json);
  return guarded([&] {
    *out_json =
        dup_string(cvtele::to_json(cvtele::channel_report(input->value, resource->value)).dump());
  });
}

// ---- simulator ----------------------------------------------------------------

cvt_status cvt_outcome_distribution(const cvt_state* input, const cvt_state* resource,
                                    double mean[2], double cov[4]) {
  CVT_REQUIRE(input);
  CVT_REQUIRE(resource);
  CVT_REQUIRE(mean);
  CVT_REQUIRE(cov);
  return guarded([&] {
    const auto d = cvtele::outcome_distribution(input->value, resource->value);
    mean[0] = d.mean(0);
    mean[1] = d.mean(1);
    copy2(d.cov, cov);
  });
}

cvt_status cvt_conditional_b_state(const cvt_state* input, const cvt_state* resource, double q,
                                   double p, cvt_state** out) {
  CVT_REQUIRE(input);
  CVT_REQUIRE(resource);
  CVT_REQUIRE(out);
  return guarded([&] {
    *out = wrap(cvtele::conditional_b_state(input->value, resource->value, {q, p}));
  });
}

cvt_status cvt_run_protocol(const cvt_state* input, const cvt_state* resource,
                            const cvt_protocol_config* config, cvt_ensemble** out) {
  CVT_REQUIRE(input);
  CVT_REQUIRE(resource);
  CVT_REQUIRE(config);
  CVT_REQUIRE(out);
  return guarded([&] {
    cvtele::ProtocolConfig cfg;
    cfg.n_samples = config->n_samples;
    cfg.seed = config->seed;
    cfg.record_outcomes = config->record_outcomes != 0;
    cfg.threads = config->threads;
    *out = new cvt_ensemble{cvtele::run_protocol(input->value, resource->value, cfg)};
  });
}

void cvt_ensemble_free(cvt_ensemble* ensemble) { delete ensemble; }

cvt_status cvt_ensemble_moments(const cvt_ensemble* ensemble, double mean[2], double cov[4],
                                double mean_se[2], double cov_se[4]) {
  CVT_REQUIRE(ensemble);
  const auto& e = ensemble->value;
  if (mean) {
    mean[0] = e.mean_hat(0);
    mean[1] = e.mean_hat(1);
  }
  if (cov) copy2(e.cov_hat, cov);
  if (mean_se) {
    mean_se[0] = e.mean_se(0);
    mean_se[1] = e.mean_se(1);
  }
  if (cov_se) copy2(e.cov_se, cov_se);
  return CVT_OK;
}

cvt_status cvt_ensemble_to_json(const cvt_ensemble* ensemble, char** out_json) {
  CVT_REQUIRE(ensemble);
  CVT_REQUIRE(out_json);
  return guarded([&] { *out_json = dup_string(cvtele::to_json(ensemble->value).dump()); });
}

cvt_status cvt_ensemble_outcomes_csv(const cvt_ensemble* ensemble, char** out_csv) {
  CVT_REQUIRE(ensemble);
  CVT_REQUIRE(out_csv);
  return guarded([&] {
    std::ostringstream os;
    cvtele::write_outcomes_csv(os, ensemble->value);
    *out_csv = dup_string(os.str());
  });
}

cvt_status cvt_ensemble_write_outcomes_csv(const cvt_ensemble* ensemble, const char* path) {
  CVT_REQUIRE(ensemble);
  CVT_REQUIRE(path);
  std::ofstream os(path);
  if (!os) return fail(CVT_ERR_IO, std::string("cannot open ") + path + " for writing");
  const cvt_status status = guarded([&] { cvtele::write_outcomes_csv(os, ensemble->value); });
  if (status == CVT_OK && !os.flush()) return fail(CVT_ERR_IO, std::string("write failed: ") + path);
  return status;
}

cvt_status cvt_compare_to_analytic(const cvt_ensemble* ensemble, const cvt_state* analytic,
                                   double threshold, cvt_comparison* out) {
  CVT_REQUIRE(ensemble);
  CVT_REQUIRE(analytic);
  CVT_REQUIRE(out);
  return guarded([&] {
    const auto c = cvtele::compare_to_analytic(ensemble->value, analytic->value, threshold);
    out->z_mean[0] = c.z_mean(0);
    out->z_mean[1] = c.z_mean(1);
    copy2(c.z_cov, out->z_cov);
    out->max_abs_z = c.max_abs_z;
    out->threshold = c.threshold;
    out->pass = c.pass ? 1 : 0;
  });
}

}  // extern "C"
