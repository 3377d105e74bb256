#pragma once

#include "core/gaussian_state.hpp"

namespace cvtele {

/// Statistics of the EPR pair Q = q1 − q2, P = p1 + p2 (commuting) and of
/// Δ = (Q² + P²)/2 in a two-mode state. Second moments are raw, i.e. they
/// include the first-moment contributions.
struct EprMoments {
  double mean_Q = 0.0;
  double mean_P = 0.0;
  double var_QQ = 0.0;  // ⟨Q²⟩
  double var_PP = 0.0;  // ⟨P²⟩
  double cov_QP = 0.0;  // ⟨QP⟩
  double delta_mean = 0.0;

  double centered_QQ() const { return var_QQ - mean_Q * mean_Q; }
  double centered_PP() const { return var_PP - mean_P * mean_P; }
  double centered_QP() const { return cov_QP - mean_Q * mean_P; }
};

EprMoments epr_moments(const GaussianState& state);

struct EprUncertainty {
  double delta_mean = 0.0;
  bool inseparable = false;  // ⟨Δ⟩ < 1
};

EprUncertainty epr_uncertainty(const GaussianState& state);

/// ⟨exp(−t Δ)⟩ for t ≥ 0, from the joint Gaussian law of (Q, P).
double expectation_exp_delta(const GaussianState& state, double t);

/// ⟨exp(−Δ)⟩, the coherent-state teleportation fidelity of the resource.
double exp_neg_delta(const GaussianState& state);

}  // namespace cvtele
