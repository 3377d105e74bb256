#pragma once

#include "core/distorting_field.hpp"
#include "core/gaussian_state.hpp"

namespace cvtele {

struct ChannelReport {
  GaussianState output;
  double added_noise = 0.0;        // ⟨Δ⟩
  double fidelity_coherent = 0.0;  // ⟨exp(−Δ)⟩
  bool inseparable = false;
};

/// Unit-gain teleportation of a one-mode Gaussian input through a two-mode
/// Gaussian resource: χ_out(λ) = χ_in(λ) χ_AB(λ*, λ). The output is the input
/// with the distorting field's mean added and its noise matrix (cov_D − I/2)
/// added to the covariance.
GaussianState teleport(const GaussianState& input, const GaussianState& resource);

/// The same channel evaluated as ∫d²β P_D(β) D(β) ρ_in D†(β) at the level of
/// first and second moments, by Gauss–Hermite quadrature over P_D. Requires a
/// strictly classical distorting field (cov_D − I/2 positive definite).
GaussianState channel_as_displacement_average(const GaussianState& input,
                                              const GaussianState& resource,
                                              int n_quadrature_nodes = 16);

double added_noise(const GaussianState& resource);
double fidelity_coherent(const GaussianState& resource);

/// Tr[ρ_a ρ_b] for Gaussian states with the same mode count.
double state_overlap(const GaussianState& a, const GaussianState& b);

ChannelReport channel_report(const GaussianState& input, const GaussianState& resource);

}  // namespace cvtele
