#pragma once

// The one-mode distorting field of a two-mode Gaussian resource: the state
// whose normally ordered characteristic function is χ_AB(λ*, λ). Teleporting
// through the resource superposes this field on the input.

#include "core/epr.hpp"
#include "core/gaussian_state.hpp"

#include <Eigen/Dense>

#include <vector>

namespace cvtele {

struct DistortingFieldState {
  GaussianState state;   // one mode
  EprMoments source_epr;

  /// Normally ordered covariance, cov − I/2. Positive semidefinite.
  Eigen::Matrix2d noise_matrix() const;
};

/// Mean (−⟨Q⟩, ⟨P⟩); covariance I/2 + [[⟨δQ²⟩, −⟨δQδP⟩], [−⟨δQδP⟩, ⟨δP²⟩]].
/// The sign pattern follows from χ_AB(λ*, λ) = ⟨exp(λ* Â† − λ Â)⟩, i.e. the
/// field mode is −Â†.
DistortingFieldState distorting_field(const GaussianState& resource);

/// Smallest eigenvalue of cov − I/2; ≥ 0 means a regular (or delta) P function.
double classicality_margin(const DistortingFieldState& d);

Complex normally_ordered_cf(const DistortingFieldState& d, Complex lambda);

/// Glauber–Sudarshan P function. Throws ErrorCode::degenerate_distribution when
/// the normally ordered covariance has a zero direction.
double p_function(const DistortingFieldState& d, Complex alpha);

/// Husimi function (1/π)⟨β|ρ_D|β⟩.
double q_function(const DistortingFieldState& d, Complex beta);

/// Glauber R function exp((|β|² + |β'|²)/2)⟨β|ρ_D|β'⟩, analytic in its two
/// arguments, which are passed independently.
Complex r_function(const DistortingFieldState& d, Complex beta_conj, Complex beta_prime);

struct FockMatrix {
  int cutoff = 0;
  Eigen::MatrixXcd entries;        // (cutoff+1)×(cutoff+1)
  double truncation_deficit = 0.0; // 1 − trace
};

/// Number-basis density matrix up to photon number `cutoff`. Closed forms for
/// thermal and coherent fields; otherwise a ladder recurrence on the Gaussian
/// generating function of the matrix elements.
/// Throws ErrorCode::truncation, carrying the achieved deficit, when the
/// deficit is not below `max_deficit`.
FockMatrix fock_matrix(const DistortingFieldState& d, int cutoff, double max_deficit = 1.0);

std::vector<double> photon_distribution(const DistortingFieldState& d, int cutoff,
                                        double max_deficit = 1.0);

/// G(s) = Σ s^l p_l = ⟨exp((s − 1)Δ)⟩ for s ∈ [−1, 1].
double generating_function(const DistortingFieldState& d, double s);

/// Normally ordered moment ⟨(a†)^l a^m⟩ by Wick's theorem on the normally
/// ordered covariance. Equals ⟨Δ^l⟩ for l = m.
Complex correlation_function(const DistortingFieldState& d, int l, int m);

namespace detail {

/// General path of fock_matrix.
Eigen::MatrixXcd fock_matrix_by_recurrence(const GaussianState& one_mode, int cutoff);

/// Independent CF inversion on a Gauss–Hermite grid. Exact in exact arithmetic
/// for undisplaced states, but cancellation limits it to moderate cutoffs.
Eigen::MatrixXcd fock_matrix_by_quadrature(const GaussianState& one_mode, int cutoff,
                                           int nodes_per_axis = 96);

/// ⟨m|D(α)|n⟩·exp(|α|²/2) for 0 ≤ m, n ≤ cutoff by the ladder recurrence.
Eigen::MatrixXcd scaled_displacement_matrix(Complex alpha, int cutoff);

}  // namespace detail

}  // namespace cvtele
