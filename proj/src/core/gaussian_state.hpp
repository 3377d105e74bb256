#pragma once

// Multimode Gaussian states in the covariance-matrix picture.
//
// Conventions used throughout the library:
//   q = (a + a†)/√2,  p = (a − a†)/(i√2),  ħ = 1, vacuum variance 1/2.
//   Phase-space vectors are interleaved: (q1, p1, q2, p2, ..., qn, pn).
//   D(α) = exp(α a† − α* a) shifts (⟨q⟩, ⟨p⟩) by (√2 Re α, √2 Im α).
//   χ(λ1..λn) = Tr[ρ D(λ1)···D(λn)].

#include <Eigen/Dense>

#include <complex>
#include <span>

namespace cvtele {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kVacuumVariance = 0.5;
inline constexpr double kSymmetryTolerance = 1e-12;   // relative
inline constexpr double kPhysicalTolerance = 1e-10;   // eigenvalue floor
inline constexpr double kPhysicalRelativeTolerance = 1e-14;  // × max |cov entry|
inline constexpr double kSymplecticTolerance = 1e-10; // entrywise

/// Block-diagonal symplectic form, one [[0,1],[-1,0]] block per mode.
Matrix symplectic_form(int n_modes);

struct PhysicalityCheck {
  bool physical = false;
  double min_eigenvalue = 0.0;  // of the Hermitian matrix cov + (i/2)J
};

/// Robertson–Schrödinger test on a covariance matrix. Throws on non-square,
/// odd-dimensional or non-symmetric input.
PhysicalityCheck check_physical(const Matrix& cov);

namespace detail {
struct Unchecked {};
}  // namespace detail

class GaussianState {
 public:
  /// Validating constructor: symmetry (relative 1e-12) and cov + (i/2)J ≥ 0.
  /// The stored covariance is exactly symmetrized.
  static GaussianState from_moments(Vector mean, Matrix cov);

  /// Used by operations that preserve physicality by construction.
  GaussianState(detail::Unchecked, Vector mean, Matrix cov);

  int n_modes() const { return static_cast<int>(mean_.size() / 2); }
  const Vector& mean() const { return mean_; }
  const Matrix& cov() const { return cov_; }

  Eigen::Vector2d mode_mean(int mode) const;
  Eigen::Matrix2d mode_cov(int mode) const;

  /// Marginal on the listed modes, in the listed order.
  GaussianState reduced(std::span<const int> modes) const;

 private:
  Vector mean_;
  Matrix cov_;
};

class SymplecticMatrix {
 public:
  /// Throws ErrorCode::not_symplectic unless SᵀJS = J within 1e-10.
  static SymplecticMatrix from_matrix(Matrix s);
  static SymplecticMatrix identity(int n_modes);

  const Matrix& matrix() const { return s_; }
  int n_modes() const { return static_cast<int>(s_.rows() / 2); }

  SymplecticMatrix operator*(const SymplecticMatrix& rhs) const;

 private:
  explicit SymplecticMatrix(Matrix s) : s_(std::move(s)) {}
  Matrix s_;
};

// Constructors.
GaussianState vacuum(int n_modes);
GaussianState coherent(Complex alpha);
GaussianState two_mode_squeezed_vacuum(double r);
GaussianState thermal(double nbar);

/// Closed-form Gaussian characteristic function; one λ per mode.
Complex characteristic_function(const GaussianState& state,
                                std::span<const Complex> lambdas);

GaussianState displace(const GaussianState& state,
                       std::span<const Complex> alphas);
GaussianState apply_symplectic(const GaussianState& state,
                               const SymplecticMatrix& s);
GaussianState tensor(const GaussianState& a, const GaussianState& b);

/// Balanced lossless beamsplitter acting as a_i → (a_i − a_j)/√2,
/// a_j → (a_i + a_j)/√2. The measured pair of the teleportation protocol is
/// then (q of mode i, p of mode j) = ((q_i − q_j)/√2, (p_i + p_j)/√2).
SymplecticMatrix beamsplitter_50_50(int mode_i, int mode_j, int n_modes);

/// Phase-space rotation of one mode by theta (a → e^{−iθ} a).
SymplecticMatrix phase_rotation(int mode, double theta, int n_modes);

/// Single-mode squeezer: q → e^{−r} q, p → e^{r} p.
SymplecticMatrix single_mode_squeezer(int mode, double r, int n_modes);

/// Embeds one 2×2 symplectic block per mode (local operation).
SymplecticMatrix local_symplectic(std::span<const Eigen::Matrix2d> blocks);

}  // namespace cvtele
