#include "core/gaussian_state.hpp"

#include "core/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace cvtele {

namespace {

void require_square_even(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0 || m.rows() % 2 != 0) {
    throw Error(ErrorCode::dimension_mismatch,
                std::string(what) + ": expected a non-empty even-dimensional square matrix, got " +
                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

void require_mode(int mode, int n_modes, const char* what) {
  if (mode < 0 || mode >= n_modes) {
    throw Error(ErrorCode::invalid_argument,
                std::string(what) + ": mode index " + std::to_string(mode) +
                    " out of range for " + std::to_string(n_modes) + " modes");
  }
}

void require_lambdas(std::span<const Complex> values, int n_modes, const char* what) {
  if (static_cast<int>(values.size()) != n_modes) {
    throw Error(ErrorCode::dimension_mismatch,
                std::string(what) + ": got " + std::to_string(values.size()) +
                    " amplitudes for " + std::to_string(n_modes) + " modes");
  }
}

}  // namespace

Matrix symplectic_form(int n_modes) {
  Matrix j = Matrix::Zero(2 * n_modes, 2 * n_modes);
  for (int k = 0; k < n_modes; ++k) {
    j(2 * k, 2 * k + 1) = 1.0;
    j(2 * k + 1, 2 * k) = -1.0;
  }
  return j;
}

PhysicalityCheck check_physical(const Matrix& cov) {
  require_square_even(cov, "check_physical");
  const double scale = std::max(cov.cwiseAbs().maxCoeff(), 1e-300);
  const double asym = (cov - cov.transpose()).cwiseAbs().maxCoeff();
  if (!(asym <= kSymmetryTolerance * scale)) {
    throw Error(ErrorCode::invalid_argument,
                "covariance matrix is not symmetric (max asymmetry " + std::to_string(asym) + ")");
  }
  const Eigen::Index dim = cov.rows();
  Eigen::MatrixXcd h(dim, dim);
  const Matrix sym = 0.5 * (cov + cov.transpose());
  const Matrix j = symplectic_form(static_cast<int>(dim / 2));
  h.real() = sym;
  h.imag() = 0.5 * j;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues().minCoeff();
  // Rounding in the entries of a strongly squeezed matrix alone moves the
  // spectrum by about eps·‖cov‖, which exceeds the absolute floor past ~1e4.
  const double floor = std::max(kPhysicalTolerance, kPhysicalRelativeTolerance * scale);
  return {min_eig >= -floor, min_eig};
}

GaussianState GaussianState::from_moments(Vector mean, Matrix cov) {
  require_square_even(cov, "GaussianState");
  if (mean.size() != cov.rows()) {
    throw Error(ErrorCode::dimension_mismatch,
                "GaussianState: mean has length " + std::to_string(mean.size()) +
                    " but covariance is " + std::to_string(cov.rows()) + "x" +
                    std::to_string(cov.cols()));
  }
  if (!mean.allFinite() || !cov.allFinite()) {
    throw Error(ErrorCode::invalid_argument, "GaussianState: non-finite moments");
  }
  const PhysicalityCheck check = check_physical(cov);
  if (!check.physical) {
    throw Error(ErrorCode::unphysical,
                "covariance violates cov + (i/2)J >= 0 (min eigenvalue " +
                    std::to_string(check.min_eigenvalue) + ")",
                check.min_eigenvalue);
  }
  Matrix sym = 0.5 * (cov + cov.transpose());
  return GaussianState(detail::Unchecked{}, std::move(mean), std::move(sym));
}

GaussianState::GaussianState(detail::Unchecked, Vector mean, Matrix cov)
    : mean_(std::move(mean)), cov_(std::move(cov)) {}

Eigen::Vector2d GaussianState::mode_mean(int mode) const {
  require_mode(mode, n_modes(), "mode_mean");
  return mean_.segment<2>(2 * mode);
}

Eigen::Matrix2d GaussianState::mode_cov(int mode) const {
  require_mode(mode, n_modes(), "mode_cov");
  return cov_.block<2, 2>(2 * mode, 2 * mode);
}

GaussianState GaussianState::reduced(std::span<const int> modes) const {
  const int n = static_cast<int>(modes.size());
  if (n == 0) throw Error(ErrorCode::invalid_argument, "reduced: empty mode list");
  Vector m(2 * n);
  Matrix c(2 * n, 2 * n);
  for (int a = 0; a < n; ++a) {
    require_mode(modes[a], n_modes(), "reduced");
    m.segment<2>(2 * a) = mean_.segment<2>(2 * modes[a]);
    for (int b = 0; b < n; ++b) {
      c.block<2, 2>(2 * a, 2 * b) = cov_.block<2, 2>(2 * modes[a], 2 * modes[b]);
    }
  }
  return GaussianState(detail::Unchecked{}, std::move(m), std::move(c));
}

SymplecticMatrix SymplecticMatrix::from_matrix(Matrix s) {
  require_square_even(s, "SymplecticMatrix");
  const Matrix j = symplectic_form(static_cast<int>(s.rows() / 2));
  const double err = (s.transpose() * j * s - j).cwiseAbs().maxCoeff();
  if (!(err <= kSymplecticTolerance)) {
    throw Error(ErrorCode::not_symplectic,
                "matrix is not symplectic (max |S^T J S - J| = " + std::to_string(err) + ")",
                err);
  }
  return SymplecticMatrix(std::move(s));
}

SymplecticMatrix SymplecticMatrix::identity(int n_modes) {
  if (n_modes < 1) throw Error(ErrorCode::invalid_argument, "identity: n_modes must be >= 1");
  return SymplecticMatrix(Matrix::Identity(2 * n_modes, 2 * n_modes));
}

SymplecticMatrix SymplecticMatrix::operator*(const SymplecticMatrix& rhs) const {
  if (rhs.s_.rows() != s_.rows()) {
    throw Error(ErrorCode::dimension_mismatch, "symplectic product: mode count mismatch");
  }
  return SymplecticMatrix(s_ * rhs.s_);
}

GaussianState vacuum(int n_modes) {
  if (n_modes < 1) throw Error(ErrorCode::invalid_argument, "vacuum: n_modes must be >= 1");
  return GaussianState(detail::Unchecked{}, Vector::Zero(2 * n_modes),
                       kVacuumVariance * Matrix::Identity(2 * n_modes, 2 * n_modes));
}

GaussianState coherent(Complex alpha) {
  Vector mean(2);
  mean << std::numbers::sqrt2 * alpha.real(), std::numbers::sqrt2 * alpha.imag();
  return GaussianState(detail::Unchecked{}, std::move(mean), kVacuumVariance * Matrix::Identity(2, 2));
}

GaussianState two_mode_squeezed_vacuum(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw Error(ErrorCode::invalid_argument, "two_mode_squeezed_vacuum: r must be >= 0");
  }
  const double c = 0.5 * std::cosh(2.0 * r);
  const double s = 0.5 * std::sinh(2.0 * r);
  Matrix cov(4, 4);
  cov << c, 0, s, 0,
         0, c, 0, -s,
         s, 0, c, 0,
         0, -s, 0, c;
  return GaussianState(detail::Unchecked{}, Vector::Zero(4), std::move(cov));
}

GaussianState thermal(double nbar) {
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) {
    throw Error(ErrorCode::invalid_argument, "thermal: nbar must be >= 0");
  }
  return GaussianState(detail::Unchecked{}, Vector::Zero(2),
                       (nbar + kVacuumVariance) * Matrix::Identity(2, 2));
}

Complex characteristic_function(const GaussianState& state, std::span<const Complex> lambdas) {
  require_lambdas(lambdas, state.n_modes(), "characteristic_function");
  // D(λ) = exp(i√2 (Im λ · q − Re λ · p)), so χ = E[exp(i ξ·x)] with
  // ξ_k = √2 (Im λ_k, −Re λ_k).
  Vector xi(2 * state.n_modes());
  for (int k = 0; k < state.n_modes(); ++k) {
    xi(2 * k) = std::numbers::sqrt2 * lambdas[k].imag();
    xi(2 * k + 1) = -std::numbers::sqrt2 * lambdas[k].real();
  }
  const double quad = xi.dot(state.cov() * xi);
  const double phase = xi.dot(state.mean());
  return std::exp(Complex(-0.5 * quad, phase));
}

GaussianState displace(const GaussianState& state, std::span<const Complex> alphas) {
  require_lambdas(alphas, state.n_modes(), "displace");
  Vector mean = state.mean();
  for (int k = 0; k < state.n_modes(); ++k) {
    mean(2 * k) += std::numbers::sqrt2 * alphas[k].real();
    mean(2 * k + 1) += std::numbers::sqrt2 * alphas[k].imag();
  }
  return GaussianState(detail::Unchecked{}, std::move(mean), state.cov());
}

GaussianState apply_symplectic(const GaussianState& state, const SymplecticMatrix& s) {
  if (s.n_modes() != state.n_modes()) {
    throw Error(ErrorCode::dimension_mismatch,
                "apply_symplectic: matrix acts on " + std::to_string(s.n_modes()) +
                    " modes, state has " + std::to_string(state.n_modes()));
  }
  const Matrix& m = s.matrix();
  Matrix cov = m * state.cov() * m.transpose();
  cov = 0.5 * (cov + cov.transpose()).eval();
  return GaussianState(detail::Unchecked{}, m * state.mean(), std::move(cov));
}

GaussianState tensor(const GaussianState& a, const GaussianState& b) {
  const Eigen::Index na = a.mean().size();
  const Eigen::Index nb = b.mean().size();
  Vector mean(na + nb);
  mean << a.mean(), b.mean();
  Matrix cov = Matrix::Zero(na + nb, na + nb);
  cov.topLeftCorner(na, na) = a.cov();
  cov.bottomRightCorner(nb, nb) = b.cov();
  return GaussianState(detail::Unchecked{}, std::move(mean), std::move(cov));
}

SymplecticMatrix beamsplitter_50_50(int mode_i, int mode_j, int n_modes) {
  require_mode(mode_i, n_modes, "beamsplitter_50_50");
  require_mode(mode_j, n_modes, "beamsplitter_50_50");
  if (mode_i == mode_j) {
    throw Error(ErrorCode::invalid_argument, "beamsplitter_50_50: modes must differ");
  }
  const double h = std::numbers::sqrt2 / 2.0;
  Matrix s = Matrix::Identity(2 * n_modes, 2 * n_modes);
  for (int c = 0; c < 2; ++c) {
    const int i = 2 * mode_i + c;
    const int j = 2 * mode_j + c;
    s(i, i) = h;
    s(i, j) = -h;
    s(j, i) = h;
    s(j, j) = h;
  }
  return SymplecticMatrix::from_matrix(std::move(s));
}

SymplecticMatrix phase_rotation(int mode, double theta, int n_modes) {
  require_mode(mode, n_modes, "phase_rotation");
  Matrix s = Matrix::Identity(2 * n_modes, 2 * n_modes);
  const double c = std::cos(theta);
  const double sn = std::sin(theta);
  s.block<2, 2>(2 * mode, 2 * mode) << c, sn, -sn, c;
  return SymplecticMatrix::from_matrix(std::move(s));
}

SymplecticMatrix single_mode_squeezer(int mode, double r, int n_modes) {
  require_mode(mode, n_modes, "single_mode_squeezer");
  Matrix s = Matrix::Identity(2 * n_modes, 2 * n_modes);
  s(2 * mode, 2 * mode) = std::exp(-r);
  s(2 * mode + 1, 2 * mode + 1) = std::exp(r);
  return SymplecticMatrix::from_matrix(std::move(s));
}

SymplecticMatrix local_symplectic(std::span<const Eigen::Matrix2d> blocks) {
  const int n = static_cast<int>(blocks.size());
  if (n == 0) throw Error(ErrorCode::invalid_argument, "local_symplectic: no blocks");
  Matrix s = Matrix::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) s.block<2, 2>(2 * k, 2 * k) = blocks[k];
  return SymplecticMatrix::from_matrix(std::move(s));
}

}  // namespace cvtele
