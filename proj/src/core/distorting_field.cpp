#include "core/distorting_field.hpp"

#include "core/error.hpp"
#include "core/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace cvtele {

namespace {

constexpr double kDegenerateNoise = 1e-12;
constexpr int kMaxQuadratureCutoff = 150;

// w = √2 (Im λ, −Re λ): the real vector pairing λ with (q, p) in D(λ).
Eigen::Vector2d cf_vector(Complex lambda) {
  return {std::numbers::sqrt2 * lambda.imag(), -std::numbers::sqrt2 * lambda.real()};
}

Complex amplitude_of(const Eigen::Vector2d& mean) {
  return {mean(0) / std::numbers::sqrt2, mean(1) / std::numbers::sqrt2};
}

template <typename T>
T ipow(T base, int exponent) {
  T result(1.0);
  for (int i = 0; i < exponent; ++i) result *= base;
  return result;
}

bool is_thermal(const Eigen::Vector2d& mean, const Eigen::Matrix2d& noise) {
  const double scale = std::max(1.0, noise.cwiseAbs().maxCoeff());
  return mean.isZero(0.0) && std::abs(noise(0, 1)) <= 1e-15 * scale &&
         std::abs(noise(0, 0) - noise(1, 1)) <= 1e-15 * scale;
}

}  // namespace

Eigen::Matrix2d DistortingFieldState::noise_matrix() const {
  return state.cov() - kVacuumVariance * Eigen::Matrix2d::Identity();
}

DistortingFieldState distorting_field(const GaussianState& resource) {
  const EprMoments e = epr_moments(resource);
  const PhysicalityCheck check = check_physical(resource.cov());
  if (!check.physical) {
    throw Error(ErrorCode::unphysical, "distorting_field: resource state is not physical",
                check.min_eigenvalue);
  }
  Vector mean(2);
  mean << -e.mean_Q, e.mean_P;
  Matrix cov(2, 2);
  cov << kVacuumVariance + e.centered_QQ(), -e.centered_QP(),
         -e.centered_QP(), kVacuumVariance + e.centered_PP();
  return {GaussianState(detail::Unchecked{}, std::move(mean), std::move(cov)), e};
}

double classicality_margin(const DistortingFieldState& d) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(d.noise_matrix(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

Complex normally_ordered_cf(const DistortingFieldState& d, Complex lambda) {
  const Eigen::Vector2d w = cf_vector(lambda);
  const double quad = w.dot(d.noise_matrix() * w);
  const double phase = w.dot(d.state.mode_mean(0));
  return std::exp(Complex(-0.5 * quad, phase));
}

double p_function(const DistortingFieldState& d, Complex alpha) {
  const Eigen::Matrix2d n = d.noise_matrix();
  if (classicality_margin(d) <= kDegenerateNoise * std::max(1.0, n.trace())) {
    throw Error(ErrorCode::degenerate_distribution,
                "p_function: normally ordered covariance is singular; P is a distribution, "
                "not a function",
                classicality_margin(d));
  }
  const Eigen::Vector2d u =
      Eigen::Vector2d(alpha.real(), alpha.imag()) - d.state.mode_mean(0) / std::numbers::sqrt2;
  return std::exp(-u.dot(n.inverse() * u)) / (std::numbers::pi * std::sqrt(n.determinant()));
}

double q_function(const DistortingFieldState& d, Complex beta) {
  const Eigen::Matrix2d m = d.state.cov() + kVacuumVariance * Eigen::Matrix2d::Identity();
  const Eigen::Vector2d delta =
      std::numbers::sqrt2 * Eigen::Vector2d(beta.real(), beta.imag()) - d.state.mode_mean(0);
  return std::exp(-0.5 * delta.dot(m.inverse() * delta)) /
         (std::numbers::pi * std::sqrt(m.determinant()));
}

Complex r_function(const DistortingFieldState& d, Complex beta_conj, Complex beta_prime) {
  // R = exp(β*β') (1/π)∫d²λ χ_D(λ) e^{−|λ|²/2} exp(−β*λ + β'λ*), a Gaussian
  // integral with complex linear term c·w in the variable w = √2(Im λ, −Re λ).
  const Eigen::Matrix2d m = d.state.cov() + kVacuumVariance * Eigen::Matrix2d::Identity();
  const Eigen::Vector2d mean = d.state.mode_mean(0);
  const Complex i(0.0, 1.0);
  Eigen::Vector2cd c;
  c(0) = i * mean(0) - i * (beta_conj + beta_prime) / std::numbers::sqrt2;
  c(1) = i * mean(1) + (beta_conj - beta_prime) / std::numbers::sqrt2;
  const Eigen::Matrix2cd minv = m.inverse().cast<Complex>();
  const Complex quad = c.transpose() * minv * c;
  return std::exp(beta_conj * beta_prime + 0.5 * quad) / std::sqrt(m.determinant());
}

namespace detail {

Eigen::MatrixXcd scaled_displacement_matrix(Complex alpha, int cutoff) {
  const int k = cutoff + 1;
  Eigen::MatrixXcd t(k, k);
  t(0, 0) = 1.0;
  for (int m = 1; m < k; ++m) t(m, 0) = alpha * t(m - 1, 0) / std::sqrt(static_cast<double>(m));
  const Complex ac = std::conj(alpha);
  for (int n = 1; n < k; ++n) {
    const double inv = 1.0 / std::sqrt(static_cast<double>(n));
    t(0, n) = -ac * t(0, n - 1) * inv;
    for (int m = 1; m < k; ++m) {
      t(m, n) = (std::sqrt(static_cast<double>(m)) * t(m - 1, n - 1) - ac * t(m, n - 1)) * inv;
    }
  }
  return t;
}

Eigen::MatrixXcd fock_matrix_by_recurrence(const GaussianState& one_mode, int cutoff) {
  if (one_mode.n_modes() != 1) {
    throw Error(ErrorCode::dimension_mismatch, "fock_matrix_by_recurrence: one-mode state required");
  }
  if (cutoff < 0) throw Error(ErrorCode::invalid_argument, "fock_matrix: cutoff must be >= 0");
  // R(x, y) = Σ ρ_lm x^l y^m / √(l! m!) = K exp(½ zᵀA z + bᵀz), z = (x, y),
  // read off from the R-function exponent. Differentiating gives the ladder
  //   √(l+1) ρ_{l+1,m} = b_x ρ_lm + A_xx √l ρ_{l−1,m} + A_xy √m ρ_{l,m−1}
  // and its mirror in m.
  const Eigen::Matrix2d m = one_mode.cov() + kVacuumVariance * Eigen::Matrix2d::Identity();
  const Eigen::Matrix2cd minv = m.inverse().cast<Complex>();
  const Eigen::Vector2d mean = one_mode.mode_mean(0);
  const Complex i(0.0, 1.0);
  const double h = 1.0 / std::numbers::sqrt2;
  Eigen::Matrix2cd lin;
  lin << -i * h, -i * h, h, -h;
  const Eigen::Vector2cd c0 = i * mean.cast<Complex>();

  Eigen::Matrix2cd a = lin.transpose() * minv * lin;
  a(0, 1) += 1.0;
  a(1, 0) += 1.0;
  const Eigen::Vector2cd b = lin.transpose() * minv * c0;
  const Complex k0 = std::exp(0.5 * Complex(c0.transpose() * minv * c0)) / std::sqrt(m.determinant());

  const int k = cutoff + 1;
  std::vector<double> root(k + 1);
  for (int n = 0; n <= k; ++n) root[n] = std::sqrt(static_cast<double>(n));

  Eigen::MatrixXcd rho(k, k);
  rho(0, 0) = k0;
  for (int l = 1; l < k; ++l) {
    Complex v = b(0) * rho(l - 1, 0);
    if (l >= 2) v += a(0, 0) * root[l - 1] * rho(l - 2, 0);
    rho(l, 0) = v / root[l];
  }
  for (int mm = 1; mm < k; ++mm) {
    for (int l = 0; l < k; ++l) {
      Complex v = b(1) * rho(l, mm - 1);
      if (mm >= 2) v += a(1, 1) * root[mm - 1] * rho(l, mm - 2);
      if (l >= 1) v += a(0, 1) * root[l] * rho(l - 1, mm - 1);
      rho(l, mm) = v / root[mm];
    }
  }
  Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
  return herm;
}

Eigen::MatrixXcd fock_matrix_by_quadrature(const GaussianState& one_mode, int cutoff,
                                           int nodes_per_axis) {
  if (one_mode.n_modes() != 1) {
    throw Error(ErrorCode::dimension_mismatch, "fock_matrix_by_quadrature: one-mode state required");
  }
  if (cutoff > kMaxQuadratureCutoff) {
    throw Error(ErrorCode::invalid_argument,
                "fock_matrix: cutoff " + std::to_string(cutoff) +
                    " exceeds the CF-inversion limit of " + std::to_string(kMaxQuadratureCutoff));
  }
  // ρ_lm = (1/π)∫d²λ χ(λ)⟨l|D(−λ)|m⟩. With ⟨l|D(−λ)|m⟩ = e^{−|λ|²/2} T_lm(−λ)
  // the Gaussian weight is exp(−½ wᵀ M w), M = cov + I/2, and T is a
  // polynomial of degree l + m. Substituting w = √2 L⁻ᵀ t (M = L Lᵀ) turns
  // the weight into exp(−|t|²).
  const int nodes = std::max(nodes_per_axis, cutoff + 1);
  const GaussHermiteRule& rule = gauss_hermite(nodes);
  const Eigen::Matrix2d m = one_mode.cov() + kVacuumVariance * Eigen::Matrix2d::Identity();
  const Eigen::Matrix2d lt_inv = m.llt().matrixU().solve(Eigen::Matrix2d::Identity());
  const Eigen::Vector2d mean = one_mode.mode_mean(0);

  const int k = cutoff + 1;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(k, k);
  for (int a = 0; a < nodes; ++a) {
    for (int b = 0; b < nodes; ++b) {
      const Eigen::Vector2d w =
          std::numbers::sqrt2 * lt_inv * Eigen::Vector2d(rule.nodes[a], rule.nodes[b]);
      const Complex lambda(-w(1) / std::numbers::sqrt2, w(0) / std::numbers::sqrt2);
      const Complex weight = rule.weights[a] * rule.weights[b] * std::exp(Complex(0.0, w.dot(mean)));
      rho.noalias() += weight * scaled_displacement_matrix(-lambda, cutoff);
    }
  }
  rho /= std::numbers::pi * std::sqrt(m.determinant());
  // Hermitian part; the quadrature is Hermitian up to round-off.
  Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
  return herm;
}

}  // namespace detail

FockMatrix fock_matrix(const DistortingFieldState& d, int cutoff, double max_deficit) {
  if (cutoff < 1) {
    throw Error(ErrorCode::invalid_argument, "fock_matrix: cutoff must be >= 1");
  }
  const int k = cutoff + 1;
  const Eigen::Vector2d mean = d.state.mode_mean(0);
  const Eigen::Matrix2d noise = d.noise_matrix();

  FockMatrix out;
  out.cutoff = cutoff;
  if (noise.cwiseAbs().maxCoeff() < 1e-14) {
    // Ideal-EPR boundary: coherent field, P is a delta.
    const Complex beta = amplitude_of(mean);
    Eigen::VectorXcd c(k);
    c(0) = std::exp(-0.5 * std::norm(beta));
    for (int l = 1; l < k; ++l) c(l) = beta * c(l - 1) / std::sqrt(static_cast<double>(l));
    out.entries = c * c.adjoint();
  } else if (is_thermal(mean, noise)) {
    const double nbar = 0.5 * noise.trace();
    const double ratio = nbar / (1.0 + nbar);
    out.entries = Eigen::MatrixXcd::Zero(k, k);
    double p = 1.0 / (1.0 + nbar);
    for (int l = 0; l < k; ++l) {
      out.entries(l, l) = p;
      p *= ratio;
    }
  } else {
    out.entries = detail::fock_matrix_by_recurrence(d.state, cutoff);
  }
  for (int l = 0; l < k; ++l) {
    out.entries(l, l) = std::max(0.0, out.entries(l, l).real());
  }
  const double deficit = 1.0 - out.entries.trace().real();
  if (deficit < -1e-10) {
    throw Error(ErrorCode::numerical,
                "fock_matrix: trace exceeds one by " + std::to_string(-deficit), deficit);
  }
  out.truncation_deficit = std::max(0.0, deficit);
  if (!(out.truncation_deficit < max_deficit)) {
    throw Error(ErrorCode::truncation,
                "fock_matrix: truncation deficit " + std::to_string(out.truncation_deficit) +
                    " at cutoff " + std::to_string(cutoff) + " is not below the bound " +
                    std::to_string(max_deficit),
                out.truncation_deficit);
  }
  return out;
}

std::vector<double> photon_distribution(const DistortingFieldState& d, int cutoff,
                                        double max_deficit) {
  const FockMatrix f = fock_matrix(d, cutoff, max_deficit);
  std::vector<double> p(f.cutoff + 1);
  for (int l = 0; l <= f.cutoff; ++l) p[l] = f.entries(l, l).real();
  return p;
}

double generating_function(const DistortingFieldState& d, double s) {
  if (!(s >= -1.0 && s <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "generating_function: s must lie in [-1, 1]");
  }
  // Tr[ρ s^n] with s^n = (1 − s)^{-1} × (thermal state of nbar = s/(1 − s)),
  // rescaled so that s = 1 is regular.
  const Eigen::Matrix2d a =
      (1.0 - s) * d.state.cov() + 0.5 * (1.0 + s) * Eigen::Matrix2d::Identity();
  const Eigen::Vector2d mean = d.state.mode_mean(0);
  const double exponent = -0.5 * (1.0 - s) * mean.dot(a.inverse() * mean);
  return std::exp(exponent) / std::sqrt(a.determinant());
}

Complex correlation_function(const DistortingFieldState& d, int l, int m) {
  if (l < 0 || m < 0) {
    throw Error(ErrorCode::invalid_argument, "correlation_function: indices must be >= 0");
  }
  // a = ā + b with b a zero-mean Gaussian of normally ordered moments
  // ⟨b†b⟩ = n, ⟨b²⟩ = s. Wick: E[b*^j b^k] = j!k! Σ (s*/2)^u/u! (s/2)^v/v! n^c/c!
  // over 2u + c = j, 2v + c = k.
  const Eigen::Matrix2d& v = d.state.cov();
  const double n = 0.5 * (v(0, 0) + v(1, 1) - 1.0);
  const Complex sq(0.5 * (v(0, 0) - v(1, 1)), v(0, 1));
  const Complex abar = amplitude_of(d.state.mode_mean(0));

  auto lfact = [](int x) { return std::lgamma(static_cast<double>(x) + 1.0); };
  auto central = [&](int j, int k) {
    Complex total = 0.0;
    for (int c = 0; c <= std::min(j, k); ++c) {
      if ((j - c) % 2 != 0 || (k - c) % 2 != 0) continue;
      const int u = (j - c) / 2;
      const int w = (k - c) / 2;
      const double coeff = std::exp(lfact(j) + lfact(k) - lfact(u) - lfact(w) - lfact(c));
      total += coeff * ipow(std::conj(sq) / 2.0, u) * ipow(sq / 2.0, w) * ipow(n, c);
    }
    return total;
  };
  auto binom = [&](int top, int bottom) {
    return std::exp(lfact(top) - lfact(bottom) - lfact(top - bottom));
  };

  Complex result = 0.0;
  for (int j = 0; j <= l; ++j) {
    for (int k = 0; k <= m; ++k) {
      const Complex c = central(j, k);
      if (c == Complex(0.0)) continue;
      result += binom(l, j) * binom(m, k) * ipow(std::conj(abar), l - j) *
                ipow(abar, m - k) * c;
    }
  }
  if (l == m) result = Complex(result.real(), 0.0);
  return result;
}

}  // namespace cvtele
