#include "core/epr.hpp"

#include "core/error.hpp"

#include <cmath>
#include <string>

namespace cvtele {

namespace {

void require_two_modes(const GaussianState& state, const char* what) {
  if (state.n_modes() != 2) {
    throw Error(ErrorCode::dimension_mismatch,
                std::string(what) + ": expected a two-mode state, got " +
                    std::to_string(state.n_modes()) + " modes");
  }
}

}  // namespace

EprMoments epr_moments(const GaussianState& state) {
  require_two_modes(state, "epr_moments");
  const Matrix& v = state.cov();
  const Vector& m = state.mean();
  // index: q1=0, p1=1, q2=2, p2=3
  EprMoments e;
  e.mean_Q = m(0) - m(2);
  e.mean_P = m(1) + m(3);
  e.var_QQ = v(0, 0) + v(2, 2) - 2.0 * v(0, 2) + e.mean_Q * e.mean_Q;
  e.var_PP = v(1, 1) + v(3, 3) + 2.0 * v(1, 3) + e.mean_P * e.mean_P;
  e.cov_QP = v(0, 1) + v(0, 3) - v(2, 1) - v(2, 3) + e.mean_Q * e.mean_P;
  e.delta_mean = 0.5 * (e.var_QQ + e.var_PP);
  return e;
}

EprUncertainty epr_uncertainty(const GaussianState& state) {
  const EprMoments e = epr_moments(state);
  return {e.delta_mean, e.delta_mean < 1.0};
}

double expectation_exp_delta(const GaussianState& state, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw Error(ErrorCode::invalid_argument, "expectation_exp_delta: t must be >= 0");
  }
  const EprMoments e = epr_moments(state);
  Eigen::Matrix2d sigma;
  sigma << e.centered_QQ(), e.centered_QP(), e.centered_QP(), e.centered_PP();
  const Eigen::Vector2d mu(e.mean_Q, e.mean_P);
  // E[exp(−t|X|²/2)] for X ~ N(mu, sigma).
  const Eigen::Matrix2d a = Eigen::Matrix2d::Identity() + t * sigma;
  const double det = a.determinant();
  if (!(det > 0.0) || !(a(0, 0) > 0.0)) {
    throw Error(ErrorCode::unphysical,
                "exp(-t Delta) integral diverges: EPR covariance is not positive semidefinite",
                det);
  }
  const double exponent = -0.5 * t * mu.dot(a.inverse() * mu);
  return std::exp(exponent) / std::sqrt(det);
}

double exp_neg_delta(const GaussianState& state) { return expectation_exp_delta(state, 1.0); }

}  // namespace cvtele
