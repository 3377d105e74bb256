#include "core/channel.hpp"

#include "core/epr.hpp"
#include "core/error.hpp"
#include "core/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace cvtele {

namespace {

void require_channel_inputs(const GaussianState& input, const GaussianState& resource,
                            const char* what) {
  if (input.n_modes() != 1) {
    throw Error(ErrorCode::dimension_mismatch,
                std::string(what) + ": input must be a one-mode state");
  }
  if (resource.n_modes() != 2) {
    throw Error(ErrorCode::dimension_mismatch,
                std::string(what) + ": resource must be a two-mode state");
  }
  for (const GaussianState* s : {&input, &resource}) {
    const PhysicalityCheck check = check_physical(s->cov());
    if (!check.physical) {
      throw Error(ErrorCode::unphysical, std::string(what) + ": unphysical state",
                  check.min_eigenvalue);
    }
  }
}

}  // namespace

GaussianState teleport(const GaussianState& input, const GaussianState& resource) {
  require_channel_inputs(input, resource, "teleport");
  const DistortingFieldState d = distorting_field(resource);
  Matrix cov = input.cov() + d.noise_matrix();
  return GaussianState(detail::Unchecked{}, input.mean() + d.state.mean(), std::move(cov));
}

GaussianState channel_as_displacement_average(const GaussianState& input,
                                              const GaussianState& resource,
                                              int n_quadrature_nodes) {
  require_channel_inputs(input, resource, "channel_as_displacement_average");
  const DistortingFieldState d = distorting_field(resource);
  const Eigen::Matrix2d noise = d.noise_matrix();
  const double margin = classicality_margin(d);
  if (margin <= 1e-12 * std::max(1.0, noise.trace())) {
    throw Error(ErrorCode::degenerate_distribution,
                "channel_as_displacement_average: P function is a delta for this resource; "
                "use teleport()",
                margin);
  }
  // P(β) d²β = exp(−|t|²)/π d²t with (Re β, Im β) = mean_D/√2 + C t, C Cᵀ = N.
  const GaussHermiteRule& rule = gauss_hermite(n_quadrature_nodes);
  const Eigen::Matrix2d c = noise.llt().matrixL();
  const Eigen::Vector2d center = d.state.mode_mean(0) / std::numbers::sqrt2;

  Eigen::Vector2d shift_mean = Eigen::Vector2d::Zero();
  Eigen::Matrix2d shift_second = Eigen::Matrix2d::Zero();
  for (int a = 0; a < n_quadrature_nodes; ++a) {
    for (int b = 0; b < n_quadrature_nodes; ++b) {
      const double w = rule.weights[a] * rule.weights[b] / std::numbers::pi;
      const Eigen::Vector2d beta = center + c * Eigen::Vector2d(rule.nodes[a], rule.nodes[b]);
      const Eigen::Vector2d shift = std::numbers::sqrt2 * beta;
      shift_mean += w * shift;
      shift_second += w * shift * shift.transpose();
    }
  }
  Matrix cov = input.cov() + shift_second - shift_mean * shift_mean.transpose();
  cov = 0.5 * (cov + cov.transpose()).eval();
  return GaussianState(detail::Unchecked{}, input.mean() + shift_mean, std::move(cov));
}

double added_noise(const GaussianState& resource) {
  return epr_uncertainty(resource).delta_mean;
}

double fidelity_coherent(const GaussianState& resource) { return exp_neg_delta(resource); }

double state_overlap(const GaussianState& a, const GaussianState& b) {
  if (a.n_modes() != b.n_modes()) {
    throw Error(ErrorCode::dimension_mismatch, "state_overlap: mode counts differ");
  }
  for (const GaussianState* s : {&a, &b}) {
    const PhysicalityCheck check = check_physical(s->cov());
    if (!check.physical) {
      throw Error(ErrorCode::unphysical, "state_overlap: unphysical state", check.min_eigenvalue);
    }
  }
  // (1/π^n)∫ χ_a(λ) χ_b(−λ) d²ⁿλ in closed form.
  const Matrix sum = a.cov() + b.cov();
  const Vector delta = a.mean() - b.mean();
  const Eigen::LLT<Matrix> llt(sum);
  const double exponent = -0.5 * delta.dot(llt.solve(delta));
  const double det = sum.determinant();
  return std::exp(exponent) / std::sqrt(det);
}

ChannelReport channel_report(const GaussianState& input, const GaussianState& resource) {
  GaussianState out = teleport(input, resource);
  const EprUncertainty u = epr_uncertainty(resource);
  return {std::move(out), u.delta_mean, fidelity_coherent(resource), u.inseparable};
}

}  // namespace cvtele
