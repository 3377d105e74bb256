#include "core/simulator.hpp"

#include "core/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <thread>

namespace cvtele {

namespace {

constexpr std::int64_t kShardSize = 16384;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Indices in the post-beamsplitter three-mode vector (in, A, B).
constexpr int kMeasuredQ = 0;  // q of mode 0: (q_in − q_A)/√2
constexpr int kMeasuredP = 3;  // p of mode 1: (p_in + p_A)/√2
constexpr int kBobQ = 4;

struct ConditioningModel {
  Eigen::Vector2d outcome_mean;
  Eigen::Matrix2d outcome_cov;
  Eigen::Vector2d bob_mean;
  Eigen::Matrix2d gain;      // Σ_BM Σ_MM⁻¹
  Eigen::Matrix2d bob_cov;   // Schur complement, outcome independent

  Eigen::Vector2d conditional_mean(const Eigen::Vector2d& x) const {
    return bob_mean + gain * (x - outcome_mean);
  }
};

ConditioningModel build_model(const GaussianState& input, const GaussianState& resource) {
  if (input.n_modes() != 1 || resource.n_modes() != 2) {
    throw Error(ErrorCode::dimension_mismatch,
                "protocol: expected a one-mode input and a two-mode resource");
  }
  const GaussianState joint =
      apply_symplectic(tensor(input, resource), beamsplitter_50_50(0, 1, 3));
  const Matrix& v = joint.cov();
  const Vector& m = joint.mean();
  const int idx[2] = {kMeasuredQ, kMeasuredP};

  ConditioningModel model;
  Eigen::Matrix2d cross;  // Σ_BM
  for (int a = 0; a < 2; ++a) {
    model.outcome_mean(a) = m(idx[a]);
    model.bob_mean(a) = m(kBobQ + a);
    for (int b = 0; b < 2; ++b) {
      model.outcome_cov(a, b) = v(idx[a], idx[b]);
      cross(a, b) = v(kBobQ + a, idx[b]);
      model.bob_cov(a, b) = v(kBobQ + a, kBobQ + b);
    }
  }
  const double det = model.outcome_cov.determinant();
  if (!(det > 1e-300)) {
    throw Error(ErrorCode::numerical, "protocol: singular covariance of the measured quadratures",
                det);
  }
  model.gain = cross * model.outcome_cov.inverse();
  model.bob_cov -= model.gain * cross.transpose();
  model.bob_cov = 0.5 * (model.bob_cov + model.bob_cov.transpose()).eval();
  return model;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Two standard normals per call from one Box–Muller pair.
class NormalPairSource {
 public:
  NormalPairSource(std::uint64_t seed, std::uint64_t stream)
      : engine_(splitmix64(seed ^ splitmix64(stream + 1))) {}

  Eigen::Vector2d next() {
    const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace

double OutcomeDistribution::density(double q, double p) const {
  const Eigen::Vector2d d = Eigen::Vector2d(q, p) - mean;
  return std::exp(-0.5 * d.dot(cov.inverse() * d)) /
         (2.0 * std::numbers::pi * std::sqrt(cov.determinant()));
}

OutcomeDistribution outcome_distribution(const GaussianState& input, const GaussianState& resource) {
  const ConditioningModel model = build_model(input, resource);
  return {model.outcome_mean, model.outcome_cov};
}

GaussianState conditional_b_state(const GaussianState& input, const GaussianState& resource,
                                  const Eigen::Vector2d& outcome) {
  const ConditioningModel model = build_model(input, resource);
  return GaussianState(detail::Unchecked{}, model.conditional_mean(outcome), model.bob_cov);
}

SampleMoments sample_moments(const std::vector<Eigen::Vector2d>& samples) {
  SampleMoments out;
  const auto n = static_cast<std::int64_t>(samples.size());
  if (n == 0) throw Error(ErrorCode::invalid_argument, "sample_moments: no samples");
  const double dn = static_cast<double>(n);

  for (const auto& s : samples) out.mean += s;
  out.mean /= dn;
  Eigen::Matrix2d scatter = Eigen::Matrix2d::Zero();
  for (const auto& s : samples) {
    const Eigen::Vector2d y = s - out.mean;
    scatter += y * y.transpose();
  }
  if (n < 2) {
    out.mean_se.setConstant(kInf);
    out.cov_se.setConstant(kInf);
    return out;
  }
  out.cov = scatter / (dn - 1.0);
  out.mean_se = (out.cov.diagonal() / dn).cwiseSqrt();
  if (n < 3) {
    out.cov_se.setConstant(kInf);
    return out;
  }
  // Leave-one-out covariance: C_(i) = (S − y_i y_iᵀ n/(n−1))/(n−2), so the
  // jackknife spread is that of y_i y_iᵀ scaled by n/((n−1)(n−2)).
  const Eigen::Matrix2d avg = scatter / dn;
  Eigen::Matrix2d spread = Eigen::Matrix2d::Zero();
  for (const auto& s : samples) {
    const Eigen::Vector2d y = s - out.mean;
    const Eigen::Matrix2d dev = y * y.transpose() - avg;
    spread += dev.cwiseProduct(dev);
  }
  const double scale = dn / ((dn - 1.0) * (dn - 2.0));
  out.cov_se = ((dn - 1.0) / dn * scale * scale * spread).cwiseSqrt();
  return out;
}

EnsembleEstimate run_protocol(const GaussianState& input, const GaussianState& resource,
                              const ProtocolConfig& config) {
  if (config.n_samples < 1) {
    throw Error(ErrorCode::invalid_argument, "run_protocol: n_samples must be >= 1");
  }
  const ConditioningModel model = build_model(input, resource);
  const Eigen::Matrix2d chol = model.outcome_cov.llt().matrixL();

  const std::int64_t n = config.n_samples;
  std::vector<Eigen::Vector2d> outcomes(static_cast<std::size_t>(n));
  std::vector<Eigen::Vector2d> corrected(static_cast<std::size_t>(n));
  const std::int64_t n_shards = (n + kShardSize - 1) / kShardSize;

  auto run_shard = [&](std::int64_t shard) {
    NormalPairSource source(config.seed, static_cast<std::uint64_t>(shard));
    const std::int64_t begin = shard * kShardSize;
    const std::int64_t end = std::min(n, begin + kShardSize);
    for (std::int64_t i = begin; i < end; ++i) {
      const Eigen::Vector2d mu = model.outcome_mean + chol * source.next();
      outcomes[i] = mu;
      // Bob displaces by μ = q + ip: (q, p) → (q, p) + √2 (q_μ, p_μ).
      corrected[i] = model.conditional_mean(mu) + std::numbers::sqrt2 * mu;
    }
  };

  unsigned hw = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                   : std::max(1u, std::thread::hardware_concurrency());
  const auto workers = static_cast<std::int64_t>(std::min<std::int64_t>(hw, n_shards));
  if (workers <= 1) {
    for (std::int64_t s = 0; s < n_shards; ++s) run_shard(s);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (std::int64_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::int64_t s = w; s < n_shards; s += workers) run_shard(s);
      });
    }
    for (auto& t : pool) t.join();
  }

  EnsembleEstimate est;
  est.n_samples = n;
  est.seed = config.seed;
  // Law of total covariance: E[cov | μ] (exact, outcome independent) plus the
  // spread of the corrected conditional means.
  const SampleMoments means = sample_moments(corrected);
  est.mean_hat = means.mean;
  est.mean_se = means.mean_se;
  est.cov_hat = model.bob_cov + means.cov;
  est.cov_se = means.cov_se;
  est.outcome_moments = sample_moments(outcomes);
  if (config.record_outcomes) est.outcomes = std::move(outcomes);
  return est;
}

Comparison compare_to_analytic(const EnsembleEstimate& estimate, const GaussianState& analytic,
                               double threshold) {
  if (analytic.n_modes() != 1) {
    throw Error(ErrorCode::dimension_mismatch, "compare_to_analytic: one-mode state required");
  }
  auto z = [](double est, double ref, double se) {
    const double diff = est - ref;
    if (se > 0.0) return diff / se;
    return diff == 0.0 ? 0.0 : std::copysign(kInf, diff);
  };
  Comparison c;
  c.threshold = threshold;
  for (int a = 0; a < 2; ++a) {
    c.z_mean(a) = z(estimate.mean_hat(a), analytic.mean()(a), estimate.mean_se(a));
    for (int b = 0; b < 2; ++b) {
      c.z_cov(a, b) = z(estimate.cov_hat(a, b), analytic.cov()(a, b), estimate.cov_se(a, b));
    }
  }
  c.max_abs_z = std::max(c.z_mean.cwiseAbs().maxCoeff(), c.z_cov.cwiseAbs().maxCoeff());
  c.pass = c.max_abs_z < threshold;
  return c;
}

void write_outcomes_csv(std::ostream& os, const EnsembleEstimate& estimate) {
  os << "sample,q,p\n";
  char buf[96];
  for (std::size_t i = 0; i < estimate.outcomes.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i, estimate.outcomes[i](0),
                  estimate.outcomes[i](1));
    os << buf;
  }
}

}  // namespace cvtele
