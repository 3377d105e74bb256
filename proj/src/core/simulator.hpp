#pragma once

// Stochastic execution of the teleportation protocol: mix the input with mode
// A on a balanced beamsplitter, homodyne (q of one output, p of the other),
// condition Bob's mode on the outcome, displace by μ = q + ip at unit gain and
// average over the ensemble.

#include "core/gaussian_state.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace cvtele {

inline constexpr const char* kRngAlgorithm = "mt19937_64/splitmix64-shard/box-muller";

struct ProtocolConfig {
  std::int64_t n_samples = 100000;
  std::uint64_t seed = 0;
  bool record_outcomes = false;
  int threads = 0;  // 0: hardware concurrency. Results do not depend on it.
};

/// Exact law of the measured pair (q_A, p_A).
struct OutcomeDistribution {
  Eigen::Vector2d mean;
  Eigen::Matrix2d cov;

  double density(double q, double p) const;
};

OutcomeDistribution outcome_distribution(const GaussianState& input, const GaussianState& resource);

/// Bob's mode conditioned on the homodyne outcome (q, p), before the
/// corrective displacement. Schur complement of the joint Gaussian.
GaussianState conditional_b_state(const GaussianState& input, const GaussianState& resource,
                                  const Eigen::Vector2d& outcome);

struct SampleMoments {
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();     // unbiased
  Eigen::Vector2d mean_se = Eigen::Vector2d::Zero();
  Eigen::Matrix2d cov_se = Eigen::Matrix2d::Zero();  // delete-one jackknife
};

/// Sample mean and covariance with jackknife standard errors. Standard errors
/// are +inf where fewer samples than required are available.
SampleMoments sample_moments(const std::vector<Eigen::Vector2d>& samples);

struct EnsembleEstimate {
  std::int64_t n_samples = 0;
  std::uint64_t seed = 0;
  std::string rng_algorithm = kRngAlgorithm;

  Eigen::Vector2d mean_hat = Eigen::Vector2d::Zero();
  Eigen::Matrix2d cov_hat = Eigen::Matrix2d::Zero();
  Eigen::Vector2d mean_se = Eigen::Vector2d::Zero();
  Eigen::Matrix2d cov_se = Eigen::Matrix2d::Zero();

  SampleMoments outcome_moments;
  std::vector<Eigen::Vector2d> outcomes;  // filled when record_outcomes is set
};

EnsembleEstimate run_protocol(const GaussianState& input, const GaussianState& resource,
                              const ProtocolConfig& config);

struct Comparison {
  Eigen::Vector2d z_mean = Eigen::Vector2d::Zero();
  Eigen::Matrix2d z_cov = Eigen::Matrix2d::Zero();
  double max_abs_z = 0.0;
  double threshold = 4.0;
  bool pass = false;
};

/// Per-entry z-scores (estimate − analytic)/SE against a one-mode state.
Comparison compare_to_analytic(const EnsembleEstimate& estimate, const GaussianState& analytic,
                               double threshold = 4.0);

/// CSV with header "sample,q,p", one row per recorded outcome.
void write_outcomes_csv(std::ostream& os, const EnsembleEstimate& estimate);

}  // namespace cvtele
