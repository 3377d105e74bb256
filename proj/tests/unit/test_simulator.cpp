#include "doctest.h"

#include "core/channel.hpp"
#include "core/error.hpp"
#include "core/gaussian_state.hpp"
#include "core/simulator.hpp"
#include "support/test_support.hpp"

#include <cmath>
#include <cstring>
#include <numbers>
#include <random>
#include <sstream>

using namespace cvtele;
using cvtele::testing::Legendre2D;
using cvtele::testing::random_state;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

bool bitwise_equal(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

bool bitwise_equal(const EnsembleEstimate& a, const EnsembleEstimate& b) {
  return bitwise_equal(a.mean_hat, b.mean_hat) && bitwise_equal(a.cov_hat, b.cov_hat) &&
         bitwise_equal(a.mean_se, b.mean_se) && bitwise_equal(a.cov_se, b.cov_se) &&
         bitwise_equal(a.outcome_moments.mean, b.outcome_moments.mean) &&
         bitwise_equal(a.outcome_moments.cov, b.outcome_moments.cov) &&
         a.outcomes.size() == b.outcomes.size() &&
         (a.outcomes.empty() ||
          std::memcmp(a.outcomes.data(), b.outcomes.data(), a.outcomes.size() * sizeof(a.outcomes[0])) == 0);
}

}  // namespace

TEST_SUITE("mc_simulator") {

// Bob's conditional mean is b₀ + Gμ, so after the √2μ correction the ensemble
// has mean b₀ + (G + √2 I) m_μ and covariance Σ_B|μ + (G + √2 I) Σ_μ (G + √2 I)ᵀ.
TEST_CASE("unit gain reproduces the analytic channel exactly") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const GaussianState in = random_state(1, rng);
    const GaussianState res = random_state(2, rng);
    const OutcomeDistribution out = outcome_distribution(in, res);

    const GaussianState b0 = conditional_b_state(in, res, {0.0, 0.0});
    const GaussianState bq = conditional_b_state(in, res, {1.0, 0.0});
    const GaussianState bp = conditional_b_state(in, res, {0.0, 1.0});
    Eigen::Matrix2d gain;
    gain.col(0) = bq.mean() - b0.mean();
    gain.col(1) = bp.mean() - b0.mean();
    const Eigen::Matrix2d total_gain = gain + std::numbers::sqrt2 * Eigen::Matrix2d::Identity();

    const Eigen::Vector2d mean = b0.mean() + total_gain * out.mean;
    const Eigen::Matrix2d cov = b0.cov() + total_gain * out.cov * total_gain.transpose();

    const GaussianState expected = teleport(in, res);
    CHECK(max_abs(mean - expected.mean()) < 1e-12);
    CHECK(max_abs(cov - expected.cov()) < 1e-12);
  }
}

TEST_CASE("outcome distribution") {
  const OutcomeDistribution vac = outcome_distribution(coherent(0.0), vacuum(2));
  CHECK(vac.mean.isZero(0.0));
  CHECK(max_abs(vac.cov - 0.5 * Eigen::Matrix2d::Identity()) < 1e-15);

  std::mt19937_64 rng(2);
  const Complex alpha(0.9, -1.4);
  for (int trial = 0; trial < 20; ++trial) {
    const GaussianState res = random_state(2, rng, {.displaced = false});
    const OutcomeDistribution o = outcome_distribution(coherent(alpha), res);
    CHECK(o.mean(0) == doctest::Approx(alpha.real()).epsilon(1e-14));
    CHECK(o.mean(1) == doctest::Approx(alpha.imag()).epsilon(1e-14));
  }

  const OutcomeDistribution o = outcome_distribution(random_state(1, rng), random_state(2, rng));
  const Legendre2D rule(30);
  const double sq = 12.0 * std::sqrt(o.cov(0, 0));
  const double sp = 12.0 * std::sqrt(o.cov(1, 1));
  const double total = rule.integrate([&](double q, double p) { return o.density(q, p); },
                                      o.mean(0) - sq, o.mean(0) + sq, o.mean(1) - sp, o.mean(1) + sp);
  CHECK(std::abs(total - 1.0) < 1e-10);

  CHECK_THROWS_AS(outcome_distribution(vacuum(2), vacuum(2)), Error);
}

TEST_CASE("conditional state covariance does not depend on the outcome") {
  std::mt19937_64 rng(3);
  const GaussianState in = random_state(1, rng);
  const GaussianState res = random_state(2, rng);
  const GaussianState ref = conditional_b_state(in, res, {0.0, 0.0});
  std::normal_distribution<double> g(0.0, 2.0);
  for (int k = 0; k < 10; ++k) {
    const GaussianState b = conditional_b_state(in, res, {g(rng), g(rng)});
    CHECK(bitwise_equal(b.cov(), ref.cov()));
    CHECK(check_physical(b.cov()).physical);
  }
}

TEST_CASE("strong squeezing teleports every outcome faithfully") {
  std::mt19937_64 rng(4);
  const Complex shift[1] = {Complex(1.3, -0.7)};
  const GaussianState res = two_mode_squeezed_vacuum(5.0);
  std::normal_distribution<double> g(0.0, 1.0);
  for (const GaussianState& in : {coherent(shift[0]), displace(thermal(0.3), shift)}) {
    for (int k = 0; k < 10; ++k) {
      const Eigen::Vector2d mu(g(rng), g(rng));
      const GaussianState b = conditional_b_state(in, res, mu);
      const Eigen::Vector2d corrected = b.mean() + std::numbers::sqrt2 * mu;
      CHECK(max_abs(corrected - in.mean()) < 1e-3);
      CHECK(max_abs(b.cov() - in.cov()) < 1e-3);
    }
  }
}

TEST_CASE("product resource carries no information about the outcome") {
  std::mt19937_64 rng(5);
  const GaussianState in = random_state(1, rng);
  const GaussianState a = random_state(1, rng);
  const GaussianState b = random_state(1, rng);
  const GaussianState res = tensor(a, b);
  std::normal_distribution<double> g(0.0, 2.0);
  for (int k = 0; k < 10; ++k) {
    const GaussianState c = conditional_b_state(in, res, {g(rng), g(rng)});
    CHECK(max_abs(c.mean() - b.mean()) < 1e-12);
    CHECK(max_abs(c.cov() - b.cov()) < 1e-12);
  }
}

TEST_CASE("Monte Carlo ensemble agrees with the analytic output") {
  struct Case {
    GaussianState in;
    GaussianState res;
  };
  const Case cases[] = {
      {coherent({1.0, 1.0}), two_mode_squeezed_vacuum(1.0)},
      {coherent({-0.5, 0.2}), vacuum(2)},
      {thermal(0.4), two_mode_squeezed_vacuum(0.3)},
  };
  std::uint64_t seed = 100;
  for (const auto& c : cases) {
    ProtocolConfig cfg;
    cfg.n_samples = 100000;
    cfg.seed = seed++;
    const EnsembleEstimate est = run_protocol(c.in, c.res, cfg);
    const Comparison cmp = compare_to_analytic(est, teleport(c.in, c.res));
    CHECK(cmp.pass);
    CHECK(cmp.max_abs_z < 4.0);
    CHECK(est.rng_algorithm == std::string(kRngAlgorithm));
    CHECK(est.n_samples == 100000);
    CHECK(bitwise_equal(est.cov_hat, est.cov_hat.transpose().eval()));
    CHECK((est.mean_se.array() > 0.0).all());
    CHECK((est.cov_se.array() > 0.0).all());
  }
  // The gain example in numbers.
  ProtocolConfig cfg;
  cfg.seed = 7;
  const EnsembleEstimate est = run_protocol(coherent({1.0, 1.0}), two_mode_squeezed_vacuum(1.0), cfg);
  for (int a = 0; a < 2; ++a) {
    CHECK(std::abs(est.mean_hat(a) - std::numbers::sqrt2) < 4 * est.mean_se(a));
    CHECK(std::abs(est.cov_hat(a, a) - (0.5 + std::exp(-2.0))) < 4 * est.cov_se(a, a));
  }
  // No entanglement: one unit of vacuum noise per quadrature.
  const GaussianState in = thermal(0.2);
  const EnsembleEstimate vac = run_protocol(in, vacuum(2), cfg);
  for (int a = 0; a < 2; ++a) {
    CHECK(std::abs(vac.cov_hat(a, a) - (in.cov()(a, a) + 1.0)) < 4 * vac.cov_se(a, a));
  }
}

TEST_CASE("determinism") {
  const GaussianState in = coherent({0.3, 0.4});
  const GaussianState res = two_mode_squeezed_vacuum(0.6);
  ProtocolConfig cfg;
  cfg.n_samples = 50000;
  cfg.seed = 42;
  cfg.record_outcomes = true;
  cfg.threads = 1;
  const EnsembleEstimate a = run_protocol(in, res, cfg);
  const EnsembleEstimate b = run_protocol(in, res, cfg);
  CHECK(bitwise_equal(a, b));
  cfg.threads = 4;
  CHECK(bitwise_equal(a, run_protocol(in, res, cfg)));
  cfg.threads = 0;
  CHECK(bitwise_equal(a, run_protocol(in, res, cfg)));
  cfg.seed = 43;
  CHECK_FALSE(bitwise_equal(a, run_protocol(in, res, cfg)));
  CHECK(a.outcomes.size() == 50000);
}

TEST_CASE("standard errors shrink as n^{-1/2}") {
  const GaussianState in = coherent({0.2, -0.1});
  const GaussianState res = two_mode_squeezed_vacuum(0.5);
  ProtocolConfig small;
  small.n_samples = 10000;
  small.seed = 11;
  ProtocolConfig large = small;
  large.n_samples = 40000;
  large.seed = 12;
  const EnsembleEstimate s = run_protocol(in, res, small);
  const EnsembleEstimate l = run_protocol(in, res, large);
  for (int a = 0; a < 2; ++a) {
    CHECK(s.mean_se(a) / l.mean_se(a) == doctest::Approx(2.0).epsilon(0.2));
    for (int b = 0; b < 2; ++b) {
      CHECK(s.cov_se(a, b) / l.cov_se(a, b) == doctest::Approx(2.0).epsilon(0.2));
    }
  }
}

TEST_CASE("recorded outcomes follow the outcome distribution") {
  std::mt19937_64 rng(6);
  const GaussianState in = random_state(1, rng);
  const GaussianState res = random_state(2, rng);
  ProtocolConfig cfg;
  cfg.seed = 99;
  cfg.record_outcomes = true;
  const EnsembleEstimate est = run_protocol(in, res, cfg);
  const OutcomeDistribution o = outcome_distribution(in, res);
  const SampleMoments& m = est.outcome_moments;
  for (int a = 0; a < 2; ++a) {
    CHECK(std::abs(m.mean(a) - o.mean(a)) < 4 * m.mean_se(a));
    for (int b = 0; b < 2; ++b) CHECK(std::abs(m.cov(a, b) - o.cov(a, b)) < 4 * m.cov_se(a, b));
  }
  const SampleMoments again = sample_moments(est.outcomes);
  CHECK(bitwise_equal(again.mean, m.mean));
  CHECK(bitwise_equal(again.cov, m.cov));

  ProtocolConfig quiet = cfg;
  quiet.record_outcomes = false;
  CHECK(run_protocol(in, res, quiet).outcomes.empty());
}

TEST_CASE("sample moments and the jackknife") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  std::vector<Eigen::Vector2d> xs;
  for (int i = 0; i < 50; ++i) xs.emplace_back(g(rng), 0.5 * g(rng) + 0.3);
  const SampleMoments m = sample_moments(xs);

  // Brute-force delete-one jackknife on the unbiased covariance.
  const double n = static_cast<double>(xs.size());
  std::vector<Eigen::Matrix2d> loo;
  for (std::size_t skip = 0; skip < xs.size(); ++skip) {
    std::vector<Eigen::Vector2d> rest;
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (i != skip) rest.push_back(xs[i]);
    Eigen::Vector2d mu = Eigen::Vector2d::Zero();
    for (const auto& x : rest) mu += x;
    mu /= static_cast<double>(rest.size());
    Eigen::Matrix2d c = Eigen::Matrix2d::Zero();
    for (const auto& x : rest) c += (x - mu) * (x - mu).transpose();
    loo.push_back(c / (static_cast<double>(rest.size()) - 1.0));
  }
  Eigen::Matrix2d avg = Eigen::Matrix2d::Zero();
  for (const auto& c : loo) avg += c;
  avg /= n;
  Eigen::Matrix2d var = Eigen::Matrix2d::Zero();
  for (const auto& c : loo) var += (c - avg).cwiseProduct(c - avg);
  const Eigen::Matrix2d se = ((n - 1.0) / n * var).cwiseSqrt();
  CHECK(max_abs(se - m.cov_se) < 1e-12);

  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  for (const auto& x : xs) mean += x;
  mean /= n;
  CHECK(max_abs(mean - m.mean) < 1e-15);
  CHECK(m.mean_se(0) == doctest::Approx(std::sqrt(m.cov(0, 0) / n)));

  const SampleMoments one = sample_moments({Eigen::Vector2d(1.0, 2.0)});
  CHECK(std::isinf(one.mean_se(0)));
  CHECK(std::isinf(one.cov_se(0, 0)));
  const SampleMoments two = sample_moments({Eigen::Vector2d(1.0, 2.0), Eigen::Vector2d(3.0, 2.0)});
  CHECK(std::isfinite(two.mean_se(0)));
  CHECK(std::isinf(two.cov_se(0, 0)));
  CHECK_THROWS_AS(sample_moments({}), Error);
}

TEST_CASE("comparison sensitivity") {
  const GaussianState in = coherent({0.5, 0.5});
  const GaussianState res = two_mode_squeezed_vacuum(0.7);
  ProtocolConfig cfg;
  cfg.seed = 5;
  const EnsembleEstimate est = run_protocol(in, res, cfg);
  const GaussianState analytic = teleport(in, res);
  CHECK(compare_to_analytic(est, analytic).pass);

  Vector shifted = analytic.mean();
  shifted(0) += 10.0 * est.mean_se(0);
  const Comparison off = compare_to_analytic(est, GaussianState::from_moments(shifted, analytic.cov()));
  CHECK_FALSE(off.pass);
  CHECK(off.max_abs_z > 4.0);

  Matrix wider = analytic.cov();
  wider(1, 1) += 10.0 * est.cov_se(1, 1);
  CHECK_FALSE(compare_to_analytic(est, GaussianState::from_moments(analytic.mean(), wider)).pass);

  EnsembleEstimate exact;
  exact.mean_hat = analytic.mean();
  exact.cov_hat = analytic.cov();
  exact.mean_se.setConstant(1.0);
  exact.cov_se.setConstant(1.0);
  const Comparison self = compare_to_analytic(exact, analytic);
  CHECK(self.max_abs_z == 0.0);
  CHECK(self.pass);

  CHECK(compare_to_analytic(est, analytic, 1e-9).pass == false);
  CHECK_THROWS_AS(compare_to_analytic(est, vacuum(2)), Error);
}

TEST_CASE("outcome CSV") {
  ProtocolConfig cfg;
  cfg.n_samples = 3;
  cfg.seed = 1;
  cfg.record_outcomes = true;
  const EnsembleEstimate est = run_protocol(coherent(0.0), vacuum(2), cfg);
  std::ostringstream os;
  write_outcomes_csv(os, est);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "sample,q,p");
  int rows = 0;
  while (std::getline(is, line)) {
    double q = 0, p = 0;
    int idx = -1;
    CHECK(std::sscanf(line.c_str(), "%d,%lf,%lf", &idx, &q, &p) == 3);
    CHECK(idx == rows);
    CHECK(q == est.outcomes[rows](0));
    CHECK(p == est.outcomes[rows](1));
    ++rows;
  }
  CHECK(rows == 3);
}

TEST_CASE("configuration validation") {
  ProtocolConfig cfg;
  cfg.n_samples = 0;
  CHECK_THROWS_AS(run_protocol(coherent(0.0), vacuum(2), cfg), Error);
  cfg.n_samples = 10;
  CHECK_THROWS_AS(run_protocol(vacuum(2), vacuum(2), cfg), Error);
}

}  // TEST_SUITE
