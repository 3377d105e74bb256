#include "doctest.h"

#include "core/channel.hpp"
#include "core/distorting_field.hpp"
#include "core/epr.hpp"
#include "core/error.hpp"
#include "core/gaussian_state.hpp"
#include "support/test_support.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace cvtele;
using cvtele::testing::Legendre2D;
using cvtele::testing::random_complex;
using cvtele::testing::random_resource;
using cvtele::testing::random_state;

namespace {

Complex chi1(const GaussianState& s, Complex l) {
  const Complex a[1] = {l};
  return characteristic_function(s, a);
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_SUITE("teleport_channel") {

TEST_CASE("coherent input through a squeezed vacuum") {
  for (double r : {0.0, 0.5, 1.0, 2.0}) {
    const Complex alpha(1.0, 0.5);
    const GaussianState out = teleport(coherent(alpha), two_mode_squeezed_vacuum(r));
    CHECK(max_abs(out.mean() - coherent(alpha).mean()) < 1e-15);
    CHECK(max_abs(out.cov() - (0.5 + std::exp(-2 * r)) * Matrix::Identity(2, 2)) < 1e-12);
  }
}

TEST_CASE("nearly ideal resource leaves the input unchanged") {
  std::mt19937_64 rng(3);
  const GaussianState in = random_state(1, rng);
  const GaussianState out = teleport(in, two_mode_squeezed_vacuum(8.0));
  CHECK(max_abs(out.cov() - in.cov()) < 1e-6);
  CHECK(max_abs(out.mean() - in.mean()) == 0.0);
}

TEST_CASE("output characteristic function factorizes") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const GaussianState in = random_state(1, rng);
    const GaussianState res = random_state(2, rng);
    const Complex l = random_complex(rng, 1.5);
    const Complex pair[2] = {std::conj(l), l};
    const Complex expected = chi1(in, l) * characteristic_function(res, pair);
    CHECK(std::abs(chi1(teleport(in, res), l) - expected) < 1e-10);
  }
}

TEST_CASE("displacement average over the P function") {
  const GaussianState in = coherent({0.3, -0.8});
  const GaussianState svs = two_mode_squeezed_vacuum(0.5);
  const GaussianState avg = channel_as_displacement_average(in, svs);
  const GaussianState direct = teleport(in, svs);
  CHECK(max_abs(avg.mean() - direct.mean()) < 1e-8);
  CHECK(max_abs(avg.cov() - direct.cov()) < 1e-8);

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const GaussianState input = random_state(1, rng);
    const GaussianState res = random_state(2, rng);
    const GaussianState a = channel_as_displacement_average(input, res);
    const GaussianState b = teleport(input, res);
    CHECK(max_abs(a.mean() - b.mean()) < 1e-8);
    CHECK(max_abs(a.cov() - b.cov()) < 1e-8);
    // First moment: input mean plus the P-distribution mean.
    const DistortingFieldState d = distorting_field(res);
    CHECK(max_abs(a.mean() - (input.mean() + d.state.mean())) < 1e-8);
  }

  CHECK_THROWS_AS(channel_as_displacement_average(in, svs, 0), Error);
}

TEST_CASE("P function of the distorting field integrates to one") {
  std::mt19937_64 rng(13);
  const Legendre2D rule(40);
  for (int trial = 0; trial < 5; ++trial) {
    const DistortingFieldState d = distorting_field(random_resource(rng));
    const Eigen::Vector2d c = d.state.mode_mean(0) / std::numbers::sqrt2;
    const double half = 12.0 * std::sqrt(0.5 * d.noise_matrix().trace());
    const double total = rule.integrate([&](double x, double y) { return p_function(d, {x, y}); },
                                        c(0) - half, c(0) + half, c(1) - half, c(1) + half);
    CHECK(std::abs(total - 1.0) < 1e-8);
  }
}

TEST_CASE("added noise") {
  for (double r : {0.0, 0.4, 1.7}) {
    CHECK(std::abs(added_noise(two_mode_squeezed_vacuum(r)) - std::exp(-2 * r)) < 1e-12);
  }
  CHECK(added_noise(vacuum(2)) == doctest::Approx(1.0).epsilon(1e-15));
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const GaussianState res = random_state(2, rng, {.displaced = false});
    const Complex photons = correlation_function(distorting_field(res), 1, 1);
    CHECK(std::abs(added_noise(res) - photons.real()) < 1e-12);
    CHECK(added_noise(res) == epr_uncertainty(res).delta_mean);
    CHECK(added_noise(res) >= 0.0);
  }
}

TEST_CASE("coherent-state fidelity: three evaluations and alpha independence") {
  for (double r : {0.0, 0.3, 1.0}) {
    CHECK(std::abs(fidelity_coherent(two_mode_squeezed_vacuum(r)) - 1.0 / (1.0 + std::exp(-2 * r))) <
          1e-14);
  }
  CHECK(fidelity_coherent(vacuum(2)) == doctest::Approx(0.5).epsilon(1e-15));

  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 100; ++trial) {
    const GaussianState res = random_state(2, rng, {.displaced = false});
    const double f = fidelity_coherent(res);
    const DistortingFieldState d = distorting_field(res);
    CHECK(std::abs(f - std::numbers::pi * q_function(d, 0.0)) < 1e-10);
    CHECK(std::abs(f - generating_function(d, 0.0)) < 1e-10);
    for (Complex alpha : {Complex(0, 0), Complex(1, 0), Complex(2, -3)}) {
      const double overlap = state_overlap(coherent(alpha), teleport(coherent(alpha), res));
      CHECK(std::abs(f - overlap) < 1e-10);
    }
  }
}

TEST_CASE("state overlap") {
  const Complex a(0.7, -0.2);
  const Complex b(-0.4, 1.1);
  CHECK(state_overlap(coherent(a), coherent(a)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(state_overlap(coherent(a), coherent(b)) ==
        doctest::Approx(std::exp(-std::norm(a - b))).epsilon(1e-14));
  for (double n : {0.0, 0.5, 3.0}) {
    CHECK(state_overlap(vacuum(1), thermal(n)) == doctest::Approx(1.0 / (1.0 + n)).epsilon(1e-14));
  }
  // Purity of a thermal state: Tr ρ² = 1/(2n̄ + 1).
  CHECK(state_overlap(thermal(0.8), thermal(0.8)) == doctest::Approx(1.0 / 2.6).epsilon(1e-14));

  // Against (1/π)∫χ_a(λ)χ_b(−λ) d²λ.
  std::mt19937_64 rng(23);
  const Legendre2D rule(40);
  for (int trial = 0; trial < 5; ++trial) {
    const GaussianState x = random_state(1, rng);
    const GaussianState y = random_state(1, rng);
    const double integral =
        rule.integrate([&](double u, double v) { return (chi1(x, {u, v}) * chi1(y, {-u, -v})).real(); },
                       -7.0, 7.0, -7.0, 7.0) /
        std::numbers::pi;
    CHECK(std::abs(integral - state_overlap(x, y)) < 1e-9);
  }
  CHECK(state_overlap(vacuum(2), two_mode_squeezed_vacuum(0.0)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(state_overlap(vacuum(1), vacuum(2)), Error);
}

TEST_CASE("channel output is physical and strictly more mixed") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 1000; ++trial) {
    const GaussianState in = random_state(1, rng, {.max_squeeze = 1.5});
    const GaussianState res = random_state(2, rng, {.max_squeeze = 1.5});
    const GaussianState out = teleport(in, res);
    CHECK(check_physical(out.cov()).physical);
    CHECK(out.cov().determinant() > in.cov().determinant());
  }
}

TEST_CASE("monotonic in the squeezing parameter") {
  double last_f = 0.0;
  double last_n = 2.0;
  for (int i = 0; i <= 40; ++i) {
    const GaussianState s = two_mode_squeezed_vacuum(0.05 * i);
    const double f = fidelity_coherent(s);
    const double n = added_noise(s);
    CHECK(f > last_f);
    CHECK(n < last_n);
    last_f = f;
    last_n = n;
  }
}

TEST_CASE("channel report") {
  const ChannelReport rep = channel_report(coherent({1.0, 0.5}), two_mode_squeezed_vacuum(0.8));
  CHECK(rep.added_noise == doctest::Approx(std::exp(-1.6)).epsilon(1e-12));
  CHECK(rep.fidelity_coherent == doctest::Approx(1.0 / (1.0 + std::exp(-1.6))).epsilon(1e-12));
  CHECK(rep.inseparable);
  CHECK(max_abs(rep.output.cov() - (0.5 + std::exp(-1.6)) * Matrix::Identity(2, 2)) < 1e-12);
  CHECK_FALSE(channel_report(vacuum(1), vacuum(2)).inseparable);
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(teleport(vacuum(2), vacuum(2)), Error);
  CHECK_THROWS_AS(teleport(vacuum(1), vacuum(1)), Error);
  const GaussianState bad(detail::Unchecked{}, Vector::Zero(2), 0.1 * Matrix::Identity(2, 2));
  try {
    teleport(bad, vacuum(2));
    FAIL("expected an unphysical-input error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::unphysical);
  }
}

}  // TEST_SUITE
