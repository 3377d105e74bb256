#pragma once

// Shared helpers for the test suites: random physical Gaussian states and a
// composite Gauss–Legendre integrator used as an oracle independent of the
// library's Gauss–Hermite machinery.

#include "core/gaussian_state.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

namespace cvtele::testing {

inline Eigen::MatrixXcd random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = {g(rng), g(rng)};
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const std::complex<double> d = r(j, j);
    q.col(j) *= d / std::abs(d);
  }
  return q;
}

/// Passive (orthogonal) symplectic from a unitary, interleaved ordering.
inline Matrix passive_symplectic(const Eigen::MatrixXcd& u) {
  const int n = static_cast<int>(u.rows());
  Matrix s(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      s(2 * i, 2 * j) = u(i, j).real();
      s(2 * i, 2 * j + 1) = -u(i, j).imag();
      s(2 * i + 1, 2 * j) = u(i, j).imag();
      s(2 * i + 1, 2 * j + 1) = u(i, j).real();
    }
  }
  return s;
}

/// Bloch–Messiah form O1 · diag(e^{-r}, e^{r}, ...) · O2.
inline SymplecticMatrix random_symplectic(int n, std::mt19937_64& rng, double max_squeeze = 1.0) {
  std::uniform_real_distribution<double> ur(0.0, max_squeeze);
  Matrix z = Matrix::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    const double r = ur(rng);
    z(2 * k, 2 * k) = std::exp(-r);
    z(2 * k + 1, 2 * k + 1) = std::exp(r);
  }
  Matrix s = passive_symplectic(random_unitary(n, rng)) * z *
             passive_symplectic(random_unitary(n, rng));
  return SymplecticMatrix::from_matrix(s);
}

inline Eigen::Matrix2d random_local_block(std::mt19937_64& rng, double max_squeeze = 1.0) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> sq(-max_squeeze, max_squeeze);
  auto rot = [](double t) {
    Eigen::Matrix2d m;
    m << std::cos(t), std::sin(t), -std::sin(t), std::cos(t);
    return m;
  };
  const double r = sq(rng);
  Eigen::Matrix2d z = Eigen::Vector2d(std::exp(-r), std::exp(r)).asDiagonal();
  return rot(angle(rng)) * z * rot(angle(rng));
}

struct RandomStateOptions {
  double max_squeeze = 1.0;
  double max_thermal = 1.0;  // extra photons per normal mode
  double max_mean = 1.0;
  bool displaced = true;
};

inline GaussianState random_state(int n, std::mt19937_64& rng, RandomStateOptions opt = {}) {
  std::uniform_real_distribution<double> uth(0.0, opt.max_thermal);
  std::uniform_real_distribution<double> um(-opt.max_mean, opt.max_mean);
  Matrix base = Matrix::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    const double nu = 0.5 + uth(rng);
    base(2 * k, 2 * k) = nu;
    base(2 * k + 1, 2 * k + 1) = nu;
  }
  const Matrix s = random_symplectic(n, rng, opt.max_squeeze).matrix();
  Matrix cov = s * base * s.transpose();
  cov = 0.5 * (cov + cov.transpose()).eval();
  Vector mean = Vector::Zero(2 * n);
  if (opt.displaced) {
    for (int i = 0; i < 2 * n; ++i) mean(i) = um(rng);
  }
  return GaussianState::from_moments(mean, cov);
}

/// Two-mode resource of moderate brightness: the distorting field stays below
/// a few photons so Fock truncation at cutoff 60 to 90 is negligible.
inline GaussianState random_resource(std::mt19937_64& rng) {
  return random_state(2, rng, {.max_squeeze = 0.6, .max_thermal = 0.3, .max_mean = 0.6});
}

inline std::complex<double> random_complex(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng)};
}

/// Composite Gauss–Legendre on a rectangle, 10 nodes per panel.
class Legendre2D {
 public:
  explicit Legendre2D(int panels_per_axis = 60) : panels_(panels_per_axis) {
    constexpr int n = 10;
    nodes_.resize(n);
    weights_.resize(n);
    for (int i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes_[i] = x;
      weights_[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }

  /// Calls f(x, y, weight) once per node.
  template <typename F>
  void visit(double x0, double x1, double y0, double y1, F&& f) const {
    const double hx = (x1 - x0) / panels_;
    const double hy = (y1 - y0) / panels_;
    for (int px = 0; px < panels_; ++px) {
      const double cx = x0 + (px + 0.5) * hx;
      for (int py = 0; py < panels_; ++py) {
        const double cy = y0 + (py + 0.5) * hy;
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
          for (std::size_t j = 0; j < nodes_.size(); ++j) {
            f(cx + 0.5 * hx * nodes_[i], cy + 0.5 * hy * nodes_[j],
              0.25 * hx * hy * weights_[i] * weights_[j]);
          }
        }
      }
    }
  }

  template <typename F>
  auto integrate(F&& f, double x0, double x1, double y0, double y1) const {
    using R = decltype(f(0.0, 0.0));
    R total{};
    const double hx = (x1 - x0) / panels_;
    const double hy = (y1 - y0) / panels_;
    for (int px = 0; px < panels_; ++px) {
      const double cx = x0 + (px + 0.5) * hx;
      for (int py = 0; py < panels_; ++py) {
        const double cy = y0 + (py + 0.5) * hy;
        R panel{};
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
          for (std::size_t j = 0; j < nodes_.size(); ++j) {
            panel += weights_[i] * weights_[j] *
                     f(cx + 0.5 * hx * nodes_[i], cy + 0.5 * hy * nodes_[j]);
          }
        }
        total += panel * (0.25 * hx * hy);
      }
    }
    return total;
  }

 private:
  int panels_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

}  // namespace cvtele::testing
