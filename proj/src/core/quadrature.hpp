#pragma once

#include <vector>

namespace cvtele {

/// Gauss–Hermite rule for ∫ exp(−x²) f(x) dx, exact for polynomials of
/// degree ≤ 2n−1. Nodes ascending.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Rules are computed once per size and cached; thread-safe.
const GaussHermiteRule& gauss_hermite(int n);

}  // namespace cvtele
