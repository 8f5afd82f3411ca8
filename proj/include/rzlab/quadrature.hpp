#pragma once

#include <Eigen/Core>

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace rzlab {

/// Gauss-Legendre nodes/weights on [-1, 1].
template <typename Scalar>
struct GaussRule {
  std::vector<Scalar> nodes;
  std::vector<Scalar> weights;
};

/// Newton iteration on P_n from the Chebyshev-like initial guesses.
template <typename Scalar = double>
GaussRule<Scalar> gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("Gauss-Legendre order must be >= 1");
  GaussRule<Scalar> rule;
  rule.nodes.resize(static_cast<std::size_t>(order));
  rule.weights.resize(static_cast<std::size_t>(order));
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    Scalar x = std::cos(std::numbers::pi_v<Scalar> * (Scalar(i) + Scalar(0.75)) / (Scalar(order) + Scalar(0.5)));
    Scalar dp = 0;
    for (int it = 0; it < 100; ++it) {
      Scalar p0 = 1, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const Scalar p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      Scalar pn = order == 1 ? x : p1;
      Scalar pm = order == 1 ? Scalar(1) : p0;
      dp = order * (x * pn - pm) / (x * x - 1);
      const Scalar dx = pn / dp;
      x -= dx;
      if (std::abs(dx) <= 4 * std::numeric_limits<Scalar>::epsilon()) break;
    }
    // Recompute the derivative at the converged node.
    Scalar p0 = 1, p1 = x;
    for (int k = 2; k <= order; ++k) {
      const Scalar p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = order == 1 ? Scalar(1) : order * (x * p1 - p0) / (x * x - 1);
    const Scalar w = 2 / ((1 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(order - 1 - i);
    rule.nodes[lo] = -x;
    rule.nodes[hi] = x;
    rule.weights[lo] = w;
    rule.weights[hi] = w;
  }
  return rule;
}

/// Composite Gauss-Legendre over consecutive panels [edges[i], edges[i+1]].
template <typename Scalar, typename F>
Scalar integrate_panels(const std::vector<Scalar>& edges, const GaussRule<Scalar>& rule, F&& f) {
  Scalar acc = 0;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const Scalar a = edges[p], b = edges[p + 1];
    const Scalar mid = (a + b) / 2, half = (b - a) / 2;
    Scalar part = 0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) part += rule.weights[k] * f(mid + half * rule.nodes[k]);
    acc += half * part;
  }
  return acc;
}

/// Geometric panel edges a, a*r, a*r^2, ..., b.
template <typename Scalar>
std::vector<Scalar> geometric_edges(Scalar a, Scalar b, Scalar ratio) {
  if (!(a > 0 && b > a && ratio > 1)) throw std::invalid_argument("bad geometric panel request");
  std::vector<Scalar> edges{a};
  while (edges.back() * ratio < b) edges.push_back(edges.back() * ratio);
  edges.push_back(b);
  return edges;
}

/// Uniform panel edges.
template <typename Scalar>
std::vector<Scalar> uniform_edges(Scalar a, Scalar b, int panels) {
  std::vector<Scalar> edges(static_cast<std::size_t>(panels) + 1);
  for (int i = 0; i <= panels; ++i) edges[static_cast<std::size_t>(i)] = a + (b - a) * Scalar(i) / Scalar(panels);
  return edges;
}

}  // namespace rzlab
