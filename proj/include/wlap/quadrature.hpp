#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace wlap {

/// Nodes and weights on a chart. Weights carry the Riemannian volume density
/// only; the weight e^{-f} or e^{F} of a metric measure space is applied by
/// the caller.
struct QuadratureRule {
  int dim = 0;
  std::vector<double> nodes;    // row-major, node q is nodes[q*dim .. q*dim+dim)
  std::vector<double> weights;  // strictly positive
  std::vector<QuadratureRule> factors;  // set when the rule is a tensor product
  double tail_estimate = 0.0;   // weighted mass (relative) outside the covered region
  std::string chart;

  std::size_t size() const noexcept { return weights.size(); }
  std::span<const double> node(std::size_t q) const {
    return {nodes.data() + q * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
};

/// Tensor product; the first factor varies slowest.
QuadratureRule tensor_product(const std::vector<QuadratureRule>& factors);

/// Gauss rule for e^{-lambda x^2 / 2} on the real line, returned with plain dx
/// weights (the Gaussian factor is divided out stably through Hermite
/// functions, so outer nodes keep full relative accuracy).
QuadratureRule gauss_hermite(int points, double lambda);

/// Gauss rule on [-1, 1] for the weight (1 - t^2)^alpha, alpha >= 0.
QuadratureRule gauss_gegenbauer(int points, double alpha);

inline QuadratureRule gauss_legendre(int points) { return gauss_gegenbauer(points, 0.0); }

/// Gauss-Legendre rule on [a, b].
QuadratureRule gauss_legendre(int points, double a, double b);

/// Composite Gauss-Legendre rule on [a, b] with panel edges at `breaks` and
/// geometric grading towards each break point; used for integrands with
/// isolated weak singularities (e.g. u^2 log u^2 at a zero of u).
QuadratureRule graded_gauss_legendre(double a, double b, std::span<const double> breaks,
                                     int points_per_panel = 20, double panel_width = 0.5,
                                     int grading_levels = 12);

/// Uniform periodic (trapezoid) rule on [0, 2 pi).
QuadratureRule periodic_trapezoid(int points);

}  // namespace wlap
