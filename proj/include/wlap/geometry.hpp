#pragma once

// Pointwise Riemannian calculus in a chart, carried out on Taylor jets.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "wlap/jet.hpp"
#include "wlap/spaces.hpp"

namespace wlap {

/// Real test function given through its jet at a chart point. The jet
/// carries exact derivatives, which is what "symbolic" means here.
using JetFunction = std::function<Jet(std::span<const Jet> chart)>;

struct TestFunction {
  std::string name;
  JetFunction jet;  // may be empty for sampled-only functions
};

/// Coordinate function x_axis of the chart.
TestFunction coordinate_function(int axis);
/// Monomial prod_i x_i^{e_i} in chart coordinates.
TestFunction chart_monomial(std::vector<int> exponents);
/// Monomial prod_a (X_a / scale)^{e_a} in ambient (embedding) coordinates.
TestFunction ambient_monomial(const ModelSpace& space, std::vector<int> exponents, double scale = 1.0);
/// Linear combination of test functions.
TestFunction combine(std::string name, std::vector<std::pair<double, TestFunction>> terms);

struct PointGeometry {
  int dim = 0;
  int order = 0;
  std::vector<Jet> chart;        // coordinate jets, order `order`
  std::vector<Jet> g;            // order - 1
  std::vector<Jet> ginv;         // order - 1
  std::vector<Jet> christoffel;  // Gamma^k_ij at [k*d*d + i*d + j], order - 2
  Jet weight;                    // f or F, order `order`

  const Jet& g_inv(int i, int j) const { return ginv[static_cast<std::size_t>(i * dim + j)]; }
  const Jet& gamma(int k, int i, int j) const {
    return christoffel[static_cast<std::size_t>((k * dim + i) * dim + j)];
  }
};

/// Coordinate jets of the chart point.
std::vector<Jet> chart_jets(std::span<const double> point, int order);

PointGeometry point_geometry(const ModelSpace& space, std::span<const double> point, int order);

/// g^{ij} u_i v_j.
Jet metric_pairing(const PointGeometry& geo, const Jet& u, const Jet& v);
/// Hessian component u_ij - Gamma^k_ij u_k.
Jet hessian(const PointGeometry& geo, const Jet& u, int i, int j);
/// |Hess u|^2 at the point.
double hessian_norm_squared(const PointGeometry& geo, const Jet& u);
/// Delta u - <grad f, grad u> (real convention).
Jet weighted_laplacian(const PointGeometry& geo, const Jet& u);
/// Ric + Hess f, component (i, j), at the point.
double bakry_emery_ricci(const PointGeometry& geo, int i, int j);

/// Symmetric jet-matrix inverse by Newton-Schulz iteration.
std::vector<Jet> invert_jet_matrix(std::span<const Jet> m, int dim);

}  // namespace wlap
