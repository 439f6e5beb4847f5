#pragma once

// Eigenfunctions of -Delta_F at eigenvalue 1 versus holomorphic vector
// fields, and the Futaki invariant computed two ways.

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "wlap/complex_polynomial.hpp"
#include "wlap/operators.hpp"
#include "wlap/quadrature.hpp"
#include "wlap/spaces.hpp"

namespace wlap {

/// Components X^i = g^{i jbar} d_jbar u at the nodes of a rule.
///
/// ComplexGaussian: one component per complex coordinate z_i.
/// FanoCP1: the single component X^z in the stereographic coordinate
/// z = tan(theta / 2) e^{i phi} about the north pole.
struct VectorFieldSamples {
  std::string chart;
  int components = 0;
  std::vector<double> nodes;  // row-major, rule.dim values per node
  std::vector<cplx> values;   // node-major, `components` values per node

  cplx at(std::size_t node, int component) const { return values[node * static_cast<std::size_t>(components) + static_cast<std::size_t>(component)]; }
};

struct HolomorphyReport {
  double dbar_defect = 0;     // ||dbar dbar u|| in L^2(dmu)
  double eigen_residual = 0;  // ||Delta_F u + u|| in L^2(dmu)
  double norm = 0;            // ||u|| in L^2(dmu)
  double tolerance = 0;
  bool pass = false;
  std::string description;
};

/// An element of a FourierLatitudeGrid trial space.
struct Cp1Function {
  const DiscreteBasis* basis = nullptr;
  Eigen::VectorXcd coeffs;
};

/// Fock-basis coefficient vector as a polynomial in z, zbar.
ComplexPolynomial fock_polynomial(const DiscreteBasis& basis, const Eigen::VectorXcd& coeffs);

/// X^i = d u / d zbar_i as polynomials (g = identity on C^n).
std::vector<ComplexPolynomial> grad_prime(const ComplexPolynomial& u);
VectorFieldSamples grad_prime(const ModelSpace& space, const ComplexPolynomial& u, const QuadratureRule& rule);
VectorFieldSamples grad_prime(const ModelSpace& space, const Cp1Function& u, const QuadratureRule& rule);

HolomorphyReport holomorphy_defect(const ModelSpace& space, const ComplexPolynomial& u, double tolerance = 1e-8);
/// Latitude integrals use `latitude_points` Gauss-Legendre nodes (0 = basis default + 32).
HolomorphyReport holomorphy_defect(const ModelSpace& space, const Cp1Function& u, double tolerance = 1e-6,
                                   int latitude_points = 0);

/// Relative eigen-residual ||Delta_F u + u|| / ||u|| must stay below this
/// for u to count as a 1-eigenfunction.
inline constexpr double kOneEigenfunctionGate = 1e-6;

/// -int u omega (unweighted Kaehler volume) for a 1-eigenfunction on FanoCP1.
cplx futaki_from_eigenfunction(const ModelSpace& space, const Cp1Function& u, int latitude_points = 0);

/// int X F omega with X = grad' u for the rotation field generated by the
/// m = 0 part of u, F the Ricci potential.
cplx futaki_from_potential(const ModelSpace& space, const Cp1Function& u, int latitude_points = 0);

/// Gram matrix <X_a, X_b> = int g(X_a, conj X_b) dmu of the fields grad' u_a.
Eigen::MatrixXcd vector_field_gram(const ModelSpace& space, std::span<const Cp1Function> fields,
                                   int latitude_points = 0);

}  // namespace wlap
