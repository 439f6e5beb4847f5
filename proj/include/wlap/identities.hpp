#pragma once

// Residual checks of the weighted Bochner formula, the complex integral
// identity, the soliton normalization and the log-Sobolev deficit.

#include <optional>
#include <vector>

#include "wlap/complex_polynomial.hpp"
#include "wlap/geometry.hpp"
#include "wlap/identity_report.hpp"
#include "wlap/quadrature.hpp"
#include "wlap/spaces.hpp"

namespace wlap {

/// Pointwise residual of
///   Delta_f |grad u|^2 - 2 <grad u, grad Delta_f u> - 2 |Hess u|^2 - 2 Ric_f(grad u, grad u)
/// at the nodes of `rule`, each divided by 1 + (sum of the absolute terms).
IdentityReport bochner_residual_real(const ModelSpace& space, const TestFunction& u, const QuadratureRule& rule,
                                     double tolerance = 1e-8);
/// Same on the default rule with 6 points per axis.
IdentityReport bochner_residual_real(const ModelSpace& space, const TestFunction& u, double tolerance = 1e-8);

/// Polynomials of degree <= 4 (flat and product charts) or ambient
/// polynomials of degree <= 3 (spheres), the latter spanning the harmonics
/// of degree <= 3.
std::vector<TestFunction> bochner_family(const ModelSpace& space);

/// -int grad^i(Delta_F u) grad_i(conj u) dmu against
/// int (|dbar dbar u|^2 + |dbar u|^2) dmu on ComplexGaussian;
/// residual |LHS - RHS| / (1 + |RHS|).
IdentityReport complex_identity_residual(const ModelSpace& space, const ComplexPolynomial& u,
                                         const QuadratureRule& rule, double tolerance = 1e-8);
IdentityReport complex_identity_residual(const ModelSpace& space, const ComplexPolynomial& u,
                                         double tolerance = 1e-8);

/// Constant c with Delta_f (f - c) + 2 lambda (f - c) = 0; values["c"].
/// The product space is accepted only with `allow_product`.
IdentityReport soliton_identity_residual(const ModelSpace& space, bool allow_product = false,
                                         double tolerance = 1e-10);

/// u scaled to int u^2 dmu = 1 for the probability measure mu.
TestFunction normalize_in_measure(const ModelSpace& space, const TestFunction& u);

/// Deficit C int |grad u|^2 dmu - int u^2 log u^2 dmu, C = 2 / lambda by
/// default, mu the normalized weighted measure. values["deficit"]; PASS iff
/// deficit >= -tolerance.
IdentityReport lsi_deficit(const ModelSpace& space, const TestFunction& u, std::optional<double> constant = {},
                           double tolerance = 1e-8);

}  // namespace wlap
