#pragma once

// Discrete bases and weak-form assembly of -Delta_f / -Delta_F.

#include <Eigen/Sparse>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "wlap/complex_polynomial.hpp"
#include "wlap/geometry.hpp"
#include "wlap/identity_report.hpp"
#include "wlap/legendre.hpp"
#include "wlap/quadrature.hpp"
#include "wlap/spaces.hpp"

namespace wlap {

using SparseMatrixC = Eigen::SparseMatrix<cplx, Eigen::ColMajor>;

enum class BasisKind { HermiteTensor, SphericalHarmonics, ProductBasis, FourierLatitudeGrid, MonomialFock };
std::string_view to_string(BasisKind kind);

/// Index data of a finite trial space.
///
/// labels[a] identifies basis function a:
///   HermiteTensor        per-axis degrees
///   SphericalHarmonics   ambient exponents (a_1..a_d, e) of P_{a_1}(xi_1)..P_{a_d}(xi_d) xi_{d+1}^e
///   ProductBasis         (sphere index, Hermite degrees...)
///   FourierLatitudeGrid  (m, l)
///   MonomialFock         (alpha..., beta...)
struct DiscreteBasis {
  BasisKind kind = BasisKind::HermiteTensor;
  SpaceKind space_kind = SpaceKind::GaussianEuclidean;
  int space_n = 0;
  int space_k = 0;
  int max_degree = 0;       // Hermite per axis, Fock total degree, Hermite part of a product
  int l_max = 0;            // harmonics, sphere part of a product, Fourier latitude degree
  int fourier_modes = 0;
  int latitude_points = 0;
  int cardinality = 0;
  std::vector<std::vector<int>> labels;
  std::vector<std::vector<int>> blocks;  // decoupled index groups (Fourier modes, Fock charges)
  std::vector<std::vector<int>> sphere_labels;  // product only

  std::string descriptor() const;
};

DiscreteBasis hermite_basis(const ModelSpace& space, int max_degree);
DiscreteBasis harmonic_basis(const ModelSpace& space, int l_max);
DiscreteBasis product_basis(const ModelSpace& space, int l_max, int max_degree);
DiscreteBasis fourier_basis(const ModelSpace& space, int modes, int l_max, int latitude_points);
DiscreteBasis fock_basis(const ModelSpace& space, int max_degree);
DiscreteBasis default_basis(const ModelSpace& space);
/// "hermite:deg=30", "harmonics:lmax=8", "product:lmax=6,deg=12",
/// "fourier:modes=3,lmax=24,nlat=96", "fock:deg=4"; empty text selects the default.
DiscreteBasis make_basis(const ModelSpace& space, const std::string& descriptor);

struct AssemblyOptions {
  /// Overrides the space's convention; only RoundSphere in dimension 2 may be
  /// assembled in the complex convention (Delta_dbar = Delta_d / 2 with F = 0).
  std::optional<WeightConvention> convention;
  /// Quadrature points per Gaussian axis / latitude (0 = chosen from the basis).
  int quadrature_points = 0;
  /// Gram matrices with lambda_min < floor * lambda_max are rejected.
  double gram_condition_floor = 1e-10;
  /// Entries below prune * max|entry| are dropped after assembly.
  double prune = 1e-14;
};

struct AssembledOperator {
  SparseMatrixC stiffness;
  SparseMatrixC gram;
  WeightConvention convention = WeightConvention::Real;
  bool real_entries = true;
  ModelSpace space;
  DiscreteBasis basis;
  std::vector<std::vector<int>> blocks;
  double gram_min_eigenvalue = 0;
  double gram_max_eigenvalue = 0;
  /// Tensor factors (n-fold Hermite, sphere x Hermite) when the operator is
  /// a Kronecker sum; used for structure-aware checks.
  std::vector<Eigen::MatrixXd> factor_stiffness;
  std::vector<Eigen::MatrixXd> factor_gram;

  int size() const { return static_cast<int>(stiffness.rows()); }
};

AssembledOperator assemble(const ModelSpace& space, const DiscreteBasis& basis, const AssemblyOptions& options = {});

/// Normalized Hermite functions h_k (orthonormal in L^2(e^{-lambda x^2/2} dx)) and
/// their first `derivs` derivatives at x: out[d][k].
std::vector<std::vector<double>> hermite_functions(int max_degree, double lambda, double x, int derivs = 1);

/// Jet of one real basis function (Hermite, harmonics, product).
Jet basis_jet(const ModelSpace& space, const DiscreteBasis& basis, int index, std::span<const Jet> chart);

/// Jets of the expansion sum_a c_a phi_a at every node of `rule`.
std::vector<Jet> expansion_jets(const ModelSpace& space, const DiscreteBasis& basis, std::span<const double> coeffs,
                                const QuadratureRule& rule, int order);

/// Delta_f u (real spaces) at the nodes of `rule` from exact jet derivatives.
std::vector<double> apply(const ModelSpace& space, const TestFunction& u, const QuadratureRule& rule);
/// Delta_F u on ComplexGaussian from exact polynomial algebra, sampled at the nodes.
std::vector<cplx> apply(const ModelSpace& space, const ComplexPolynomial& u, const QuadratureRule& rule);
/// Delta_F u on FanoCP1 for an expansion in a FourierLatitudeGrid basis.
std::vector<cplx> apply_fourier(const ModelSpace& space, const DiscreteBasis& basis, std::span<const cplx> coeffs,
                                const QuadratureRule& rule);

/// Samples on a uniform tensor grid over a flat chart.
struct GridSamples {
  std::vector<double> lower;    // per axis
  std::vector<double> spacing;  // per axis
  std::vector<int> points;      // per axis
  std::vector<cplx> values;     // row-major, first axis slowest
};

/// Weighted Laplacian of sampled data by 4th-order central differences,
/// on GaussianEuclidean or ComplexGaussian. Values are returned on the grid
/// interior (two layers trimmed on every side), row-major.
std::vector<cplx> apply_sampled(const ModelSpace& space, const GridSamples& samples, double smoothness_tol = 1e-4);

struct RicciPotential {
  LegendreSeries series;      // F(t), F(1) = 0
  std::vector<double> t;      // latitude nodes
  std::vector<double> values;  // F at the nodes
  double residual_max = 0;    // max |1/2 Delta F - (K - 1)|
  int degree = 0;
};

/// Solves 1/2 Delta_g F = K - 1 for an S^1-symmetric metric on CP^1.
RicciPotential ricci_potential_cp1(const ModelSpace& space, int latitude_points = 96);

/// Per-mode values of the normalized associated Legendre functions
/// a_l(theta) = Pbar_l^{|m|}(cos theta), l = |m|..l_max, with theta-derivatives.
struct ModeSample {
  double a = 0, a_theta = 0, a_thetatheta = 0;
};
std::vector<ModeSample> legendre_mode_samples(int m, int l_max, double theta);

/// Self-adjointness probe over random coefficient pairs.
IdentityReport selfadjointness_report(const AssembledOperator& op, int pairs = 100, std::uint64_t seed = 7);

/// Strong-form collocation matrices (L, diag mass) on a uniform grid for
/// GaussianEuclidean(n = 1): -Delta_f discretized pointwise, Dirichlet ends.
struct CollocationOperator {
  Eigen::MatrixXd stiffness;  // mass * L, not symmetric in general
  Eigen::VectorXd mass;
  Eigen::VectorXd nodes;
};
CollocationOperator collocation_operator(const ModelSpace& space, double radius, int interior_points);
/// Defect report of a collocation operator; flagged as expected when nonzero.
IdentityReport collocation_defect_report(const CollocationOperator& op, int pairs = 100, std::uint64_t seed = 7);

/// Flux-form finite differences for -Delta_f on [-R, R] with Dirichlet ends
/// (GaussianEuclidean, one axis). R is rounded up to a multiple of h.
struct FiniteDifference1D {
  Eigen::VectorXd diagonal, offdiagonal;  // symmetric tridiagonal stiffness
  Eigen::VectorXd mass;                   // diagonal mass
  double h = 0;
  double radius = 0;
};
FiniteDifference1D finite_difference_1d(double lambda, double h, double radius);
/// Smallest `count` generalized eigenvalues of the tridiagonal pencil.
std::vector<double> finite_difference_eigenvalues(const FiniteDifference1D& fd, int count);

}  // namespace wlap
