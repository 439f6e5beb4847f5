#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "support.hpp"
#include "wlap/eigensolve.hpp"
#include "wlap/holomorphic.hpp"

using namespace wlap;
using wlap::test::code_of;

namespace {

constexpr double pi = std::numbers::pi;

struct Cp1Setup {
  ModelSpace space;
  DiscreteBasis basis;
  AssembledOperator op;
  SpectrumResult result;

  explicit Cp1Setup(std::vector<double> pert)
      : space(fano_cp1_space(std::move(pert))),
        basis(default_basis(space)),
        op(assemble(space, basis)),
        result(spectrum(op, op.size())) {}

  Cp1Function member(int cluster, int j) const {
    return {&basis, result.eigenvectors.col(result.clusters[static_cast<std::size_t>(cluster)].members[static_cast<std::size_t>(j)])};
  }
};

ComplexPolynomial random_polynomial(std::mt19937_64& rng, int n, int degree, bool holomorphic) {
  std::normal_distribution<double> g;
  ComplexPolynomial u(n);
  for (int d = 0; d <= degree; ++d)
    for (int p = 0; p <= d; ++p) {
      if (holomorphic && p != d) continue;
      for (const auto& a : compositions(n, p))
        for (const auto& b : compositions(n, d - p)) u += ComplexPolynomial::monomial(a, b, cplx(g(rng), g(rng)));
    }
  return u;
}

// Least-squares residual of fitting samples by a + b z + c z^2, relative to the samples.
double quadratic_fit_residual(const VectorFieldSamples& X) {
  const auto m = static_cast<Eigen::Index>(X.values.size());
  Eigen::MatrixXcd V(m, 3);
  Eigen::VectorXcd y(m);
  for (Eigen::Index q = 0; q < m; ++q) {
    const double theta = X.nodes[static_cast<std::size_t>(2 * q)], phi = X.nodes[static_cast<std::size_t>(2 * q + 1)];
    const cplx z = std::tan(theta / 2) * std::polar(1.0, phi);
    V(q, 0) = 1;
    V(q, 1) = z;
    V(q, 2) = z * z;
    y(q) = X.values[static_cast<std::size_t>(q)];
  }
  const Eigen::VectorXcd c = V.colPivHouseholderQr().solve(y);
  return (V * c - y).norm() / y.norm();
}

}  // namespace

TEST_CASE("grad prime of polynomials") {
  // u = zbar_1 z_2: X^1 = z_2, X^2 = 0
  const ComplexPolynomial u = ComplexPolynomial::monomial({0, 1}, {1, 0});
  const auto X = grad_prime(u);
  REQUIRE(X.size() == 2);
  CHECK(X[0].to_string() == ComplexPolynomial::z(2, 1).to_string());
  CHECK(X[1].is_zero());
  const ModelSpace s = complex_gaussian_space(2);
  const QuadratureRule r = make_rule(s, 3);
  const VectorFieldSamples v = grad_prime(s, u, r);
  CHECK(v.components == 2);
  for (std::size_t q = 0; q < r.size(); ++q) {
    CHECK(std::abs(v.at(q, 0) - cplx(r.node(q)[2], r.node(q)[3])) < 1e-14);
    CHECK(std::abs(v.at(q, 1)) == 0.0);
  }
  CHECK(code_of([&] { grad_prime(gaussian_space(4, 0.5), u, r); }) == ErrorCode::IncompatibleBasis);
}

TEST_CASE("holomorphy defect on fock polynomials") {
  const ModelSpace s = complex_gaussian_space(1);
  const HolomorphyReport one = holomorphy_defect(s, ComplexPolynomial::zbar(1, 0));
  CHECK(one.pass);
  CHECK(one.dbar_defect == 0.0);
  CHECK(one.eigen_residual < 1e-14);
  CHECK(one.norm == doctest::Approx(std::sqrt(pi)));
  // dbar dbar zbar^2 = 2, Delta_F zbar^2 + zbar^2 = -zbar^2
  const HolomorphyReport two = holomorphy_defect(s, ComplexPolynomial::monomial({0}, {2}));
  CHECK_FALSE(two.pass);
  CHECK(two.dbar_defect == doctest::Approx(2 * std::sqrt(pi)));
  CHECK(two.eigen_residual == doctest::Approx(std::sqrt(2 * pi)));
  // zbar_1 z_2^j is a 1-eigenfunction for every j
  const ModelSpace c2 = complex_gaussian_space(2);
  for (int j = 0; j <= 4; ++j) CHECK(holomorphy_defect(c2, ComplexPolynomial::monomial({0, j}, {1, 0})).pass);
  CHECK(code_of([&] { holomorphy_defect(gaussian_space(1, 0.5), ComplexPolynomial::zbar(1, 0)); }) ==
        ErrorCode::IncompatibleBasis);
  CHECK(code_of([&] { holomorphy_defect(s, ComplexPolynomial::zbar(2, 0)); }) == ErrorCode::PointOutsideChart);
}

TEST_CASE("holomorphy defect is homogeneous and blind to holomorphic shifts") {
  std::mt19937_64 rng(31);
  const ModelSpace s = complex_gaussian_space(2);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexPolynomial u = random_polynomial(rng, 2, 3, false);
    const ComplexPolynomial h = random_polynomial(rng, 2, 3, true);
    const cplx a(0.3 + trial, -1.2);
    const double d = holomorphy_defect(s, u).dbar_defect;
    CHECK(holomorphy_defect(s, a * u).dbar_defect == doctest::Approx(std::abs(a) * d).epsilon(1e-12));
    CHECK(holomorphy_defect(s, u + h).dbar_defect == doctest::Approx(d).epsilon(1e-12));
  }
}

TEST_CASE("fock polynomial of fock eigenvectors") {
  const ModelSpace s = complex_gaussian_space(2);
  const DiscreteBasis b = fock_basis(s, 4);
  const AssembledOperator op = assemble(s, b);
  const SpectrumResult r = spectrum(op, op.size());
  const FirstNonzero f = first_nonzero(r);
  CHECK(f.lambda1 == doctest::Approx(1.0));
  for (int m : r.clusters[static_cast<std::size_t>(f.cluster_index)].members) {
    const ComplexPolynomial u = fock_polynomial(b, r.eigenvectors.col(m));
    const HolomorphyReport h = holomorphy_defect(s, u, 1e-8);
    CHECK(h.pass);
    CHECK(h.norm == doctest::Approx(1.0).epsilon(1e-10));
  }
  CHECK(code_of([&] { fock_polynomial(b, Eigen::VectorXcd::Zero(3)); }) == ErrorCode::ParameterOutOfRange);
  CHECK(code_of([&] { fock_polynomial(hermite_basis(gaussian_space(1, 0.5), 3), Eigen::VectorXcd::Zero(4)); }) ==
        ErrorCode::IncompatibleBasis);
}

TEST_CASE("first eigenfunctions on cp1 generate holomorphic fields") {
  for (const auto& pert : {std::vector<double>{}, std::vector<double>{0.2, -0.1}, std::vector<double>{-0.3, 0.0, 0.15}}) {
    const Cp1Setup cp(pert);
    const FirstNonzero f = first_nonzero(cp.result);
    CHECK(f.lambda1 == doctest::Approx(1.0).epsilon(1e-8));
    REQUIRE(f.multiplicity == 3);
    std::vector<Cp1Function> fields;
    for (int j = 0; j < 3; ++j) {
      const Cp1Function u = cp.member(f.cluster_index, j);
      const HolomorphyReport h = holomorphy_defect(cp.space, u);
      CHECK(h.pass);
      CHECK(h.dbar_defect <= 1e-6);
      const cplx a = futaki_from_eigenfunction(cp.space, u), b = futaki_from_potential(cp.space, u);
      CHECK(std::abs(a) <= 1e-6);
      CHECK(std::abs(b) <= 1e-6);
      CHECK(std::abs(a - b) <= 1e-6);
      // X^z is a quadratic polynomial in the stereographic coordinate
      const QuadratureRule rule = tensor_product({gauss_legendre(12, 0.2, 2.6), periodic_trapezoid(9)});
      CHECK(quadratic_fit_residual(grad_prime(cp.space, u, rule)) < 1e-8);
      fields.push_back(u);
    }
    const Eigen::MatrixXcd G = vector_field_gram(cp.space, fields);
    CHECK((G - G.adjoint()).norm() < 1e-12);
    CHECK(std::abs(G.determinant()) > 1e-3);
  }
}

TEST_CASE("higher eigenfunctions are rejected") {
  const Cp1Setup cp({0.15});
  const FirstNonzero f = first_nonzero(cp.result);
  const Cp1Function u = cp.member(f.cluster_index + 1, 0);
  const HolomorphyReport h = holomorphy_defect(cp.space, u);
  CHECK_FALSE(h.pass);
  CHECK(h.dbar_defect > 0.1);
  CHECK(code_of([&] { futaki_from_eigenfunction(cp.space, u); }) == ErrorCode::NotOneEigenfunction);
  const QuadratureRule rule = tensor_product({gauss_legendre(12, 0.2, 2.6), periodic_trapezoid(9)});
  CHECK(quadratic_fit_residual(grad_prime(cp.space, u, rule)) > 1e-3);
}

TEST_CASE("cp1 defect is homogeneous") {
  const Cp1Setup cp({0.1});
  const Cp1Function u = cp.member(2, 0);
  const Cp1Function w{&cp.basis, cplx(0, 3) * u.coeffs};
  CHECK(holomorphy_defect(cp.space, w).dbar_defect ==
        doctest::Approx(3 * holomorphy_defect(cp.space, u).dbar_defect).epsilon(1e-12));
}

TEST_CASE("cp1 error paths") {
  const Cp1Setup cp({});
  const Cp1Function u = cp.member(1, 0);
  CHECK(code_of([&] { futaki_from_potential(complex_gaussian_space(1), u); }) == ErrorCode::PotentialUnavailable);
  CHECK(code_of([&] { holomorphy_defect(complex_gaussian_space(1), u); }) == ErrorCode::IncompatibleBasis);
  const Cp1Function orphan{nullptr, u.coeffs};
  CHECK(code_of([&] { holomorphy_defect(cp.space, orphan); }) == ErrorCode::IncompatibleBasis);
  const Cp1Function short_coeffs{&cp.basis, Eigen::VectorXcd::Zero(3)};
  CHECK(code_of([&] { holomorphy_defect(cp.space, short_coeffs); }) == ErrorCode::ParameterOutOfRange);
  const Cp1Function zero{&cp.basis, Eigen::VectorXcd::Zero(cp.basis.cardinality)};
  CHECK(code_of([&] { futaki_from_eigenfunction(cp.space, zero); }) == ErrorCode::NotOneEigenfunction);
}
