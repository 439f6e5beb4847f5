#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "support.hpp"
#include "wlap/eigensolve.hpp"

using namespace wlap;
using wlap::test::code_of;

namespace {

SpectrumResult solve(const ModelSpace& s, const DiscreteBasis& b, int count, SolverPath path = SolverPath::Auto,
                     std::uint64_t seed = 42) {
  const AssembledOperator op = assemble(s, b);
  SpectrumOptions opt;
  opt.path = path;
  opt.seed = seed;
  return spectrum(op, count, opt);
}

}  // namespace

TEST_CASE("clustering") {
  CHECK(cluster_eigenvalues({}, 1e-6).empty());
  const auto c = cluster_eigenvalues({0.0, 1.0, 1.0 + 1e-9, 2.0}, 1e-6);
  REQUIRE(c.size() == 3);
  CHECK(c[1].multiplicity == 2);
  CHECK(c[1].members == std::vector<int>{1, 2});
  CHECK(c[1].value == doctest::Approx(1.0));
  // gaps below the tolerance chain together
  const auto chain = cluster_eigenvalues({1.0, 1.0 + 0.9e-6, 1.0 + 1.8e-6}, 1e-6);
  CHECK(chain.size() == 1);
  // relative tolerance above 1, absolute below
  CHECK(cluster_eigenvalues({1000.0, 1000.0005}, 1e-6).size() == 1);
  CHECK(cluster_eigenvalues({1e-3, 1e-3 + 2e-6}, 1e-6).size() == 2);
}

TEST_CASE("ornstein-uhlenbeck ladder") {
  const ModelSpace g = gaussian_space(1, 0.5);
  const SpectrumResult r = solve(g, hermite_basis(g, 20), 21);
  CHECK(r.path == "dense");
  for (int k = 0; k <= 20; ++k) CHECK(r.eigenvalues[static_cast<std::size_t>(k)] == doctest::Approx(0.5 * k).epsilon(1e-12));
  for (double res : r.residuals) CHECK(res <= 1e-10);
  CHECK(r.spectral_radius == doctest::Approx(10.0));
  CHECK(r.min_eigenvalue >= -1e-10 * r.spectral_radius);
  const FirstNonzero f = first_nonzero(r);
  CHECK(f.lambda1 == doctest::Approx(0.5));
  CHECK(f.multiplicity == 1);
}

TEST_CASE("dense and iterative paths agree") {
  const ModelSpace g = gaussian_space(2, 0.5);
  const DiscreteBasis b = hermite_basis(g, 10);
  const SpectrumResult d = solve(g, b, 12, SolverPath::Dense);
  const SpectrumResult i = solve(g, b, 12, SolverPath::Iterative);
  CHECK(i.path == "shift-invert");
  for (std::size_t k = 0; k < 12; ++k) CHECK(i.eigenvalues[k] == doctest::Approx(d.eigenvalues[k]).epsilon(1e-9));
  for (double res : i.residuals) CHECK(res <= 1e-8);
  // multiplicities 1, 2, 3, 4, ...
  CHECK(i.clusters[1].multiplicity == 2);
  CHECK(i.clusters[2].multiplicity == 3);
}

TEST_CASE("iterative path is deterministic for a fixed seed") {
  const ModelSpace s = sphere_space(2, 1.0);
  const DiscreteBasis b = harmonic_basis(s, 8);
  const SpectrumResult a = solve(s, b, 9, SolverPath::Iterative, 5);
  const SpectrumResult c = solve(s, b, 9, SolverPath::Iterative, 5);
  CHECK(a.eigenvalues == c.eigenvalues);
  CHECK(a.iterations == c.iterations);
  const SpectrumResult other = solve(s, b, 9, SolverPath::Iterative, 99);
  for (std::size_t k = 0; k < 9; ++k) CHECK(other.eigenvalues[k] == doctest::Approx(a.eigenvalues[k]).epsilon(1e-9));
}

TEST_CASE("sphere spectra") {
  for (double r : {1.0, 1.5}) {
    const ModelSpace s = sphere_space(2, r);
    const SpectrumResult res = solve(s, harmonic_basis(s, 6), 49);
    for (int l = 0; l <= 6; ++l) {
      CAPTURE(l);
      REQUIRE(res.clusters.size() > static_cast<std::size_t>(l));
      CHECK(res.clusters[static_cast<std::size_t>(l)].value == doctest::Approx(l * (l + 1) / (r * r)).epsilon(1e-10));
      CHECK(res.clusters[static_cast<std::size_t>(l)].multiplicity == 2 * l + 1);
    }
  }
  const ModelSpace s3 = sphere_space(3, 1.0);
  const SpectrumResult r3 = solve(s3, harmonic_basis(s3, 4), 55);
  for (int l = 0; l <= 3; ++l) {
    CHECK(r3.clusters[static_cast<std::size_t>(l)].value == doctest::Approx(l * (l + 2.0)).epsilon(1e-10));
    CHECK(r3.clusters[static_cast<std::size_t>(l)].multiplicity == (l + 1) * (l + 1));
  }
}

TEST_CASE("spectrum argument errors") {
  const ModelSpace g = gaussian_space(1, 0.5);
  const AssembledOperator op = assemble(g, hermite_basis(g, 5));
  CHECK(spectrum(op, 0).path == "none");
  CHECK(code_of([&] { spectrum(op, 7); }) == ErrorCode::ParameterOutOfRange);
  CHECK(code_of([&] { spectrum(op, -1); }) == ErrorCode::ParameterOutOfRange);
  SpectrumOptions bad;
  bad.tol = 0;
  CHECK(code_of([&] { spectrum(op, 2, bad); }) == ErrorCode::ParameterOutOfRange);
  AssembledOperator broken = op;
  broken.gram = -broken.gram;
  CHECK(code_of([&] { spectrum(broken, 2); }) == ErrorCode::GramNotPD);
  // only the constant mode: nothing above zero
  CHECK(code_of([&] { first_nonzero(spectrum(op, 1)); }) == ErrorCode::AllZero);
}

TEST_CASE("lower bound check") {
  const ModelSpace g = gaussian_space(2, 0.5);
  const AssembledOperator op = assemble(g, hermite_basis(g, 8));
  const SpectrumResult r = spectrum(op, op.size());
  const BoundReport ok = check_lower_bound(r, g);
  CHECK(ok.pass);
  CHECK(ok.lambda1 == doctest::Approx(0.5));
  CHECK(ok.multiplicity == 2);
  ModelSpace wrong = g;
  wrong.ric_f_lower_bound = 0.6;
  const BoundReport no = check_lower_bound(r, wrong);
  CHECK_FALSE(no.pass);
  CHECK(no.statement.find("0.5 <") != std::string::npos);
  CHECK(no.statement.find("0.6") != std::string::npos);
  ModelSpace undeclared = g;
  undeclared.ric_f_lower_bound.reset();
  CHECK_FALSE(check_lower_bound(r, undeclared).pass);
}

TEST_CASE("spectral bounds per convention") {
  CHECK(*spectral_bound(gaussian_space(1, 0.3), WeightConvention::Real) == doctest::Approx(0.3));
  CHECK(*spectral_bound(complex_gaussian_space(2), WeightConvention::Complex) == 1.0);
  CHECK(*spectral_bound(sphere_space(2, 2.0), WeightConvention::Complex) == doctest::Approx(0.25));
  CHECK_FALSE(spectral_bound(complex_gaussian_space(1), WeightConvention::Real).has_value());

  const ModelSpace s = sphere_space(2, 1.5);
  AssemblyOptions opt;
  opt.convention = WeightConvention::Complex;
  const AssembledOperator op = assemble(s, harmonic_basis(s, 4), opt);
  const SpectrumResult r = spectrum(op, op.size());
  const BoundReport b = check_lower_bound(r, s);
  CHECK(b.pass);
  CHECK(b.lambda1 == doctest::Approx(1 / 2.25).epsilon(1e-10));
  CHECK(b.multiplicity == 3);
}

TEST_CASE("splitting certificate") {
  const ModelSpace g = gaussian_space(2, 0.5);
  const AssembledOperator op = assemble(g, hermite_basis(g, 8));
  const SpectrumResult r = spectrum(op, op.size());
  const FirstNonzero f = first_nonzero(r);
  const auto& cl = r.clusters[static_cast<std::size_t>(f.cluster_index)];
  for (int m : cl.members) {
    const SplittingReport s = splitting_certificate(op, r, r.eigenvectors.col(m));
    CHECK(s.hessian_norm <= 1e-10);
    CHECK(s.lambda == doctest::Approx(0.5));
    REQUIRE(s.references.size() == 2);
    CHECK(s.cluster_capture[0] == doctest::Approx(1.0));
  }
  const auto [R, names] = linear_references(op);
  CHECK(names == std::vector<std::string>{"x1", "x2"});
  const Eigen::MatrixXcd V = align_cluster(op, r, f.cluster_index, R);
  for (int j = 0; j < 2; ++j) {
    const std::complex<double> c = V.col(j).dot(op.gram * R.col(j));
    CHECK(std::abs(c) > 0.9999);
  }
  const int second = r.clusters[static_cast<std::size_t>(f.cluster_index + 1)].members[0];
  CHECK(code_of([&] { splitting_certificate(op, r, r.eigenvectors.col(second)); }) == ErrorCode::NotFirstCluster);
  CHECK(code_of([&] { splitting_certificate(op, r, Eigen::VectorXcd::Zero(op.size())); }) == ErrorCode::NotFirstCluster);
  CHECK(code_of([&] { align_cluster(op, r, 999, R); }) == ErrorCode::ParameterOutOfRange);
}

TEST_CASE("sphere eigenfunctions are not hessian free") {
  const ModelSpace s = sphere_space(2, 1.0);
  const AssembledOperator op = assemble(s, harmonic_basis(s, 4));
  const SpectrumResult r = spectrum(op, op.size());
  const auto& cl = r.clusters[1];
  const SplittingReport rep = splitting_certificate(op, r, r.eigenvectors.col(cl.members[0]));
  // Hess u = -u g, so ||Hess u|| = sqrt(2) ||u||
  CHECK(rep.hessian_norm == doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
  CHECK(rep.references.empty());
}

TEST_CASE("tensor sums") {
  const auto t = tensor_sum_spectrum({{0, 1, 2}, {0, 0.5}}, 4);
  CHECK(t == std::vector<double>{0, 0.5, 1, 1.5});
  const auto u = tensor_sum_spectrum({{0, 0.5, 1}, {0, 0.5, 1}}, 6);
  CHECK(u == std::vector<double>{0, 0.5, 0.5, 1, 1, 1});
  CHECK(tensor_sum_spectrum({{0, 1}}, 5).size() == 2);
}
