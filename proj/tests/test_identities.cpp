#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "support.hpp"
#include "wlap/identities.hpp"

using namespace wlap;
using wlap::test::code_of;

namespace {

constexpr double pi = std::numbers::pi;

TestFunction exp_linear(double a) {
  return {"exp(a x)", [a](std::span<const Jet> x) { return exp(a * x[0]); }};
}

}  // namespace

TEST_CASE("bochner formula on the documented families") {
  for (const char* text : {"gaussian:n=1", "gaussian:n=2,lambda=1.3", "gaussian:n=3", "sphere:n=2,r=1.4", "sphere:n=3",
                           "product:n=3,k=1", "product:n=4,k=2"}) {
    CAPTURE(text);
    const ModelSpace s = make_space(text);
    const auto family = bochner_family(s);
    CHECK(family.size() >= 3);
    double worst = 0;
    for (const auto& u : family) {
      const IdentityReport r = bochner_residual_real(s, u);
      CHECK(r.pass);
      worst = std::max(worst, r.max_residual);
    }
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("bochner formula on random polynomial combinations") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  const ModelSpace s = gaussian_space(2, 0.5);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::pair<double, TestFunction>> terms;
    for (int a = 0; a <= 3; ++a)
      for (int b = 0; a + b <= 3; ++b) terms.push_back({g(rng), chart_monomial({a, b})});
    terms.push_back({g(rng), {"sin", [](std::span<const Jet> x) { return sin(x[0] + 0.5 * x[1]); }}});
    const IdentityReport r = bochner_residual_real(s, combine("random", terms));
    CHECK(r.max_residual <= 1e-10);
  }
}

TEST_CASE("bochner error paths") {
  const ModelSpace c = complex_gaussian_space(1);
  CHECK(code_of([&] { bochner_residual_real(c, coordinate_function(0)); }) == ErrorCode::IncompatibleBasis);
  CHECK(code_of([&] { bochner_family(c); }) == ErrorCode::IncompatibleBasis);
  const ModelSpace g = gaussian_space(1, 0.5);
  CHECK(code_of([&] { bochner_residual_real(g, TestFunction{"samples", {}}); }) ==
        ErrorCode::SymbolicDerivativeUnavailable);
}

TEST_CASE("complex identity on monomials") {
  for (int n = 1; n <= 2; ++n) {
    const ModelSpace s = complex_gaussian_space(n);
    double worst = 0;
    for (int d = 0; d <= 4; ++d)
      for (int p = 0; p <= d; ++p)
        for (const auto& a : compositions(n, p))
          for (const auto& b : compositions(n, d - p)) {
            const IdentityReport r = complex_identity_residual(s, ComplexPolynomial::monomial(a, b));
            CHECK(r.pass);
            CHECK(std::abs(r.values.at("lhs_im")) < 1e-10);
            CHECK(r.values.at("rhs") == doctest::Approx(r.values.at("hessian_term") + r.values.at("gradient_term")));
            worst = std::max(worst, r.max_residual);
          }
    CHECK(worst <= 1e-8);
  }
  // u = zbar: only the gradient term, int |1|^2 e^{-|z|^2} = pi
  const IdentityReport r = complex_identity_residual(complex_gaussian_space(1), ComplexPolynomial::zbar(1, 0));
  CHECK(r.values.at("hessian_term") == doctest::Approx(0.0));
  CHECK(r.values.at("gradient_term") == doctest::Approx(pi));
  CHECK(r.values.at("lhs_re") == doctest::Approx(pi));
}

TEST_CASE("complex identity on a random polynomial") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> g;
  const ModelSpace s = complex_gaussian_space(2);
  ComplexPolynomial u(2);
  for (int d = 0; d <= 3; ++d)
    for (int p = 0; p <= d; ++p)
      for (const auto& a : compositions(2, p))
        for (const auto& b : compositions(2, d - p)) u += ComplexPolynomial::monomial(a, b, cplx(g(rng), g(rng)));
  CHECK(complex_identity_residual(s, u).max_residual <= 1e-10);
}

TEST_CASE("complex identity error paths") {
  const ModelSpace s = complex_gaussian_space(1);
  CHECK(code_of([] { complex_identity_residual(gaussian_space(2, 0.5), ComplexPolynomial::z(1, 0)); }) ==
        ErrorCode::IncompatibleBasis);
  CHECK(code_of([&] { complex_identity_residual(s, ComplexPolynomial::z(2, 0)); }) == ErrorCode::ParameterOutOfRange);
  CHECK(code_of([&] { complex_identity_residual(s, ComplexPolynomial::z(1, 0), truncated_rule(s, 1.5, 10)); }) ==
        ErrorCode::NonIntegrable);
}

TEST_CASE("soliton normalization") {
  for (int n = 1; n <= 4; ++n)
    for (double lambda : {0.5, 1.0}) {
      const IdentityReport r = soliton_identity_residual(gaussian_space(n, lambda));
      CHECK(r.pass);
      CHECK(r.max_residual <= 1e-12);
      CHECK(r.values.at("c") == doctest::Approx(n / 2.0));
    }
  CHECK(code_of([] { soliton_identity_residual(sphere_space(2, 1.0)); }) == ErrorCode::NotASoliton);
  CHECK(code_of([] { soliton_identity_residual(product_space(3, 1)); }) == ErrorCode::NotASoliton);
  // on S^2 x R the potential |t|^2/4 normalizes with c = k/2
  const IdentityReport p = soliton_identity_residual(product_space(3, 1), true);
  CHECK(p.pass);
  CHECK(p.values.at("c") == doctest::Approx(0.5));
}

TEST_CASE("log-sobolev deficit") {
  const ModelSpace g = gaussian_space(1, 0.5);
  for (double eps : {0.0, 0.1, 0.3, 1.0, 3.0, 30.0}) {
    CAPTURE(eps);
    const TestFunction u = normalize_in_measure(g, combine("1+eps x", {{1.0, chart_monomial({0})}, {eps, coordinate_function(0)}}));
    const IdentityReport r = lsi_deficit(g, u);
    CHECK(r.pass);
    CHECK(r.values.at("deficit") >= -1e-8);
    CHECK(r.values.at("l2") == doctest::Approx(1.0).epsilon(1e-10));
  }
  // u = e^{a x} is an extremal: deficit 0 with C = 2 / lambda
  for (double a : {0.2, 0.7}) {
    const TestFunction u = normalize_in_measure(g, exp_linear(a));
    const IdentityReport r = lsi_deficit(g, u);
    CHECK(std::abs(r.values.at("deficit")) < 1e-9);
    // a smaller constant is violated on the extremal
    const IdentityReport tight = lsi_deficit(g, u, 0.9 * 2 / 0.5);
    CHECK_FALSE(tight.pass);
    CHECK(tight.values.at("deficit") < 0);
  }
  const ModelSpace s = sphere_space(2, 1.0);
  const TestFunction v = normalize_in_measure(s, combine("1+X", {{1.0, chart_monomial({0, 0})}, {0.5, ambient_monomial(s, {1, 0, 0})}}));
  CHECK(lsi_deficit(s, v).pass);
  const ModelSpace p = product_space(3, 1);
  const TestFunction w = normalize_in_measure(p, combine("1+t", {{1.0, chart_monomial({0, 0, 0})}, {0.8, coordinate_function(2)}}));
  CHECK(lsi_deficit(p, w).pass);
}

TEST_CASE("log-sobolev error paths") {
  const ModelSpace g = gaussian_space(1, 0.5);
  CHECK(code_of([&] { lsi_deficit(g, combine("2", {{2.0, chart_monomial({0})}})); }) ==
        ErrorCode::NormalizationViolated);
  CHECK(code_of([&] { normalize_in_measure(g, combine("0", {{0.0, chart_monomial({0})}})); }) ==
        ErrorCode::NormalizationViolated);
  CHECK(code_of([] { lsi_deficit(complex_gaussian_space(1), coordinate_function(0)); }) == ErrorCode::IncompatibleBasis);
}
