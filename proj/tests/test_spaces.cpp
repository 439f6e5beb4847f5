#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "support.hpp"
#include "wlap/spaces.hpp"

using namespace wlap;
using wlap::test::code_of;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("descriptor parsing") {
  const SpaceDescriptor d = parse_space_descriptor(" Gaussian : n = 2 , lambda=0.25 ");
  CHECK(d.kind == "gaussian");
  CHECK(d.params.at("n") == "2");
  CHECK(d.params.at("lambda") == "0.25");
  CHECK(parse_space_descriptor("sphere").params.empty());
  CHECK(code_of([] { parse_space_descriptor("gaussian:n"); }) == ErrorCode::ParameterOutOfRange);
}

TEST_CASE("catalog constructors") {
  const ModelSpace g = make_space("gaussian:n=3,lambda=0.25");
  CHECK(g.kind == SpaceKind::GaussianEuclidean);
  CHECK(g.n == 3);
  CHECK(g.real_dimension == 3);
  CHECK(*g.ric_f_lower_bound == doctest::Approx(0.25));
  CHECK(g.convention == WeightConvention::Real);

  const ModelSpace s = make_space("sphere:n=3,r=2");
  CHECK(*s.ric_f_lower_bound == doctest::Approx(0.5));
  CHECK(s.chart_dimension() == 3);
  CHECK(s.sphere_dimension() == 3);

  const ModelSpace p = make_space("product:n=3,k=1");
  CHECK(p.radius == doctest::Approx(std::sqrt(2.0)));
  CHECK(p.sphere_dimension() == 2);
  CHECK(*p.ric_f_lower_bound == doctest::Approx(0.5));

  const ModelSpace c = make_space("complex-gaussian:n=2");
  CHECK(c.convention == WeightConvention::Complex);
  CHECK(c.real_dimension == 4);
  CHECK_FALSE(c.ric_f_lower_bound.has_value());

  const ModelSpace f = make_space("fano-cp1:pert=0.1;-0.2");
  CHECK(f.cp1 != nullptr);
  CHECK(f.cp1->perturbation.size() == 2);
  CHECK(f.cp1->area == doctest::Approx(4 * pi).epsilon(1e-13));
}

TEST_CASE("descriptor round trip") {
  for (const char* text : {"gaussian:n=2,lambda=0.5", "sphere:n=4,radius=1.5", "product:n=5,k=2",
                           "complex-gaussian:n=3", "fano-cp1:pert=0.1;0;-0.3", "fano-cp1"}) {
    CAPTURE(text);
    const ModelSpace a = make_space(text);
    const ModelSpace b = make_space(a.descriptor());
    CHECK(a.descriptor() == b.descriptor());
    CHECK(a.kind == b.kind);
    CHECK(a.n == b.n);
  }
}

TEST_CASE("parameter errors") {
  CHECK(code_of([] { make_space("torus:n=2"); }) == ErrorCode::UnknownKind);
  CHECK(code_of([] { make_space("gaussian:n=0"); }) == ErrorCode::ParameterOutOfRange);
  CHECK(code_of([] { make_space("gaussian:n=7"); }) == ErrorCode::ParameterOutOfRange);
  CHECK(code_of([] { make_space("gaussian:lambda=-1"); }) == ErrorCode::ParameterOutOfRange);
  CHECK(code_of([] { make_space("gaussian:lambda=abc"); }) == ErrorCode::ParameterOutOfRange);
  CHECK(code_of([] { make_space("gaussian:n=1.5"); }) == ErrorCode::ParameterOutOfRange);
  CHECK(code_of([] { make_space("gaussian:radius=2"); }) == ErrorCode::ParameterOutOfRange);
  CHECK(code_of([] { make_space("sphere:n=1"); }) == ErrorCode::ParameterOutOfRange);
  CHECK(code_of([] { make_space("sphere:r=0"); }) == ErrorCode::ParameterOutOfRange);
  CHECK(code_of([] { make_space("product:n=3,k=2"); }) == ErrorCode::ParameterOutOfRange);
  CHECK(code_of([] { make_space("product:n=3,k=0"); }) == ErrorCode::ParameterOutOfRange);
  CHECK(code_of([] { make_space("complex-gaussian:n=4"); }) == ErrorCode::ParameterOutOfRange);
  CHECK(code_of([] { make_space("fano-cp1:pert=1.5"); }) == ErrorCode::ParameterOutOfRange);
  CHECK(code_of([] { make_space("fano-cp1:area_scale=0"); }) == ErrorCode::ParameterOutOfRange);
  CHECK(code_of([] { fano_cp1_space(std::vector<double>(13, 0.01)); }) == ErrorCode::ParameterOutOfRange);
}

TEST_CASE("weights at points") {
  const ModelSpace g = gaussian_space(2, 0.5);
  const double x[] = {1.0, 2.0};
  CHECK(weight_at(g, x) == doctest::Approx(0.25 * 5));

  const ModelSpace s = sphere_space(2, 1.0);
  const double ok[] = {1.0, 4.0};
  CHECK(weight_at(s, ok) == 0.0);
  const double bad[] = {4.0, 1.0};
  CHECK(code_of([&] { weight_at(s, bad); }) == ErrorCode::PointOutsideChart);
  const double past_phi[] = {1.0, 7.0};
  CHECK(code_of([&] { weight_at(s, past_phi); }) == ErrorCode::PointOutsideChart);
  const double wrong_dim[] = {1.0};
  CHECK(code_of([&] { weight_at(s, wrong_dim); }) == ErrorCode::PointOutsideChart);
  const double nan[] = {std::nan(""), 0.0};
  CHECK(code_of([&] { weight_at(g, nan); }) == ErrorCode::PointOutsideChart);

  // F = -|z|^2 on C^1, chart (x, y)
  const ModelSpace c = complex_gaussian_space(1);
  const double z[] = {0.5, -1.0};
  CHECK(weight_at(c, z) == doctest::Approx(-1.25));

  // The Ricci potential of the round metric is zero.
  const ModelSpace round = fano_cp1_space({});
  const double p[] = {1.0, 0.3};
  CHECK(std::abs(weight_at(round, p)) < 1e-13);
}

TEST_CASE("weighted volumes against closed forms") {
  for (int n = 1; n <= 3; ++n) {
    const ModelSpace g = gaussian_space(n, 0.5);
    CHECK(weighted_volume(g, make_rule(g, 12)) == doctest::Approx(std::pow(4 * pi, n / 2.0)).epsilon(1e-13));
  }
  const ModelSpace s2 = sphere_space(2, 1.5);
  CHECK(weighted_volume(s2, make_rule(s2, 8)) == doctest::Approx(4 * pi * 2.25).epsilon(1e-13));
  const ModelSpace s3 = sphere_space(3, 1.0);
  CHECK(weighted_volume(s3, make_rule(s3, 8)) == doctest::Approx(2 * pi * pi).epsilon(1e-13));
  const ModelSpace p = product_space(3, 1);
  CHECK(weighted_volume(p, make_rule(p, 10)) == doctest::Approx(4 * pi * 2 * std::sqrt(4 * pi)).epsilon(1e-12));
  const ModelSpace c = complex_gaussian_space(2);
  CHECK(weighted_volume(c, make_rule(c, 10)) == doctest::Approx(pi * pi).epsilon(1e-13));
}

TEST_CASE("gauss-bonnet on perturbed cp1") {
  for (const auto& pert : {std::vector<double>{}, std::vector<double>{0.2}, std::vector<double>{0.1, -0.15, 0.05}}) {
    const ModelSpace s = fano_cp1_space(pert, 1.0);
    const QuadratureRule gl = gauss_legendre(200);
    double total = 0, area = 0;
    for (std::size_t q = 0; q < gl.size(); ++q) {
      const double t = gl.nodes[q];
      const double e2s = std::exp(2 * s.cp1->sigma(t));
      total += gl.weights[q] * s.cp1->curvature(t) * e2s;
      area += gl.weights[q] * e2s;
    }
    CHECK(2 * pi * total == doctest::Approx(4 * pi).epsilon(1e-12));
    CHECK(2 * pi * area == doctest::Approx(4 * pi).epsilon(1e-12));
    CHECK(s.cp1->potential_residual < 1e-8);
    CHECK(std::abs(s.cp1->potential(1.0)) < 1e-12);
  }
  const ModelSpace round = fano_cp1_space({});
  CHECK(round.cp1->curvature(0.3) == doctest::Approx(1.0));
  // Area other than 4 pi leaves the anticanonical class.
  CHECK(code_of([] { fano_cp1_space({}, 2.0); }) == ErrorCode::GaussBonnetViolated);
}

TEST_CASE("truncation") {
  const ModelSpace g = gaussian_space(1, 0.5);
  const double R = truncation_radius(g);
  CHECK(std::exp(-0.25 * R * R) <= 1.01e-12);
  CHECK(std::exp(-0.25 * R * R) >= 0.5e-12);
  const QuadratureRule wide = truncated_rule(g, R, 60);
  CHECK(wide.tail_estimate <= 1e-11);
  CHECK(weighted_volume(g, wide, 1e-10) == doctest::Approx(std::sqrt(4 * pi)).epsilon(1e-10));
  const QuadratureRule narrow = truncated_rule(g, 2.0, 20);
  CHECK(narrow.tail_estimate > 0.1);
  CHECK(code_of([&] { weighted_volume(g, narrow); }) == ErrorCode::TruncationInsufficient);
  CHECK(code_of([] { truncation_radius(sphere_space(2, 1.0)); }) == ErrorCode::ParameterOutOfRange);
  CHECK(code_of([&] { truncated_rule(g, -1.0, 10); }) == ErrorCode::ParameterOutOfRange);
  CHECK(code_of([&] { weighted_volume(g, make_rule(sphere_space(2, 1.0), 4)); }) == ErrorCode::PointOutsideChart);
}

TEST_CASE("density at nodes follows the convention") {
  const ModelSpace g = gaussian_space(1, 1.0);
  const QuadratureRule r = make_rule(g, 4);
  const auto dens = density_at_nodes(g, r);
  for (std::size_t q = 0; q < r.size(); ++q) CHECK(dens[q] == doctest::Approx(std::exp(-0.5 * r.nodes[q] * r.nodes[q])));
  const ModelSpace c = complex_gaussian_space(1);
  const QuadratureRule rc = make_rule(c, 3);
  const auto dc = density_at_nodes(c, rc);
  for (std::size_t q = 0; q < rc.size(); ++q) {
    const double x = rc.nodes[2 * q], y = rc.nodes[2 * q + 1];
    CHECK(dc[q] == doctest::Approx(std::exp(-(x * x + y * y))));
  }
}

TEST_CASE("catalog listing") {
  const auto entries = catalog();
  REQUIRE(entries.size() == 5);
  for (std::size_t i = 1; i < entries.size(); ++i) CHECK(entries[i - 1].name < entries[i].name);
  for (const auto& e : entries) {
    CHECK_FALSE(e.parameters.empty());
    CHECK_FALSE(e.bound.empty());
  }
  CHECK(to_string(SpaceKind::FanoCP1).size() > 0);
}
