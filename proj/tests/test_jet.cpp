#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "wlap/jet.hpp"

using namespace wlap;

namespace {

Jet random_jet(std::mt19937_64& rng, int dim, int order) {
  std::normal_distribution<double> g;
  Jet out = Jet::constant(dim, order, g(rng));
  for (int a = 0; a < dim; ++a) {
    const Jet x = Jet::variable(dim, order, a, 0.0);
    out += g(rng) * x + 0.3 * g(rng) * x * x;
  }
  const Jet x0 = Jet::variable(dim, order, 0, 0.0);
  return out + 0.1 * g(rng) * x0 * x0 * x0;
}

double max_gap(const Jet& a, const Jet& b) {
  double m = 0;
  const auto ca = a.coefficients(), cb = b.coefficients();
  REQUIRE(ca.size() == cb.size());
  for (std::size_t i = 0; i < ca.size(); ++i) m = std::max(m, std::abs(ca[i] - cb[i]));
  return m;
}

}  // namespace

TEST_CASE("jet sizes") {
  CHECK(jet_size(1, 4) == 5);
  CHECK(jet_size(2, 3) == 10);
  CHECK(jet_size(3, 2) == 10);
  CHECK(Jet::constant(2, 3, 1.0).coefficients().size() == 10);
}

TEST_CASE("partials of exp(x) sin(y)") {
  const double x0 = 0.3, y0 = 0.7;
  const Jet x = Jet::variable(2, 5, 0, x0), y = Jet::variable(2, 5, 1, y0);
  const Jet f = exp(x) * sin(y);
  const double ex = std::exp(x0);
  const double dsin[] = {std::sin(y0), std::cos(y0), -std::sin(y0), -std::cos(y0), std::sin(y0), std::cos(y0)};
  for (int a = 0; a <= 5; ++a)
    for (int b = 0; a + b <= 5; ++b) {
      std::vector<int> axes(static_cast<std::size_t>(a), 0);
      axes.insert(axes.end(), static_cast<std::size_t>(b), 1);
      CAPTURE(a);
      CAPTURE(b);
      CHECK(f.partial(axes) == doctest::Approx(ex * dsin[b]).epsilon(1e-13));
    }
  CHECK(f.value() == doctest::Approx(ex * std::sin(y0)));
}

TEST_CASE("elementary functions invert each other") {
  const Jet x = Jet::variable(3, 6, 1, 0.8) + 0.5 * Jet::variable(3, 6, 2, -0.2);
  CHECK(max_gap(log(exp(x)), x) < 1e-13);
  CHECK(max_gap(square(sqrt(exp(x))), exp(x)) < 1e-13);
  CHECK(max_gap(sin(x) * sin(x) + cos(x) * cos(x), Jet::constant(3, 6, 1.0)) < 1e-13);
  CHECK(max_gap(x / x, Jet::constant(3, 6, 1.0)) < 1e-13);
  CHECK(max_gap(1.0 / exp(x), exp(-x)) < 1e-13);
}

TEST_CASE("compose matches the elementary exp") {
  const Jet x = Jet::variable(2, 4, 0, 0.4) * Jet::variable(2, 4, 1, 1.1);
  const double e = std::exp(x.value());
  const double d[] = {e, e, e, e, e};
  CHECK(max_gap(x.compose(d), exp(x)) < 1e-13);
}

TEST_CASE("derivative and truncation") {
  const Jet x = Jet::variable(1, 4, 0, 2.0);
  const Jet c = x * x * x;
  CHECK(c.partial({0}) == doctest::Approx(12.0));
  CHECK(c.partial({0, 0}) == doctest::Approx(12.0));
  CHECK(c.partial({0, 0, 0}) == doctest::Approx(6.0));
  CHECK(c.partial({0, 0, 0, 0}) == doctest::Approx(0.0));
  const Jet d = c.derivative(0);
  CHECK(d.order() == 3);
  CHECK(d.value() == doctest::Approx(12.0));
  CHECK(d.partial({0}) == doctest::Approx(12.0));
  const Jet t = c.truncated(2);
  CHECK(t.order() == 2);
  CHECK(t.coefficients().size() == 3);
  // mixed orders truncate to the smaller one
  CHECK((t + c).order() == 2);
  CHECK((t * c).partial({0, 0}) == doctest::Approx(30.0 * 16));  // (x^6)'' at 2
}

TEST_CASE("product rule holds on random jets") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = 1 + trial % 4;
    const Jet a = random_jet(rng, dim, 4), b = random_jet(rng, dim, 4);
    for (int axis = 0; axis < dim; ++axis) {
      const Jet lhs = (a * b).derivative(axis);
      const Jet rhs = a.derivative(axis) * b + a * b.derivative(axis);
      CHECK(max_gap(lhs, rhs.truncated(lhs.order())) < 1e-12);
    }
    // multiplication commutes and distributes
    const Jet c = random_jet(rng, dim, 4);
    CHECK(max_gap(a * b, b * a) < 1e-13);
    CHECK(max_gap(a * (b + c), a * b + a * c) < 1e-12);
  }
}

TEST_CASE("mixed partials commute") {
  const Jet x = Jet::variable(3, 4, 0, 0.2), y = Jet::variable(3, 4, 1, -0.4), z = Jet::variable(3, 4, 2, 0.9);
  const Jet f = exp(x * y) * cos(z + x) + sqrt(2.0 + y * y * z);
  CHECK(f.partial({0, 1, 2}) == doctest::Approx(f.partial({2, 0, 1})).epsilon(1e-14));
  CHECK(f.partial({0, 0, 1}) == doctest::Approx(f.partial({1, 0, 0})).epsilon(1e-14));
  CHECK(f.derivative(0).derivative(2).value() == doctest::Approx(f.partial({0, 2})).epsilon(1e-14));
}
