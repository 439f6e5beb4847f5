#include "wlap/identities.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wlap/error.hpp"

namespace wlap {
namespace {

std::size_t sz(int v) { return static_cast<std::size_t>(v); }

void require_real(const ModelSpace& space) {
  require(space.convention == WeightConvention::Real, ErrorCode::IncompatibleBasis,
          "identity needs a real-convention space, got " + space.descriptor());
}

void finish(IdentityReport& r, double sum_sq, double mass) {
  r.l2_residual = mass > 0 ? std::sqrt(sum_sq / mass) : 0.0;
  r.decide();
}

// All exponent vectors of length n with total degree in [lo, hi].
std::vector<std::vector<int>> exponents_up_to(int n, int lo, int hi) {
  std::vector<std::vector<int>> out;
  for (int d = lo; d <= hi; ++d)
    for (auto& e : compositions(n, d)) out.push_back(std::move(e));
  return out;
}

int default_points(int dim) { return dim <= 2 ? 6 : dim == 3 ? 4 : 3; }

// Rule for the log-Sobolev integrals; 1-D Gaussian charts get panels graded
// towards the zeros of u.
QuadratureRule lsi_rule(const ModelSpace& space, const TestFunction& u) {
  if (space.kind == SpaceKind::GaussianEuclidean && space.n == 1) {
    auto value = [&](double x) {
      const std::vector<Jet> c{Jet::variable(1, 1, 0, x)};
      return u.jet(c).value();
    };
    // Widen past the weight's own cutoff while u^2 e^{-f} still carries mass at the ends.
    auto integrand = [&](double x) {
      const double v = value(x);
      return v * v * std::exp(-0.5 * space.lambda * x * x);
    };
    double R = truncation_radius(space);
    double peak = 0;
    for (int i = 0; i <= 400; ++i) peak = std::max(peak, integrand(-R + 2 * R * i / 400));
    while (R < 80 && std::max(integrand(-R), integrand(R)) > 1e-15 * peak) {
      R += 1;
      peak = std::max({peak, integrand(-R), integrand(R)});
    }
    std::vector<double> zeros;
    const int samples = 4000;
    double xa = -R, fa = value(xa);
    for (int i = 1; i <= samples; ++i) {
      const double xb = -R + 2 * R * i / samples, fb = value(xb);
      if (fa == 0) zeros.push_back(xa);
      if (fa * fb < 0) {
        double lo = xa, hi = xb, flo = fa;
        for (int it = 0; it < 80; ++it) {
          const double mid = 0.5 * (lo + hi), fm = value(mid);
          if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        zeros.push_back(0.5 * (lo + hi));
      }
      xa = xb;
      fa = fb;
    }
    QuadratureRule r = graded_gauss_legendre(-R, R, zeros, 20, 0.5, 14);
    r.tail_estimate = std::erfc(R * std::sqrt(space.lambda / 2));
    return r;
  }
  const int dim = space.chart_dimension();
  return make_rule(space, dim <= 2 ? 40 : dim == 3 ? 16 : 8);
}

struct MeasureSums {
  double mass = 0, l2 = 0, energy = 0, entropy = 0;
};

MeasureSums measure_sums(const ModelSpace& space, const TestFunction& u, const QuadratureRule& rule) {
  require(static_cast<bool>(u.jet), ErrorCode::SymbolicDerivativeUnavailable, "test function has no jet: " + u.name);
  const auto density = density_at_nodes(space, rule);
  MeasureSums s;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const PointGeometry geo = point_geometry(space, rule.node(q), 2);
    const Jet uj = u.jet(geo.chart);
    const double v = uj.value();
    const double w = rule.weights[q] * density[q];
    const double v2 = v * v;
    s.mass += w;
    s.l2 += w * v2;
    s.energy += w * metric_pairing(geo, uj, uj).value();
    if (v2 > 0) s.entropy += w * v2 * std::log(v2);
  }
  return s;
}

}  // namespace

IdentityReport bochner_residual_real(const ModelSpace& space, const TestFunction& u, const QuadratureRule& rule,
                                     double tolerance) {
  require_real(space);
  require(static_cast<bool>(u.jet), ErrorCode::SymbolicDerivativeUnavailable,
          "test function has no symbolic derivatives: " + u.name);
  IdentityReport r;
  r.identity_name = "bochner_real";
  r.tolerance = tolerance;
  const auto density = density_at_nodes(space, rule);
  const int d = space.chart_dimension();
  double sum_sq = 0, mass = 0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const PointGeometry geo = point_geometry(space, rule.node(q), 4);
    const Jet uj = u.jet(geo.chart);
    const Jet grad2 = metric_pairing(geo, uj, uj);
    const double t1 = weighted_laplacian(geo, grad2).value();
    const Jet lap = weighted_laplacian(geo, uj);
    const double t2 = 2 * metric_pairing(geo, uj, lap).value();
    const double t3 = 2 * hessian_norm_squared(geo, uj);
    std::vector<double> up(sz(d), 0.0);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) up[sz(i)] += geo.g_inv(i, j).value() * uj.derivative(j).value();
    double ric = 0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) ric += bakry_emery_ricci(geo, i, j) * up[sz(i)] * up[sz(j)];
    const double t4 = 2 * ric;
    const double res = std::abs(t1 - t2 - t3 - t4) / (1 + std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(t4));
    r.max_residual = std::max(r.max_residual, res);
    const double w = rule.weights[q] * density[q];
    sum_sq += w * res * res;
    mass += w;
  }
  std::ostringstream os;
  os << u.name << " on " << space.descriptor() << ", " << rule.size() << " nodes";
  r.sample_description = os.str();
  finish(r, sum_sq, mass);
  return r;
}

IdentityReport bochner_residual_real(const ModelSpace& space, const TestFunction& u, double tolerance) {
  return bochner_residual_real(space, u, make_rule(space, default_points(space.chart_dimension())), tolerance);
}

std::vector<TestFunction> bochner_family(const ModelSpace& space) {
  require_real(space);
  std::vector<TestFunction> out;
  switch (space.kind) {
    case SpaceKind::GaussianEuclidean:
      for (auto& e : exponents_up_to(space.n, 1, space.n <= 3 ? 4 : 2)) out.push_back(chart_monomial(std::move(e)));
      break;
    case SpaceKind::RoundSphere:
      for (auto& e : exponents_up_to(space.n + 1, 1, 3))
        out.push_back(ambient_monomial(space, std::move(e), space.radius));
      break;
    case SpaceKind::SphereGaussianProduct:
      for (auto& e : exponents_up_to(space.n + 1, 1, 3)) out.push_back(ambient_monomial(space, std::move(e), 1.0));
      break;
    default:
      fail(ErrorCode::IncompatibleBasis, "no real test family for " + space.descriptor());
  }
  return out;
}

IdentityReport complex_identity_residual(const ModelSpace& space, const ComplexPolynomial& u,
                                         const QuadratureRule& rule, double tolerance) {
  require(space.kind == SpaceKind::ComplexGaussian, ErrorCode::IncompatibleBasis,
          "complex identity is evaluated on complex-gaussian spaces");
  require(u.n() == space.n, ErrorCode::ParameterOutOfRange, "polynomial variable count differs from the space");
  require(rule.dim == space.chart_dimension(), ErrorCode::PointOutsideChart, "rule does not match the chart");
  if (rule.tail_estimate > tolerance)
    fail(ErrorCode::NonIntegrable,
         "weighted tail " + std::to_string(rule.tail_estimate) + " exceeds " + std::to_string(tolerance));
  const int n = space.n;
  const ComplexPolynomial lap = weighted_dbar_laplacian(u);
  const ComplexPolynomial ubar = u.conjugate();
  ComplexPolynomial lhs_integrand(n);
  std::vector<ComplexPolynomial> dbar, ddbar;
  for (int i = 0; i < n; ++i) {
    lhs_integrand -= lap.dzbar(i) * ubar.dz(i);
    dbar.push_back(u.dzbar(i));
    for (int j = 0; j < n; ++j) ddbar.push_back(u.dzbar(i).dzbar(j));
  }
  const auto density = density_at_nodes(space, rule);
  cplx lhs = 0;
  double hess = 0, grad = 0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const auto x = rule.node(q);
    const double w = rule.weights[q] * density[q];
    lhs += w * lhs_integrand.at_chart(x);
    for (const auto& p : ddbar) hess += w * std::norm(p.at_chart(x));
    for (const auto& p : dbar) grad += w * std::norm(p.at_chart(x));
  }
  const double rhs = hess + grad;
  IdentityReport r;
  r.identity_name = "complex_integral_identity";
  r.tolerance = tolerance;
  r.max_residual = std::abs(lhs - rhs) / (1 + std::abs(rhs));
  r.l2_residual = r.max_residual;
  r.values = {{"lhs_re", lhs.real()}, {"lhs_im", lhs.imag()}, {"rhs", rhs}, {"hessian_term", hess}, {"gradient_term", grad}};
  r.sample_description = "u = " + u.to_string() + " on " + space.descriptor() + ", " + std::to_string(rule.size()) + " nodes";
  r.decide();
  return r;
}

IdentityReport complex_identity_residual(const ModelSpace& space, const ComplexPolynomial& u, double tolerance) {
  require(space.kind == SpaceKind::ComplexGaussian, ErrorCode::IncompatibleBasis,
          "complex identity is evaluated on complex-gaussian spaces");
  return complex_identity_residual(space, u, make_rule(space, std::max(u.degree(), 1) + 4), tolerance);
}

IdentityReport soliton_identity_residual(const ModelSpace& space, bool allow_product, double tolerance) {
  const bool ok = space.kind == SpaceKind::GaussianEuclidean ||
                  (allow_product && space.kind == SpaceKind::SphereGaussianProduct);
  if (!ok) fail(ErrorCode::NotASoliton, space.descriptor() + " is not accepted as a gradient shrinking soliton");
  const double lambda = *space.ric_f_lower_bound;
  const int dim = space.chart_dimension();
  const QuadratureRule rule = make_rule(space, dim <= 3 ? 8 : 4);
  const auto density = density_at_nodes(space, rule);
  std::vector<double> raw(rule.size());
  double mass = 0, mean = 0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const PointGeometry geo = point_geometry(space, rule.node(q), 2);
    raw[q] = weighted_laplacian(geo, geo.weight).value() + 2 * lambda * geo.weight.value();
    const double w = rule.weights[q] * density[q];
    mass += w;
    mean += w * raw[q];
  }
  mean /= mass;
  const double c = mean / (2 * lambda);
  IdentityReport r;
  r.identity_name = "soliton_identity";
  r.tolerance = tolerance;
  double sum_sq = 0, raw_max = 0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double res = std::abs(raw[q] - 2 * lambda * c);
    raw_max = std::max(raw_max, std::abs(raw[q]));
    r.max_residual = std::max(r.max_residual, res);
    sum_sq += rule.weights[q] * density[q] * res * res;
  }
  r.values = {{"c", c}, {"lambda", lambda}, {"raw_max", raw_max}};
  r.sample_description = space.descriptor() + ", " + std::to_string(rule.size()) + " nodes";
  finish(r, sum_sq, mass);
  return r;
}

TestFunction normalize_in_measure(const ModelSpace& space, const TestFunction& u) {
  require_real(space);
  const MeasureSums s = measure_sums(space, u, lsi_rule(space, u));
  require(s.l2 > 0, ErrorCode::NormalizationViolated, "test function vanishes in L^2");
  const double scale = std::sqrt(s.mass / s.l2);
  return combine(u.name, {{scale, u}});
}

IdentityReport lsi_deficit(const ModelSpace& space, const TestFunction& u, std::optional<double> constant,
                           double tolerance) {
  require_real(space);
  require(space.ric_f_lower_bound && *space.ric_f_lower_bound > 0, ErrorCode::ParameterOutOfRange,
          "log-Sobolev check needs a positive Ric_f lower bound");
  const double C = constant.value_or(2 / *space.ric_f_lower_bound);
  const QuadratureRule rule = lsi_rule(space, u);
  const MeasureSums s = measure_sums(space, u, rule);
  const double l2 = s.l2 / s.mass;
  if (std::abs(l2 - 1) > tolerance)
    fail(ErrorCode::NormalizationViolated, "int u^2 dmu = " + std::to_string(l2) + ", expected 1");
  const double energy = s.energy / s.mass, entropy = s.entropy / s.mass;
  const double deficit = C * energy - entropy;
  IdentityReport r;
  r.identity_name = "log_sobolev_deficit";
  r.tolerance = tolerance;
  r.max_residual = std::max(0.0, -deficit);
  r.l2_residual = r.max_residual;
  r.values = {{"deficit", deficit}, {"C", C}, {"energy", energy}, {"entropy", entropy}, {"l2", l2}};
  r.sample_description = u.name + " on " + space.descriptor() + ", " + std::to_string(rule.size()) + " nodes";
  r.decide();
  return r;
}

}  // namespace wlap
