#include "wlap/spaces.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

#include "wlap/error.hpp"
#include "wlap/operators.hpp"

namespace wlap {
namespace {

constexpr double kTruncationLevel = 1e-12;
constexpr double kMaxPerturbation = 1.0;
constexpr std::size_t kMaxPerturbationTerms = 12;

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    fail(ErrorCode::ParameterOutOfRange, "parameter '" + key + "' is not a number: '" + text + "'");
  }
}

int parse_int(const std::string& key, const std::string& text) {
  const double v = parse_real(key, text);
  if (v != std::floor(v) || std::abs(v) > 1e6)
    fail(ErrorCode::ParameterOutOfRange, "parameter '" + key + "' must be an integer");
  return static_cast<int>(v);
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_real(key, item));
  }
  return out;
}

void check_keys(const SpaceDescriptor& desc, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : desc.params) {
    const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
    if (!known) fail(ErrorCode::ParameterOutOfRange, "unknown parameter '" + key + "' for kind '" + desc.kind + "'");
  }
}

template <class T, class Parse>
T param_or(const SpaceDescriptor& desc, const std::string& key, T fallback, Parse parse) {
  auto it = desc.params.find(key);
  return it == desc.params.end() ? fallback : parse(key, it->second);
}

// Legendre series evaluated on a jet argument.
Jet legendre_jet(const LegendreSeries& s, const Jet& t) {
  Jet p_prev = Jet::constant(t.dim(), t.order(), 0.0);
  Jet p = Jet::constant(t.dim(), t.order(), 1.0);
  Jet sum = Jet::constant(t.dim(), t.order(), 0.0);
  for (std::size_t k = 0; k < s.coeffs.size(); ++k) {
    sum += s.coeffs[k] * p;
    const double kk = static_cast<double>(k);
    Jet next = k == 0 ? t : ((2 * kk + 1) / (kk + 1)) * (t * p) - (kk / (kk + 1)) * p_prev;
    p_prev = std::move(p);
    p = std::move(next);
  }
  return sum;
}

void require_chart_dim(const ModelSpace& space, std::size_t dim) {
  if (dim != static_cast<std::size_t>(space.chart_dimension()))
    fail(ErrorCode::PointOutsideChart, "point has " + std::to_string(dim) + " coordinates, chart needs " +
                                           std::to_string(space.chart_dimension()));
}

}  // namespace

std::string_view to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::GaussianEuclidean: return "gaussian";
    case SpaceKind::RoundSphere: return "sphere";
    case SpaceKind::SphereGaussianProduct: return "product";
    case SpaceKind::ComplexGaussian: return "complex-gaussian";
    case SpaceKind::FanoCP1: return "fano-cp1";
  }
  return "unknown";
}

double Cp1Geometry::curvature(double t) const {
  const auto s = sigma.eval(t);
  const double laplace_sigma = (1 - t * t) * s.d2 - 2 * t * s.d1;
  return std::exp(-2 * s.value) * (1 - laplace_sigma);
}

int ModelSpace::chart_dimension() const {
  switch (kind) {
    case SpaceKind::ComplexGaussian: return 2 * n;
    case SpaceKind::FanoCP1: return 2;
    default: return n;
  }
}

int ModelSpace::sphere_dimension() const {
  switch (kind) {
    case SpaceKind::RoundSphere: return n;
    case SpaceKind::SphereGaussianProduct: return n - k;
    default: return 0;
  }
}

std::string ModelSpace::descriptor() const {
  std::ostringstream os;
  os.precision(17);
  os << to_string(kind) << ':';
  switch (kind) {
    case SpaceKind::GaussianEuclidean: os << "n=" << n << ",lambda=" << lambda; break;
    case SpaceKind::RoundSphere: os << "n=" << n << ",radius=" << radius; break;
    case SpaceKind::SphereGaussianProduct: os << "n=" << n << ",k=" << k; break;
    case SpaceKind::ComplexGaussian: os << "n=" << n; break;
    case SpaceKind::FanoCP1: {
      os << "pert=";
      if (cp1->perturbation.empty()) os << 0;
      for (std::size_t i = 0; i < cp1->perturbation.size(); ++i) os << (i ? ";" : "") << cp1->perturbation[i];
      if (cp1->area_scale != 1.0) os << ",area_scale=" << cp1->area_scale;
      break;
    }
  }
  return os.str();
}

SpaceDescriptor parse_space_descriptor(const std::string& text) {
  SpaceDescriptor desc;
  const std::string t = trim(text);
  const auto colon = t.find(':');
  desc.kind = trim(t.substr(0, colon));
  std::transform(desc.kind.begin(), desc.kind.end(), desc.kind.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (colon == std::string::npos) return desc;
  std::stringstream ss(t.substr(colon + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) fail(ErrorCode::ParameterOutOfRange, "expected key=value, got '" + item + "'");
    desc.params[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
  }
  return desc;
}

ModelSpace gaussian_space(int n, double lambda) {
  require(n >= 1 && n <= 6, ErrorCode::ParameterOutOfRange, "gaussian needs 1 <= n <= 6");
  require(lambda > 0 && std::isfinite(lambda), ErrorCode::ParameterOutOfRange, "gaussian needs lambda > 0");
  ModelSpace s;
  s.kind = SpaceKind::GaussianEuclidean;
  s.n = n;
  s.lambda = lambda;
  s.real_dimension = n;
  s.ric_f_lower_bound = lambda;
  return s;
}

ModelSpace sphere_space(int n, double radius) {
  require(n >= 2 && n <= 5, ErrorCode::ParameterOutOfRange, "sphere needs 2 <= n <= 5");
  require(radius > 0 && std::isfinite(radius), ErrorCode::ParameterOutOfRange, "sphere needs radius > 0");
  ModelSpace s;
  s.kind = SpaceKind::RoundSphere;
  s.n = n;
  s.radius = radius;
  s.real_dimension = n;
  s.lambda = 0;
  s.ric_f_lower_bound = (n - 1) / (radius * radius);
  return s;
}

ModelSpace product_space(int n, int k) {
  require(k >= 1, ErrorCode::ParameterOutOfRange, "product needs k >= 1");
  require(n - k >= 2, ErrorCode::ParameterOutOfRange, "product needs n - k >= 2");
  require(n <= 6, ErrorCode::ParameterOutOfRange, "product needs n <= 6");
  ModelSpace s;
  s.kind = SpaceKind::SphereGaussianProduct;
  s.n = n;
  s.k = k;
  s.lambda = 0.5;
  s.radius = std::sqrt(2.0 * (n - k - 1));
  s.real_dimension = n;
  s.ric_f_lower_bound = 0.5;
  return s;
}

ModelSpace complex_gaussian_space(int n) {
  require(n >= 1 && n <= 3, ErrorCode::ParameterOutOfRange, "complex-gaussian needs 1 <= n <= 3");
  ModelSpace s;
  s.kind = SpaceKind::ComplexGaussian;
  s.n = n;
  s.real_dimension = 2 * n;
  s.convention = WeightConvention::Complex;
  s.lambda = 0;
  return s;
}

ModelSpace fano_cp1_space(std::vector<double> perturbation, double area_scale) {
  require(perturbation.size() <= kMaxPerturbationTerms, ErrorCode::ParameterOutOfRange,
          "fano-cp1 accepts at most 12 perturbation coefficients");
  for (double p : perturbation)
    require(std::isfinite(p) && std::abs(p) <= kMaxPerturbation, ErrorCode::ParameterOutOfRange,
            "fano-cp1 perturbation coefficients must lie in [-1, 1]");
  require(area_scale > 0 && std::isfinite(area_scale), ErrorCode::ParameterOutOfRange, "area_scale must be > 0");
  while (!perturbation.empty() && perturbation.back() == 0.0) perturbation.pop_back();

  auto geo = std::make_shared<Cp1Geometry>();
  geo->perturbation = perturbation;
  geo->area_scale = area_scale;
  LegendreSeries shape;
  shape.coeffs.assign(perturbation.size() + 1, 0.0);
  std::copy(perturbation.begin(), perturbation.end(), shape.coeffs.begin() + 1);
  const QuadratureRule gl = gauss_legendre(256);
  double integral = 0;
  for (std::size_t q = 0; q < gl.size(); ++q) integral += gl.weights[q] * std::exp(2 * shape(gl.nodes[q]));
  geo->log_scale = perturbation.empty() ? 0.5 * std::log(area_scale) : 0.5 * std::log(2.0 * area_scale / integral);
  geo->sigma = shape;
  geo->sigma.coeffs[0] = geo->log_scale;
  double area = 0;
  for (std::size_t q = 0; q < gl.size(); ++q) area += gl.weights[q] * std::exp(2 * geo->sigma(gl.nodes[q]));
  geo->area = 2 * std::numbers::pi * area;

  ModelSpace s;
  s.kind = SpaceKind::FanoCP1;
  s.n = 1;
  s.real_dimension = 2;
  s.convention = WeightConvention::Complex;
  s.lambda = 0;
  s.cp1 = geo;
  const RicciPotential potential = ricci_potential_cp1(s);
  geo->potential = potential.series;
  geo->potential_residual = potential.residual_max;
  return s;
}

ModelSpace make_space(const SpaceDescriptor& desc) {
  const auto real = [](const std::string& k, const std::string& v) { return parse_real(k, v); };
  const auto integer = [](const std::string& k, const std::string& v) { return parse_int(k, v); };
  if (desc.kind == "gaussian") {
    check_keys(desc, {"n", "lambda"});
    return gaussian_space(param_or(desc, "n", 1, integer), param_or(desc, "lambda", 0.5, real));
  }
  if (desc.kind == "sphere") {
    check_keys(desc, {"n", "radius", "r"});
    const double r = param_or(desc, "radius", param_or(desc, "r", 1.0, real), real);
    return sphere_space(param_or(desc, "n", 2, integer), r);
  }
  if (desc.kind == "product") {
    check_keys(desc, {"n", "k"});
    return product_space(param_or(desc, "n", 3, integer), param_or(desc, "k", 1, integer));
  }
  if (desc.kind == "complex-gaussian") {
    check_keys(desc, {"n"});
    return complex_gaussian_space(param_or(desc, "n", 1, integer));
  }
  if (desc.kind == "fano-cp1") {
    check_keys(desc, {"pert", "area_scale"});
    const auto list = [](const std::string& k, const std::string& v) { return parse_list(k, v); };
    return fano_cp1_space(param_or(desc, "pert", std::vector<double>{}, list), param_or(desc, "area_scale", 1.0, real));
  }
  fail(ErrorCode::UnknownKind, "unknown space kind '" + desc.kind + "'");
}

double weight_at(const ModelSpace& space, std::span<const double> point) {
  require_chart_dim(space, point.size());
  for (double x : point)
    if (!std::isfinite(x)) fail(ErrorCode::PointOutsideChart, "non-finite coordinate");
  const auto check_angles = [&](int angles) {
    for (int i = 0; i < angles; ++i) {
      const double th = point[static_cast<std::size_t>(i)];
      const double upper = i + 1 == angles ? 2 * std::numbers::pi : std::numbers::pi;
      if (th < 0 || th > upper) fail(ErrorCode::PointOutsideChart, "angle out of range");
    }
  };
  switch (space.kind) {
    case SpaceKind::GaussianEuclidean: {
      double r2 = 0;
      for (double x : point) r2 += x * x;
      return 0.5 * space.lambda * r2;
    }
    case SpaceKind::RoundSphere: check_angles(space.n); return 0.0;
    case SpaceKind::SphereGaussianProduct: {
      const int d = space.sphere_dimension();
      check_angles(d);
      double t2 = 0;
      for (int i = d; i < space.n; ++i) t2 += point[static_cast<std::size_t>(i)] * point[static_cast<std::size_t>(i)];
      return 0.25 * t2;
    }
    case SpaceKind::ComplexGaussian: {
      double r2 = 0;
      for (double x : point) r2 += x * x;
      return -r2;
    }
    case SpaceKind::FanoCP1: check_angles(2); return space.cp1->potential(std::cos(point[0]));
  }
  return 0.0;
}

Jet weight_jet(const ModelSpace& space, std::span<const Jet> chart) {
  require_chart_dim(space, chart.size());
  const Jet& x0 = chart[0];
  Jet acc = Jet::constant(x0.dim(), x0.order(), 0.0);
  switch (space.kind) {
    case SpaceKind::GaussianEuclidean:
      for (const Jet& x : chart) acc += x * x;
      return (0.5 * space.lambda) * acc;
    case SpaceKind::RoundSphere: return acc;
    case SpaceKind::SphereGaussianProduct:
      for (std::size_t i = static_cast<std::size_t>(space.sphere_dimension()); i < chart.size(); ++i) acc += chart[i] * chart[i];
      return 0.25 * acc;
    case SpaceKind::ComplexGaussian:
      for (const Jet& x : chart) acc += x * x;
      return -acc;
    case SpaceKind::FanoCP1: return legendre_jet(space.cp1->potential, cos(chart[0]));
  }
  return acc;
}

std::vector<Jet> embedding(const ModelSpace& space, std::span<const Jet> chart) {
  require_chart_dim(space, chart.size());
  std::vector<Jet> out;
  const auto sphere = [&](int d, double r) {
    // (theta_1..theta_{d-1}, phi) -> R^{d+1}
    Jet prod = Jet::constant(chart[0].dim(), chart[0].order(), r);
    for (int i = 0; i + 1 < d; ++i) {
      out.push_back(prod * cos(chart[static_cast<std::size_t>(i)]));
      prod = prod * sin(chart[static_cast<std::size_t>(i)]);
    }
    out.push_back(prod * cos(chart[static_cast<std::size_t>(d - 1)]));
    out.push_back(prod * sin(chart[static_cast<std::size_t>(d - 1)]));
  };
  switch (space.kind) {
    case SpaceKind::GaussianEuclidean:
    case SpaceKind::ComplexGaussian: out.assign(chart.begin(), chart.end()); break;
    case SpaceKind::RoundSphere: sphere(space.n, space.radius); break;
    case SpaceKind::SphereGaussianProduct:
      sphere(space.sphere_dimension(), space.radius);
      for (std::size_t i = static_cast<std::size_t>(space.sphere_dimension()); i < chart.size(); ++i) out.push_back(chart[i]);
      break;
    case SpaceKind::FanoCP1: {
      // Conformal to the round sphere; the round embedding is returned for
      // evaluating ambient test functions.
      sphere(2, 1.0);
      break;
    }
  }
  return out;
}

std::vector<Jet> metric_jets(const ModelSpace& space, std::span<const Jet> chart) {
  const std::size_t d = chart.size();
  require_chart_dim(space, d);
  std::vector<Jet> g(d * d);
  if (space.kind == SpaceKind::FanoCP1) {
    const Jet conformal = exp(2.0 * legendre_jet(space.cp1->sigma, cos(chart[0])));
    const Jet s = sin(chart[0]);
    g[0] = conformal.truncated(chart[0].order() - 1);
    g[1] = g[2] = Jet::constant(chart[0].dim(), chart[0].order() - 1, 0.0);
    g[3] = (conformal * s * s).truncated(chart[0].order() - 1);
    return g;
  }
  const auto x = embedding(space, chart);
  std::vector<std::vector<Jet>> dx(d);
  for (std::size_t i = 0; i < d; ++i)
    for (const Jet& xa : x) dx[i].push_back(xa.derivative(static_cast<int>(i)));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      Jet acc = dx[i][0] * dx[j][0];
      for (std::size_t a = 1; a < x.size(); ++a) acc += dx[i][a] * dx[j][a];
      g[i * d + j] = acc;
      g[j * d + i] = acc;
    }
  }
  return g;
}

QuadratureRule make_rule(const ModelSpace& space, int points) {
  require(points >= 1, ErrorCode::ParameterOutOfRange, "rule needs at least one point");
  const auto sphere_rule = [&](int d, double r) {
    std::vector<QuadratureRule> f;
    for (int i = 1; i < d; ++i) {
      QuadratureRule q = gauss_gegenbauer(points, 0.5 * (d - i - 1));
      for (auto& t : q.nodes) t = std::acos(t);
      q.chart = "colatitude";
      f.push_back(std::move(q));
    }
    QuadratureRule phi = periodic_trapezoid(2 * points);
    for (auto& w : phi.weights) w *= std::pow(r, d);
    phi.chart = "longitude";
    f.push_back(std::move(phi));
    return f;
  };
  switch (space.kind) {
    case SpaceKind::GaussianEuclidean:
      return tensor_product(std::vector<QuadratureRule>(static_cast<std::size_t>(space.n), gauss_hermite(points, space.lambda)));
    case SpaceKind::ComplexGaussian:
      return tensor_product(std::vector<QuadratureRule>(static_cast<std::size_t>(2 * space.n), gauss_hermite(points, 2.0)));
    case SpaceKind::RoundSphere: return tensor_product(sphere_rule(space.n, space.radius));
    case SpaceKind::SphereGaussianProduct: {
      QuadratureRule s = tensor_product(sphere_rule(space.sphere_dimension(), space.radius));
      QuadratureRule g = tensor_product(std::vector<QuadratureRule>(static_cast<std::size_t>(space.k), gauss_hermite(points, 0.5)));
      return tensor_product({s, g});
    }
    case SpaceKind::FanoCP1: {
      QuadratureRule lat = gauss_legendre(points);
      for (std::size_t q = 0; q < lat.size(); ++q) {
        lat.weights[q] *= std::exp(2 * space.cp1->sigma(lat.nodes[q]));
        lat.nodes[q] = std::acos(lat.nodes[q]);
      }
      lat.chart = "colatitude";
      QuadratureRule phi = periodic_trapezoid(2 * points + 8);
      phi.chart = "longitude";
      return tensor_product({lat, phi});
    }
  }
  return {};
}

double truncation_radius(const ModelSpace& space) {
  const double level = -std::log(kTruncationLevel);
  switch (space.kind) {
    case SpaceKind::GaussianEuclidean: return std::sqrt(2 * level / space.lambda);
    case SpaceKind::SphereGaussianProduct: return std::sqrt(2 * level / 0.5);
    case SpaceKind::ComplexGaussian: return std::sqrt(level);
    default: fail(ErrorCode::ParameterOutOfRange, "space has a compact chart; no truncation radius");
  }
}

QuadratureRule truncated_rule(const ModelSpace& space, double radius, int points_per_axis) {
  require(radius > 0, ErrorCode::ParameterOutOfRange, "truncation radius must be positive");
  int axes = 0;
  double per_axis_tail = 0;
  switch (space.kind) {
    case SpaceKind::GaussianEuclidean:
      axes = space.n;
      per_axis_tail = std::erfc(radius * std::sqrt(space.lambda / 2));
      break;
    case SpaceKind::ComplexGaussian:
      axes = 2 * space.n;
      per_axis_tail = std::erfc(radius);
      break;
    default: fail(ErrorCode::ParameterOutOfRange, "truncated rules exist for flat Gaussian charts only");
  }
  QuadratureRule axis = gauss_legendre(points_per_axis, -radius, radius);
  axis.tail_estimate = per_axis_tail;
  return tensor_product(std::vector<QuadratureRule>(static_cast<std::size_t>(axes), axis));
}

std::vector<double> density_at_nodes(const ModelSpace& space, const QuadratureRule& rule) {
  require(rule.dim == space.chart_dimension(), ErrorCode::PointOutsideChart, "rule does not match the space chart");
  std::vector<double> out(rule.size());
  const double sign = space.convention == WeightConvention::Real ? -1.0 : 1.0;
  for (std::size_t q = 0; q < rule.size(); ++q) out[q] = std::exp(sign * weight_at(space, rule.node(q)));
  return out;
}

double weighted_volume(const ModelSpace& space, const QuadratureRule& rule, double tolerance) {
  if (rule.tail_estimate > tolerance)
    fail(ErrorCode::TruncationInsufficient,
         "estimated weighted tail " + std::to_string(rule.tail_estimate) + " exceeds " + std::to_string(tolerance));
  const auto density = density_at_nodes(space, rule);
  double sum = 0;
  for (std::size_t q = 0; q < rule.size(); ++q) sum += rule.weights[q] * density[q];
  return sum;
}

std::vector<CatalogEntry> catalog() {
  std::vector<CatalogEntry> out{
      {"complex-gaussian", "n in [1,3] (complex dimension)",
       "lambda_1(Delta_F) >= 1 (complex convention, F = -|z|^2, gradient shrinking Kaehler-Ricci soliton)",
       "closed form: 0, 1, 2, ... ; the eigenvalue 1 has multiplicity growing with truncation degree"},
      {"fano-cp1", "pert = list of up to 12 zonal coefficients in [-1,1] separated by ';'",
       "lambda_1(Delta_F) >= 1 (complex convention, area 4 pi)",
       "closed form for pert = 0: l(l+1)/2; equality lambda_1 = 1 for every pert"},
      {"gaussian", "n in [1,6], lambda > 0", "ric_f_lower_bound = lambda (f = lambda |x|^2 / 2)",
       "closed form: k * lambda, k = 0, 1, 2, ..."},
      {"product", "n <= 6, k >= 1, n - k >= 2 (sphere radius sqrt(2(n-k-1)), f = |t|^2/4)",
       "ric_f_lower_bound = 1/2", "closed form: l(l+n-k-1)/r^2 + j/2"},
      {"sphere", "n in [2,5], radius > 0 (f = 0)", "ric_f_lower_bound = (n-1)/radius^2",
       "closed form: l(l+n-1)/radius^2"},
  };
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return out;
}

}  // namespace wlap
