#include "wlap/geometry.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "wlap/error.hpp"

namespace wlap {

TestFunction coordinate_function(int axis) {
  return {"x" + std::to_string(axis + 1), [axis](std::span<const Jet> x) {
            require(axis >= 0 && static_cast<std::size_t>(axis) < x.size(), ErrorCode::PointOutsideChart,
                    "coordinate axis out of range");
            return x[static_cast<std::size_t>(axis)];
          }};
}

TestFunction chart_monomial(std::vector<int> exponents) {
  std::string name = "x^(";
  for (std::size_t i = 0; i < exponents.size(); ++i) name += (i ? "," : "") + std::to_string(exponents[i]);
  name += ")";
  return {name, [e = std::move(exponents)](std::span<const Jet> x) {
            require(e.size() == x.size(), ErrorCode::PointOutsideChart, "monomial dimension mismatch");
            Jet acc = Jet::constant(x[0].dim(), x[0].order(), 1.0);
            for (std::size_t i = 0; i < e.size(); ++i)
              for (int k = 0; k < e[i]; ++k) acc = acc * x[i];
            return acc;
          }};
}

TestFunction ambient_monomial(const ModelSpace& space, std::vector<int> exponents, double scale) {
  std::string name = "X^(";
  for (std::size_t i = 0; i < exponents.size(); ++i) name += (i ? "," : "") + std::to_string(exponents[i]);
  name += ")";
  return {name, [space, e = std::move(exponents), scale](std::span<const Jet> x) {
            const auto X = embedding(space, x);
            require(e.size() == X.size(), ErrorCode::PointOutsideChart, "ambient monomial dimension mismatch");
            Jet acc = Jet::constant(x[0].dim(), x[0].order(), 1.0);
            for (std::size_t i = 0; i < e.size(); ++i)
              for (int k = 0; k < e[i]; ++k) acc = acc * (X[i] / scale);
            return acc;
          }};
}

TestFunction combine(std::string name, std::vector<std::pair<double, TestFunction>> terms) {
  for (const auto& [c, t] : terms)
    if (!t.jet) return {std::move(name), {}};
  return {std::move(name), [terms = std::move(terms)](std::span<const Jet> x) {
            Jet acc = Jet::constant(x[0].dim(), x[0].order(), 0.0);
            for (const auto& [c, t] : terms) acc += c * t.jet(x);
            return acc;
          }};
}

std::vector<Jet> chart_jets(std::span<const double> point, int order) {
  const int d = static_cast<int>(point.size());
  std::vector<Jet> x;
  x.reserve(point.size());
  for (int i = 0; i < d; ++i) x.push_back(Jet::variable(d, order, i, point[static_cast<std::size_t>(i)]));
  return x;
}

std::vector<Jet> invert_jet_matrix(std::span<const Jet> m, int dim) {
  const auto d = static_cast<std::size_t>(dim);
  Eigen::MatrixXd m0(dim, dim);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m0(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m[i * d + j].value();
  const Eigen::MatrixXd inv0 = m0.inverse();
  const int jd = m[0].dim(), order = m[0].order();
  std::vector<Jet> x(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      x[i * d + j] = Jet::constant(jd, order, inv0(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
  // Each step doubles the number of correct Taylor orders.
  for (int correct = 1; correct <= order; correct *= 2) {
    std::vector<Jet> mx(d * d), next(d * d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        Jet acc = m[i * d] * x[j];
        for (std::size_t k = 1; k < d; ++k) acc += m[i * d + k] * x[k * d + j];
        mx[i * d + j] = (i == j ? 2.0 : 0.0) - acc;
      }
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        Jet acc = x[i * d] * mx[j];
        for (std::size_t k = 1; k < d; ++k) acc += x[i * d + k] * mx[k * d + j];
        next[i * d + j] = acc;
      }
    x = std::move(next);
  }
  return x;
}

PointGeometry point_geometry(const ModelSpace& space, std::span<const double> point, int order) {
  require(order >= 2 && order <= Jet::kMaxOrder, ErrorCode::SymbolicDerivativeUnavailable,
          "geometry jets need 2 <= order <= " + std::to_string(Jet::kMaxOrder));
  PointGeometry geo;
  geo.dim = static_cast<int>(point.size());
  geo.order = order;
  geo.chart = chart_jets(point, order);
  geo.g = metric_jets(space, geo.chart);
  geo.ginv = invert_jet_matrix(geo.g, geo.dim);
  geo.weight = weight_jet(space, geo.chart);
  const auto d = static_cast<std::size_t>(geo.dim);
  // dg[l][i*d+j] = d_l g_ij
  std::vector<std::vector<Jet>> dg(d, std::vector<Jet>(d * d));
  for (std::size_t l = 0; l < d; ++l)
    for (std::size_t ij = 0; ij < d * d; ++ij) dg[l][ij] = geo.g[ij].derivative(static_cast<int>(l));
  geo.christoffel.assign(d * d * d, Jet{});
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i; j < d; ++j) {
        Jet acc;
        for (std::size_t l = 0; l < d; ++l) {
          Jet first_kind = dg[i][j * d + l] + dg[j][i * d + l] - dg[l][i * d + j];
          acc += geo.ginv[k * d + l] * first_kind;
        }
        acc *= 0.5;
        geo.christoffel[(k * d + i) * d + j] = acc;
        geo.christoffel[(k * d + j) * d + i] = acc;
      }
  return geo;
}

Jet metric_pairing(const PointGeometry& geo, const Jet& u, const Jet& v) {
  Jet acc;
  for (int i = 0; i < geo.dim; ++i) {
    const Jet ui = u.derivative(i);
    for (int j = 0; j < geo.dim; ++j) acc += geo.g_inv(i, j) * ui * v.derivative(j);
  }
  return acc;
}

Jet hessian(const PointGeometry& geo, const Jet& u, int i, int j) {
  Jet h = u.derivative(i).derivative(j);
  for (int k = 0; k < geo.dim; ++k) h -= geo.gamma(k, i, j) * u.derivative(k);
  return h;
}

double hessian_norm_squared(const PointGeometry& geo, const Jet& u) {
  const int d = geo.dim;
  Eigen::MatrixXd h(d, d), gi(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      h(i, j) = hessian(geo, u, i, j).value();
      gi(i, j) = geo.g_inv(i, j).value();
    }
  return (gi * h * gi * h.transpose()).trace();
}

Jet weighted_laplacian(const PointGeometry& geo, const Jet& u) {
  Jet acc;
  for (int i = 0; i < geo.dim; ++i)
    for (int j = 0; j < geo.dim; ++j) acc += geo.g_inv(i, j) * hessian(geo, u, i, j);
  acc -= metric_pairing(geo, geo.weight, u);
  return acc;
}

double bakry_emery_ricci(const PointGeometry& geo, int i, int j) {
  require(geo.order >= 3, ErrorCode::SymbolicDerivativeUnavailable, "Ricci tensor needs jets of order >= 3");
  double ric = 0;
  for (int k = 0; k < geo.dim; ++k) {
    ric += geo.gamma(k, i, j).derivative(k).value() - geo.gamma(k, i, k).derivative(j).value();
    for (int l = 0; l < geo.dim; ++l)
      ric += geo.gamma(k, k, l).value() * geo.gamma(l, i, j).value() -
             geo.gamma(k, j, l).value() * geo.gamma(l, i, k).value();
  }
  return ric + hessian(geo, geo.weight, i, j).value();
}

}  // namespace wlap
