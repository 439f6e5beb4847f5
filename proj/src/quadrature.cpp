#include "wlap/quadrature.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "wlap/error.hpp"

namespace wlap {
namespace {

// Symmetric Jacobi matrix with zero diagonal and the given off-diagonal.
Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solve_jacobi(const Eigen::VectorXd& offdiag, int n) {
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, offdiag, Eigen::ComputeEigenvectors);
  return es;
}

QuadratureRule one_dim(std::vector<double> nodes, std::vector<double> weights, std::string chart) {
  QuadratureRule r;
  r.dim = 1;
  r.nodes = std::move(nodes);
  r.weights = std::move(weights);
  r.chart = std::move(chart);
  return r;
}

}  // namespace

QuadratureRule tensor_product(const std::vector<QuadratureRule>& factors) {
  QuadratureRule r;
  std::size_t total = 1;
  for (const auto& f : factors) {
    r.dim += f.dim;
    total *= f.size();
  }
  r.nodes.assign(total * static_cast<std::size_t>(r.dim), 0.0);
  r.weights.assign(total, 1.0);
  std::vector<std::size_t> idx(factors.size(), 0);
  for (std::size_t q = 0; q < total; ++q) {
    std::size_t rem = q;
    for (std::size_t f = factors.size(); f-- > 0;) {
      idx[f] = rem % factors[f].size();
      rem /= factors[f].size();
    }
    std::size_t off = q * static_cast<std::size_t>(r.dim);
    for (std::size_t f = 0; f < factors.size(); ++f) {
      auto node = factors[f].node(idx[f]);
      std::copy(node.begin(), node.end(), r.nodes.begin() + static_cast<std::ptrdiff_t>(off));
      off += node.size();
      r.weights[q] *= factors[f].weights[idx[f]];
    }
  }
  for (const auto& f : factors) {
    r.tail_estimate += f.tail_estimate;
    if (!r.chart.empty()) r.chart += " x ";
    r.chart += f.chart;
  }
  r.factors = factors;
  return r;
}

QuadratureRule gauss_hermite(int points, double lambda) {
  require(points >= 1, ErrorCode::ParameterOutOfRange, "gauss_hermite needs at least one point");
  require(lambda > 0, ErrorCode::ParameterOutOfRange, "gauss_hermite needs lambda > 0");
  // Physicists' weight e^{-y^2}; x = y * sqrt(2 / lambda).
  Eigen::VectorXd off(std::max(points - 1, 0));
  for (int k = 1; k < points; ++k) off(k - 1) = std::sqrt(0.5 * k);
  const auto es = solve_jacobi(off, points);
  const double scale = std::sqrt(2.0 / lambda);
  std::vector<double> nodes(static_cast<std::size_t>(points)), weights(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    double y = es.eigenvalues()(i);
    // Newton polish on the orthonormal Hermite polynomial p_points(y).
    for (int it = 0; it < 3 && points > 1; ++it) {
      double prev = std::pow(std::numbers::pi, -0.25);
      double cur = std::sqrt(2.0) * y * prev;
      for (int k = 1; k < points; ++k) {
        const double next = std::sqrt(2.0 / (k + 1)) * y * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
        prev = cur;
        cur = next;
      }
      const double deriv = std::sqrt(2.0 * points) * prev;  // p_n' = sqrt(2n) p_{n-1}
      if (deriv == 0.0) break;
      const double step = cur / deriv;
      y -= step;
      if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(y))) break;
    }
    // Christoffel number with the Gaussian divided out: 1 / sum psi_k(y)^2.
    double prev = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * y * y);
    double cur = std::sqrt(2.0) * y * prev;
    double sum = prev * prev;
    if (points > 1) sum += cur * cur;
    for (int k = 1; k + 1 < points; ++k) {
      const double next = std::sqrt(2.0 / (k + 1)) * y * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
      prev = cur;
      cur = next;
      sum += cur * cur;
    }
    nodes[static_cast<std::size_t>(i)] = y * scale;
    weights[static_cast<std::size_t>(i)] = scale / sum;
  }
  return one_dim(std::move(nodes), std::move(weights), "gauss-hermite");
}

QuadratureRule gauss_gegenbauer(int points, double alpha) {
  require(points >= 1, ErrorCode::ParameterOutOfRange, "gauss_gegenbauer needs at least one point");
  require(alpha >= 0, ErrorCode::ParameterOutOfRange, "gauss_gegenbauer needs alpha >= 0");
  Eigen::VectorXd off(std::max(points - 1, 0));
  for (int k = 1; k < points; ++k) {
    const double kk = k;
    off(k - 1) = std::sqrt(kk * (kk + 2 * alpha) / (4 * (kk + alpha) * (kk + alpha) - 1));
  }
  const auto es = solve_jacobi(off, points);
  const double mu0 = std::sqrt(std::numbers::pi) * std::tgamma(alpha + 1) / std::tgamma(alpha + 1.5);
  std::vector<double> nodes(static_cast<std::size_t>(points)), weights(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    double x = es.eigenvalues()(i);
    const double v = es.eigenvectors()(0, i);
    double w = mu0 * v * v;
    // Newton polish on the orthonormal recurrence; Christoffel weights.
    for (int pass = 0; pass < 3; ++pass) {
      double p0 = 1 / std::sqrt(mu0), p1 = 0, d0 = 0, d1 = 0, sum = p0 * p0;
      for (int k = 1; k <= points; ++k) {
        const double bk = k < points ? off(k - 1) : std::sqrt(static_cast<double>(points) * (points + 2 * alpha) /
                                                     (4 * (points + alpha) * (points + alpha) - 1));
        const double bprev = k >= 2 ? off(k - 2) : 0.0;
        const double p2 = (x * p0 - bprev * p1) / bk;
        const double d2 = (p0 + x * d0 - bprev * d1) / bk;
        p1 = p0;
        p0 = p2;
        d1 = d0;
        d0 = d2;
        if (k < points) sum += p0 * p0;
      }
      if (d0 != 0) x -= p0 / d0;
      w = 1 / sum;
    }
    nodes[static_cast<std::size_t>(i)] = x;
    weights[static_cast<std::size_t>(i)] = w;
  }
  // Symmetrize to remove eigen-solver noise.
  for (int i = 0; i < points / 2; ++i) {
    const auto a = static_cast<std::size_t>(i), b = static_cast<std::size_t>(points - 1 - i);
    const double x = 0.5 * (nodes[b] - nodes[a]);
    nodes[a] = -x;
    nodes[b] = x;
    const double w = 0.5 * (weights[a] + weights[b]);
    weights[a] = weights[b] = w;
  }
  if (points % 2 == 1) nodes[static_cast<std::size_t>(points / 2)] = 0.0;
  return one_dim(std::move(nodes), std::move(weights), "gauss-gegenbauer");
}

QuadratureRule gauss_legendre(int points, double a, double b) {
  QuadratureRule r = gauss_legendre(points);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (auto& x : r.nodes) x = mid + half * x;
  for (auto& w : r.weights) w *= half;
  r.chart = "gauss-legendre";
  return r;
}

QuadratureRule graded_gauss_legendre(double a, double b, std::span<const double> breaks, int points_per_panel,
                                     double panel_width, int grading_levels) {
  require(b > a, ErrorCode::ParameterOutOfRange, "graded_gauss_legendre needs a < b");
  std::vector<double> edges{a, b};
  for (double x : breaks)
    if (x > a && x < b) edges.push_back(x);
  std::sort(edges.begin(), edges.end());
  // Uniform panels, then geometric refinement next to interior breaks.
  std::vector<double> cuts;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double lo = edges[i], hi = edges[i + 1];
    const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / panel_width)));
    for (int p = 0; p < panels; ++p) cuts.push_back(lo + (hi - lo) * p / panels);
  }
  cuts.push_back(b);
  for (double x : breaks) {
    if (!(x > a && x < b)) continue;
    for (int level = 1; level <= grading_levels; ++level) {
      const double d = panel_width * std::pow(0.25, level);
      if (x - d > a) cuts.push_back(x - d);
      if (x + d < b) cuts.push_back(x + d);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const QuadratureRule base = gauss_legendre(points_per_panel);
  std::vector<double> nodes, weights;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double half = 0.5 * (cuts[i + 1] - cuts[i]), mid = 0.5 * (cuts[i + 1] + cuts[i]);
    for (std::size_t q = 0; q < base.size(); ++q) {
      nodes.push_back(mid + half * base.nodes[q]);
      weights.push_back(half * base.weights[q]);
    }
  }
  return one_dim(std::move(nodes), std::move(weights), "graded-gauss-legendre");
}

QuadratureRule periodic_trapezoid(int points) {
  require(points >= 1, ErrorCode::ParameterOutOfRange, "periodic_trapezoid needs at least one point");
  std::vector<double> nodes(static_cast<std::size_t>(points)), weights(static_cast<std::size_t>(points));
  const double h = 2 * std::numbers::pi / points;
  for (int i = 0; i < points; ++i) {
    nodes[static_cast<std::size_t>(i)] = h * i;
    weights[static_cast<std::size_t>(i)] = h;
  }
  return one_dim(std::move(nodes), std::move(weights), "periodic");
}

}  // namespace wlap
