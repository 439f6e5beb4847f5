#include "wlap/legendre.hpp"

#include "wlap/quadrature.hpp"

namespace wlap {

std::vector<double> legendre_values(int n, double t) {
  std::vector<double> p(static_cast<std::size_t>(n + 1), 0.0);
  p[0] = 1.0;
  if (n >= 1) p[1] = t;
  for (int k = 1; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    p[i + 1] = ((2 * k + 1) * t * p[i] - k * p[i - 1]) / (k + 1);
  }
  return p;
}

LegendreSeries::Values LegendreSeries::eval(double t) const {
  Values out;
  if (coeffs.empty()) return out;
  // P_{k+1}' = P_{k-1}' + (2k+1) P_k, and the same recursion one level up.
  double p_prev = 0, p = 1, d_prev = 0, d = 0, dd_prev = 0, dd = 0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    out.value += coeffs[k] * p;
    out.d1 += coeffs[k] * d;
    out.d2 += coeffs[k] * dd;
    const double kk = static_cast<double>(k);
    const double p_next = k == 0 ? t : ((2 * kk + 1) * t * p - kk * p_prev) / (kk + 1);
    const double d_next = d_prev + (2 * kk + 1) * p;
    const double dd_next = dd_prev + (2 * kk + 1) * d;
    p_prev = p;
    p = p_next;
    d_prev = d;
    d = d_next;
    dd_prev = dd;
    dd = dd_next;
  }
  return out;
}

LegendreSeries LegendreSeries::fit(const std::function<double(double)>& f, int degree, int quad_points) {
  const QuadratureRule rule = gauss_legendre(quad_points);
  LegendreSeries s;
  s.coeffs.assign(static_cast<std::size_t>(degree + 1), 0.0);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double t = rule.nodes[q];
    const double fv = f(t) * rule.weights[q];
    const auto p = legendre_values(degree, t);
    for (int k = 0; k <= degree; ++k) s.coeffs[static_cast<std::size_t>(k)] += (2 * k + 1) * 0.5 * fv * p[static_cast<std::size_t>(k)];
  }
  return s;
}

}  // namespace wlap
