#pragma once

#include <functional>
#include <vector>

namespace wlap {

/// Finite Legendre series sum_k c_k P_k(t) on [-1, 1], P_k(1) = 1.
struct LegendreSeries {
  std::vector<double> coeffs;

  struct Values {
    double value = 0, d1 = 0, d2 = 0;  // d/dt and d^2/dt^2
  };

  Values eval(double t) const;
  double operator()(double t) const { return eval(t).value; }

  /// Projection of f onto P_0..P_degree using a Gauss-Legendre rule.
  static LegendreSeries fit(const std::function<double(double)>& f, int degree, int quad_points);
};

/// P_0(t)..P_n(t).
std::vector<double> legendre_values(int n, double t);

}  // namespace wlap
