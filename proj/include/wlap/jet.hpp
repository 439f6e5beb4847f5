#pragma once

// Truncated multivariate Taylor arithmetic.
//
// A Jet holds the Taylor coefficients of a smooth function around a point,
// up to a fixed total order, in `dim` variables. Coefficients are stored in
// graded order (all monomials of degree d precede those of degree d+1), so a
// jet of lower order is a prefix of a jet of higher order and mixed-order
// arithmetic simply truncates to the smaller order.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace wlap {

class Jet {
 public:
  static constexpr int kMaxDim = 8;
  static constexpr int kMaxOrder = 6;

  Jet() = default;

  static Jet constant(int dim, int order, double value);
  static Jet variable(int dim, int order, int axis, double value);

  int dim() const noexcept { return dim_; }
  int order() const noexcept { return order_; }
  double value() const noexcept { return c_.empty() ? 0.0 : c_[0]; }

  /// Partial derivative at the expansion point; `axes` lists one entry per
  /// differentiation (e.g. {0, 0, 1} is d^3/dx0^2 dx1).
  double partial(std::initializer_list<int> axes) const;
  double partial(std::span<const int> axes) const;

  /// Jet of the partial derivative along `axis`; order drops by one.
  Jet derivative(int axis) const;

  Jet truncated(int order) const;

  Jet& operator+=(const Jet& other);
  Jet& operator-=(const Jet& other);
  Jet& operator*=(const Jet& other);
  Jet& operator+=(double s);
  Jet& operator-=(double s);
  Jet& operator*=(double s);
  Jet& operator/=(double s);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, double s) { return a -= s; }
  friend Jet operator-(double s, const Jet& a) { return -a + s; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) { return a /= s; }
  friend Jet operator/(double s, const Jet& a);
  Jet operator-() const;

  /// g(a) given g and its derivatives g^(k)(a0), k = 0..order.
  Jet compose(std::span<const double> derivatives) const;

  std::span<const double> coefficients() const { return c_; }

 private:
  Jet(int dim, int order);
  void merge_order(const Jet& other);

  int dim_ = 0;
  int order_ = 0;
  std::vector<double> c_;
};

Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet sqrt(const Jet& a);
Jet square(const Jet& a);

/// Number of monomials of total degree <= order in dim variables.
std::size_t jet_size(int dim, int order);

}  // namespace wlap
