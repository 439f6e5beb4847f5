#pragma once

// Polynomials in z and z-bar on C^n with complex coefficients.

#include <complex>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace wlap {

using cplx = std::complex<double>;

/// Exponent pair (alpha, beta) of the monomial z^alpha zbar^beta.
struct Bidegree {
  std::vector<int> alpha;
  std::vector<int> beta;

  int holomorphic_degree() const;
  int antiholomorphic_degree() const;
  int total_degree() const { return holomorphic_degree() + antiholomorphic_degree(); }
  auto operator<=>(const Bidegree&) const = default;
};

class ComplexPolynomial {
 public:
  explicit ComplexPolynomial(int n = 1) : n_(n) {}

  static ComplexPolynomial constant(int n, cplx c);
  static ComplexPolynomial monomial(std::vector<int> alpha, std::vector<int> beta, cplx c = 1.0);
  static ComplexPolynomial z(int n, int i);
  static ComplexPolynomial zbar(int n, int i);

  int n() const noexcept { return n_; }
  const std::map<Bidegree, cplx>& terms() const noexcept { return terms_; }
  bool is_zero(double tol = 0.0) const;
  int degree() const;

  ComplexPolynomial& operator+=(const ComplexPolynomial& o);
  ComplexPolynomial& operator-=(const ComplexPolynomial& o);
  ComplexPolynomial& operator*=(cplx c);
  friend ComplexPolynomial operator+(ComplexPolynomial a, const ComplexPolynomial& b) { return a += b; }
  friend ComplexPolynomial operator-(ComplexPolynomial a, const ComplexPolynomial& b) { return a -= b; }
  friend ComplexPolynomial operator*(ComplexPolynomial a, cplx c) { return a *= c; }
  friend ComplexPolynomial operator*(cplx c, ComplexPolynomial a) { return a *= c; }
  friend ComplexPolynomial operator*(const ComplexPolynomial& a, const ComplexPolynomial& b);

  /// d/dz_i and d/dzbar_i.
  ComplexPolynomial dz(int i) const;
  ComplexPolynomial dzbar(int i) const;
  /// Complex conjugate function.
  ComplexPolynomial conjugate() const;

  /// Value at z (one complex number per coordinate).
  cplx operator()(std::span<const cplx> z) const;
  /// Value at a real chart point (x1, y1, ..., xn, yn).
  cplx at_chart(std::span<const double> xy) const;

  /// Exact integral against e^{-|z|^2} dV (Lebesgue on R^{2n}).
  cplx gaussian_integral() const;

  std::string to_string() const;

 private:
  void add(const Bidegree& d, cplx c);
  int n_;
  std::map<Bidegree, cplx> terms_;
};

/// Delta_F on C^n with F = -|z|^2: sum_i d_i dbar_i u - sum_i zbar_i dbar_i u.
ComplexPolynomial weighted_dbar_laplacian(const ComplexPolynomial& u);

/// Exponent vectors with entries summing to exactly `degree`, in lexicographically descending order.
std::vector<std::vector<int>> compositions(int n, int degree);

}  // namespace wlap
