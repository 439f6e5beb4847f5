#include "wlap/complex_polynomial.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "wlap/error.hpp"

namespace wlap {
namespace {

double factorial(int k) { return std::tgamma(k + 1.0); }

}  // namespace

int Bidegree::holomorphic_degree() const {
  int s = 0;
  for (int a : alpha) s += a;
  return s;
}

int Bidegree::antiholomorphic_degree() const {
  int s = 0;
  for (int b : beta) s += b;
  return s;
}

void ComplexPolynomial::add(const Bidegree& d, cplx c) {
  if (c == cplx{}) return;
  auto [it, inserted] = terms_.try_emplace(d, c);
  if (!inserted) {
    it->second += c;
    if (it->second == cplx{}) terms_.erase(it);
  }
}

ComplexPolynomial ComplexPolynomial::constant(int n, cplx c) {
  ComplexPolynomial p(n);
  p.add({std::vector<int>(static_cast<std::size_t>(n), 0), std::vector<int>(static_cast<std::size_t>(n), 0)}, c);
  return p;
}

ComplexPolynomial ComplexPolynomial::monomial(std::vector<int> alpha, std::vector<int> beta, cplx c) {
  require(alpha.size() == beta.size() && !alpha.empty(), ErrorCode::ParameterOutOfRange,
          "monomial exponents must have equal nonzero length");
  for (std::size_t i = 0; i < alpha.size(); ++i)
    require(alpha[i] >= 0 && beta[i] >= 0, ErrorCode::ParameterOutOfRange, "negative exponent");
  ComplexPolynomial p(static_cast<int>(alpha.size()));
  p.add({std::move(alpha), std::move(beta)}, c);
  return p;
}

ComplexPolynomial ComplexPolynomial::z(int n, int i) {
  std::vector<int> a(static_cast<std::size_t>(n), 0), b(static_cast<std::size_t>(n), 0);
  a.at(static_cast<std::size_t>(i)) = 1;
  return monomial(a, b);
}

ComplexPolynomial ComplexPolynomial::zbar(int n, int i) {
  std::vector<int> a(static_cast<std::size_t>(n), 0), b(static_cast<std::size_t>(n), 0);
  b.at(static_cast<std::size_t>(i)) = 1;
  return monomial(a, b);
}

bool ComplexPolynomial::is_zero(double tol) const {
  for (const auto& [d, c] : terms_)
    if (std::abs(c) > tol) return false;
  return true;
}

int ComplexPolynomial::degree() const {
  int d = 0;
  for (const auto& [b, c] : terms_) d = std::max(d, b.total_degree());
  return d;
}

ComplexPolynomial& ComplexPolynomial::operator+=(const ComplexPolynomial& o) {
  require(o.n_ == n_, ErrorCode::ParameterOutOfRange, "polynomial dimension mismatch");
  for (const auto& [d, c] : o.terms_) add(d, c);
  return *this;
}

ComplexPolynomial& ComplexPolynomial::operator-=(const ComplexPolynomial& o) {
  require(o.n_ == n_, ErrorCode::ParameterOutOfRange, "polynomial dimension mismatch");
  for (const auto& [d, c] : o.terms_) add(d, -c);
  return *this;
}

ComplexPolynomial& ComplexPolynomial::operator*=(cplx c) {
  if (c == cplx{}) {
    terms_.clear();
    return *this;
  }
  for (auto& [d, v] : terms_) v *= c;
  return *this;
}

ComplexPolynomial operator*(const ComplexPolynomial& a, const ComplexPolynomial& b) {
  require(a.n_ == b.n_, ErrorCode::ParameterOutOfRange, "polynomial dimension mismatch");
  ComplexPolynomial out(a.n_);
  for (const auto& [da, ca] : a.terms_) {
    for (const auto& [db, cb] : b.terms_) {
      Bidegree d = da;
      for (std::size_t i = 0; i < d.alpha.size(); ++i) {
        d.alpha[i] += db.alpha[i];
        d.beta[i] += db.beta[i];
      }
      out.add(d, ca * cb);
    }
  }
  return out;
}

ComplexPolynomial ComplexPolynomial::dz(int i) const {
  ComplexPolynomial out(n_);
  const auto k = static_cast<std::size_t>(i);
  for (const auto& [d, c] : terms_) {
    if (d.alpha[k] == 0) continue;
    Bidegree e = d;
    e.alpha[k] -= 1;
    out.add(e, c * static_cast<double>(d.alpha[k]));
  }
  return out;
}

ComplexPolynomial ComplexPolynomial::dzbar(int i) const {
  ComplexPolynomial out(n_);
  const auto k = static_cast<std::size_t>(i);
  for (const auto& [d, c] : terms_) {
    if (d.beta[k] == 0) continue;
    Bidegree e = d;
    e.beta[k] -= 1;
    out.add(e, c * static_cast<double>(d.beta[k]));
  }
  return out;
}

ComplexPolynomial ComplexPolynomial::conjugate() const {
  ComplexPolynomial out(n_);
  for (const auto& [d, c] : terms_) out.add({d.beta, d.alpha}, std::conj(c));
  return out;
}

cplx ComplexPolynomial::operator()(std::span<const cplx> zv) const {
  require(zv.size() == static_cast<std::size_t>(n_), ErrorCode::PointOutsideChart, "wrong number of coordinates");
  cplx sum{};
  for (const auto& [d, c] : terms_) {
    cplx term = c;
    for (std::size_t i = 0; i < zv.size(); ++i) {
      for (int a = 0; a < d.alpha[i]; ++a) term *= zv[i];
      for (int b = 0; b < d.beta[i]; ++b) term *= std::conj(zv[i]);
    }
    sum += term;
  }
  return sum;
}

cplx ComplexPolynomial::at_chart(std::span<const double> xy) const {
  require(xy.size() == 2 * static_cast<std::size_t>(n_), ErrorCode::PointOutsideChart, "wrong chart dimension");
  std::vector<cplx> zv(static_cast<std::size_t>(n_));
  for (std::size_t i = 0; i < zv.size(); ++i) zv[i] = {xy[2 * i], xy[2 * i + 1]};
  return (*this)(zv);
}

cplx ComplexPolynomial::gaussian_integral() const {
  // int z^a zbar^b e^{-|z|^2} = pi a! when a = b, else 0 (per coordinate).
  cplx sum{};
  for (const auto& [d, c] : terms_) {
    if (d.alpha != d.beta) continue;
    double v = 1;
    for (int a : d.alpha) v *= std::numbers::pi * factorial(a);
    sum += c * v;
  }
  return sum;
}

std::string ComplexPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [d, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << '(' << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
    for (std::size_t i = 0; i < d.alpha.size(); ++i) {
      if (d.alpha[i]) os << " z" << i + 1 << (d.alpha[i] > 1 ? "^" + std::to_string(d.alpha[i]) : "");
      if (d.beta[i]) os << " zb" << i + 1 << (d.beta[i] > 1 ? "^" + std::to_string(d.beta[i]) : "");
    }
  }
  return os.str();
}

ComplexPolynomial weighted_dbar_laplacian(const ComplexPolynomial& u) {
  ComplexPolynomial out(u.n());
  for (int i = 0; i < u.n(); ++i) {
    const ComplexPolynomial db = u.dzbar(i);
    out += db.dz(i);
    out -= ComplexPolynomial::zbar(u.n(), i) * db;
  }
  return out;
}

std::vector<std::vector<int>> compositions(int n, int degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> e(static_cast<std::size_t>(n), 0);
  auto rec = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == n - 1) {
      e[static_cast<std::size_t>(pos)] = remaining;
      out.push_back(e);
      return;
    }
    for (int v = remaining; v >= 0; --v) {
      e[static_cast<std::size_t>(pos)] = v;
      self(self, pos + 1, remaining - v);
    }
  };
  if (n > 0 && degree >= 0) rec(rec, 0, degree);
  return out;
}

}  // namespace wlap
