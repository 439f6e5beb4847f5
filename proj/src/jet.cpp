#include "wlap/jet.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace wlap {
namespace {

struct Triple {
  std::uint32_t i, j, k;
};

struct Tables {
  std::vector<std::vector<int>> monomials;   // graded order, degree <= kMaxOrder
  std::vector<std::size_t> size_by_order;    // prefix length for each order
  std::vector<Triple> products;              // sorted by k
  std::vector<std::size_t> products_by_order;  // number of triples with k < size(order)
  std::vector<std::vector<int>> shift;       // shift[axis][idx] = index of mono + e_axis, or -1
  std::vector<double> factorial_weight;      // alpha! for each monomial
};

Tables build_tables(int dim) {
  Tables t;
  // Graded lexicographic enumeration.
  for (int deg = 0; deg <= Jet::kMaxOrder; ++deg) {
    std::vector<int> e(static_cast<std::size_t>(dim), 0);
    // Enumerate compositions of deg into dim parts in lex-descending order.
    std::vector<std::vector<int>> level;
    auto rec = [&](auto&& self, int pos, int remaining) -> void {
      if (pos == dim - 1) {
        e[static_cast<std::size_t>(pos)] = remaining;
        level.push_back(e);
        return;
      }
      for (int v = remaining; v >= 0; --v) {
        e[static_cast<std::size_t>(pos)] = v;
        self(self, pos + 1, remaining - v);
      }
    };
    if (dim == 0) {
      if (deg == 0) level.push_back({});
    } else {
      rec(rec, 0, deg);
    }
    for (auto& m : level) t.monomials.push_back(m);
    t.size_by_order.push_back(t.monomials.size());
  }
  std::map<std::vector<int>, std::uint32_t> index;
  for (std::uint32_t i = 0; i < t.monomials.size(); ++i) index[t.monomials[i]] = i;

  auto degree = [](const std::vector<int>& m) {
    int d = 0;
    for (int v : m) d += v;
    return d;
  };
  for (std::uint32_t i = 0; i < t.monomials.size(); ++i) {
    for (std::uint32_t j = 0; j < t.monomials.size(); ++j) {
      if (degree(t.monomials[i]) + degree(t.monomials[j]) > Jet::kMaxOrder) continue;
      std::vector<int> s = t.monomials[i];
      for (std::size_t a = 0; a < s.size(); ++a) s[a] += t.monomials[j][a];
      t.products.push_back({i, j, index.at(s)});
    }
  }
  std::stable_sort(t.products.begin(), t.products.end(),
                   [](const Triple& a, const Triple& b) { return a.k < b.k; });
  for (std::size_t order = 0; order <= static_cast<std::size_t>(Jet::kMaxOrder); ++order) {
    const std::size_t limit = t.size_by_order[order];
    const auto it = std::partition_point(t.products.begin(), t.products.end(),
                                         [&](const Triple& p) { return p.k < limit; });
    t.products_by_order.push_back(static_cast<std::size_t>(it - t.products.begin()));
  }
  t.shift.assign(static_cast<std::size_t>(dim), std::vector<int>(t.monomials.size(), -1));
  for (int axis = 0; axis < dim; ++axis) {
    for (std::size_t i = 0; i < t.monomials.size(); ++i) {
      std::vector<int> s = t.monomials[i];
      s[static_cast<std::size_t>(axis)] += 1;
      auto it = index.find(s);
      if (it != index.end()) t.shift[static_cast<std::size_t>(axis)][i] = static_cast<int>(it->second);
    }
  }
  for (const auto& m : t.monomials) {
    double w = 1.0;
    for (int v : m)
      for (int q = 2; q <= v; ++q) w *= q;
    t.factorial_weight.push_back(w);
  }
  return t;
}

const Tables& tables(int dim) {
  static std::array<std::unique_ptr<Tables>, Jet::kMaxDim + 1> cache;
  static std::array<std::once_flag, Jet::kMaxDim + 1> once;
  if (dim < 0 || dim > Jet::kMaxDim) throw std::out_of_range("Jet dimension out of range");
  std::call_once(once[static_cast<std::size_t>(dim)],
                 [&] { cache[static_cast<std::size_t>(dim)] = std::make_unique<Tables>(build_tables(dim)); });
  return *cache[static_cast<std::size_t>(dim)];
}

}  // namespace

std::size_t jet_size(int dim, int order) { return tables(dim).size_by_order[static_cast<std::size_t>(order)]; }

Jet::Jet(int dim, int order) : dim_(dim), order_(order), c_(jet_size(dim, order), 0.0) {
  if (order < 0 || order > kMaxOrder) throw std::out_of_range("Jet order out of range");
}

Jet Jet::constant(int dim, int order, double value) {
  Jet j(dim, order);
  j.c_[0] = value;
  return j;
}

Jet Jet::variable(int dim, int order, int axis, double value) {
  Jet j(dim, order);
  j.c_[0] = value;
  if (order >= 1) j.c_[1 + static_cast<std::size_t>(axis)] = 1.0;
  return j;
}

double Jet::partial(std::initializer_list<int> axes) const {
  return partial(std::span<const int>(axes.begin(), axes.size()));
}

double Jet::partial(std::span<const int> axes) const {
  if (static_cast<int>(axes.size()) > order_) throw std::out_of_range("derivative exceeds jet order");
  const Tables& t = tables(dim_);
  int idx = 0;
  for (int a : axes) idx = t.shift[static_cast<std::size_t>(a)][static_cast<std::size_t>(idx)];
  return c_[static_cast<std::size_t>(idx)] * t.factorial_weight[static_cast<std::size_t>(idx)];
}

Jet Jet::derivative(int axis) const {
  if (order_ == 0) throw std::out_of_range("cannot differentiate an order-0 jet");
  const Tables& t = tables(dim_);
  Jet r(dim_, order_ - 1);
  const auto& sh = t.shift[static_cast<std::size_t>(axis)];
  for (std::size_t i = 0; i < r.c_.size(); ++i) {
    const int s = sh[i];
    const double power = t.monomials[i][static_cast<std::size_t>(axis)] + 1;
    r.c_[i] = power * c_[static_cast<std::size_t>(s)];
  }
  return r;
}

Jet Jet::truncated(int order) const {
  if (order >= order_) return *this;
  Jet r(dim_, order);
  std::copy_n(c_.begin(), r.c_.size(), r.c_.begin());
  return r;
}

void Jet::merge_order(const Jet& other) {
  if (dim_ != other.dim_) throw std::invalid_argument("Jet dimension mismatch");
  if (other.order_ < order_) {
    order_ = other.order_;
    c_.resize(jet_size(dim_, order_));
  }
}

Jet& Jet::operator+=(const Jet& other) {
  if (c_.empty()) return *this = other;
  if (other.c_.empty()) return *this;
  merge_order(other);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += other.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& other) {
  if (c_.empty()) return *this = -other;
  if (other.c_.empty()) return *this;
  merge_order(other);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= other.c_[i];
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  if (a.c_.empty() || b.c_.empty()) return Jet{};
  if (a.dim_ != b.dim_) throw std::invalid_argument("Jet dimension mismatch");
  const int order = std::min(a.order_, b.order_);
  Jet r(a.dim_, order);
  const Tables& t = tables(a.dim_);
  const std::size_t count = t.products_by_order[static_cast<std::size_t>(order)];
  for (std::size_t p = 0; p < count; ++p) {
    const Triple& tr = t.products[p];
    r.c_[tr.k] += a.c_[tr.i] * b.c_[tr.j];
  }
  return r;
}

Jet& Jet::operator*=(const Jet& other) { return *this = *this * other; }

Jet& Jet::operator+=(double s) {
  if (!c_.empty()) c_[0] += s;
  return *this;
}
Jet& Jet::operator-=(double s) {
  if (!c_.empty()) c_[0] -= s;
  return *this;
}
Jet& Jet::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}
Jet& Jet::operator/=(double s) {
  for (double& v : c_) v /= s;
  return *this;
}

Jet Jet::operator-() const {
  Jet r = *this;
  for (double& v : r.c_) v = -v;
  return r;
}

Jet Jet::compose(std::span<const double> derivatives) const {
  // g(a0 + d) = sum_k g^(k)(a0) d^k / k!, d nilpotent of index order+1.
  Jet delta = *this;
  delta.c_[0] = 0.0;
  Jet result = constant(dim_, order_, derivatives[0]);
  Jet power = constant(dim_, order_, 1.0);
  double factorial = 1.0;
  for (int k = 1; k <= order_; ++k) {
    power = power * delta;
    factorial *= k;
    const double coeff = derivatives[static_cast<std::size_t>(k)] / factorial;
    for (std::size_t i = 0; i < result.c_.size(); ++i) result.c_[i] += coeff * power.c_[i];
  }
  return result;
}

Jet operator/(double s, const Jet& a) {
  std::array<double, Jet::kMaxOrder + 1> d{};
  const double x = a.value();
  // d^k/dx^k (1/x) = (-1)^k k! / x^(k+1)
  double f = 1.0 / x;
  for (int k = 0; k <= a.order(); ++k) {
    d[static_cast<std::size_t>(k)] = s * f;
    f *= -(k + 1) / x;
  }
  return a.compose(std::span<const double>(d.data(), static_cast<std::size_t>(a.order() + 1)));
}

Jet operator/(const Jet& a, const Jet& b) { return a * (1.0 / b); }

Jet exp(const Jet& a) {
  std::array<double, Jet::kMaxOrder + 1> d{};
  d.fill(std::exp(a.value()));
  return a.compose(std::span<const double>(d.data(), static_cast<std::size_t>(a.order() + 1)));
}

Jet log(const Jet& a) {
  std::array<double, Jet::kMaxOrder + 1> d{};
  const double x = a.value();
  d[0] = std::log(x);
  double f = 1.0 / x;  // (-1)^(k-1) (k-1)! / x^k
  for (int k = 1; k <= a.order(); ++k) {
    d[static_cast<std::size_t>(k)] = f;
    f *= -k / x;
  }
  return a.compose(std::span<const double>(d.data(), static_cast<std::size_t>(a.order() + 1)));
}

Jet sin(const Jet& a) {
  std::array<double, Jet::kMaxOrder + 1> d{};
  const double s = std::sin(a.value()), c = std::cos(a.value());
  const double cycle[4] = {s, c, -s, -c};
  for (int k = 0; k <= a.order(); ++k) d[static_cast<std::size_t>(k)] = cycle[k % 4];
  return a.compose(std::span<const double>(d.data(), static_cast<std::size_t>(a.order() + 1)));
}

Jet cos(const Jet& a) {
  std::array<double, Jet::kMaxOrder + 1> d{};
  const double s = std::sin(a.value()), c = std::cos(a.value());
  const double cycle[4] = {c, -s, -c, s};
  for (int k = 0; k <= a.order(); ++k) d[static_cast<std::size_t>(k)] = cycle[k % 4];
  return a.compose(std::span<const double>(d.data(), static_cast<std::size_t>(a.order() + 1)));
}

Jet sqrt(const Jet& a) {
  std::array<double, Jet::kMaxOrder + 1> d{};
  const double x = a.value();
  double coeff = 1.0;  // prod_{i<k} (1/2 - i)
  for (int k = 0; k <= a.order(); ++k) {
    d[static_cast<std::size_t>(k)] = coeff * std::pow(x, 0.5 - k);
    coeff *= 0.5 - k;
  }
  return a.compose(std::span<const double>(d.data(), static_cast<std::size_t>(a.order() + 1)));
}

Jet square(const Jet& a) { return a * a; }

}  // namespace wlap
