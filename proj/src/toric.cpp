#include "wlap/toric.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"
#include "wlap/error.hpp"

namespace wlap {
namespace {

using Matrix = std::vector<RationalPoint>;  // rows

std::size_t sz(int v) { return static_cast<std::size_t>(v); }

// Row echelon form in place; returns the rank.
int eliminate(Matrix& m) {
  if (m.empty()) return 0;
  const std::size_t cols = m[0].size();
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < m.size(); ++c) {
    std::size_t piv = row;
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[row]);
    for (std::size_t r = row + 1; r < m.size(); ++r) {
      if (m[r][c] == 0) continue;
      const Rational f = m[r][c] / m[row][c];
      for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[row][k];
    }
    ++row;
  }
  return static_cast<int>(row);
}

int rank(Matrix m) { return eliminate(m); }

Rational determinant(Matrix m) {
  const std::size_t n = m.size();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m[piv][c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (m[r][c] == 0) continue;
      const Rational f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

// Nonzero vector orthogonal to the rows of a (k-1) x k matrix of rank k-1.
RationalPoint normal_vector(Matrix m, std::size_t k) {
  eliminate(m);
  // Identify pivot columns; the free column gets 1.
  std::vector<int> pivot_col(m.size(), -1);
  std::vector<bool> is_pivot(k, false);
  for (std::size_t r = 0; r < m.size(); ++r)
    for (std::size_t c = 0; c < k; ++c)
      if (m[r][c] != 0) {
        pivot_col[r] = static_cast<int>(c);
        is_pivot[c] = true;
        break;
      }
  RationalPoint x(k, Rational(0));
  std::size_t free_col = 0;
  while (is_pivot[free_col]) ++free_col;
  x[free_col] = 1;
  for (std::size_t r = m.size(); r-- > 0;) {
    if (pivot_col[r] < 0) continue;
    Rational acc = 0;
    for (std::size_t c = sz(pivot_col[r]) + 1; c < k; ++c) acc += m[r][c] * x[c];
    x[sz(pivot_col[r])] = -acc / m[r][sz(pivot_col[r])];
  }
  return x;
}

Rational dot(const RationalPoint& a, const RationalPoint& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

RationalPoint minus(const RationalPoint& a, const RationalPoint& b) {
  RationalPoint d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

struct Facet {
  std::vector<int> on;
  RationalPoint normal;
};

// Facets of the hull of full-dimensional points in R^k by subset enumeration.
std::vector<Facet> facet_list(const std::vector<RationalPoint>& pts) {
  const std::size_t n = pts.size(), k = pts[0].size();
  std::vector<Facet> out;
  if (k == 1) {
    const auto [lo, hi] = std::minmax_element(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a[0] < b[0]; });
    std::vector<int> on_lo, on_hi;
    for (std::size_t i = 0; i < n; ++i) {
      if (pts[i][0] == (*lo)[0]) on_lo.push_back(static_cast<int>(i));
      if (pts[i][0] == (*hi)[0]) on_hi.push_back(static_cast<int>(i));
    }
    out.push_back({on_lo, {Rational(-1)}});
    out.push_back({on_hi, {Rational(1)}});
    return out;
  }
  double combos = 1;
  for (std::size_t i = 0; i < k; ++i) combos = combos * static_cast<double>(n - i) / static_cast<double>(i + 1);
  require(combos <= 5e6, ErrorCode::ParameterOutOfRange, "too many points for exact facet enumeration");
  std::set<std::vector<int>> seen;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    Matrix rows;
    for (std::size_t i = 1; i < k; ++i) rows.push_back(minus(pts[idx[i]], pts[idx[0]]));
    if (rank(rows) == static_cast<int>(k) - 1) {
      const RationalPoint a = normal_vector(rows, k);
      const Rational b = dot(a, pts[idx[0]]);
      int sign = 0;
      bool supporting = true;
      std::vector<int> on;
      for (std::size_t j = 0; j < n && supporting; ++j) {
        const Rational s = dot(a, pts[j]) - b;
        if (s == 0) {
          on.push_back(static_cast<int>(j));
        } else {
          const int sj = s > 0 ? 1 : -1;
          if (sign == 0) sign = sj;
          supporting = sign == sj;
        }
      }
      if (supporting && seen.insert(on).second) {
        RationalPoint outward = a;
        if (sign > 0)
          for (auto& v : outward) v = -v;
        out.push_back({on, outward});
      }
    }
    // Next k-subset in lexicographic order.
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

// Drops the first coordinate in which the facet normal is nonzero; injective on the facet.
std::vector<RationalPoint> project_facet(const std::vector<RationalPoint>& pts, const Facet& f) {
  std::size_t drop = 0;
  while (f.normal[drop] == 0) ++drop;
  std::vector<RationalPoint> out;
  for (int i : f.on) {
    RationalPoint p;
    for (std::size_t c = 0; c < pts[sz(i)].size(); ++c)
      if (c != drop) p.push_back(pts[sz(i)][c]);
    out.push_back(std::move(p));
  }
  return out;
}

// Triangulation of the hull of `pts`, all of which are vertices.
std::vector<std::vector<int>> fan(const std::vector<RationalPoint>& pts, int apex) {
  const std::size_t k = pts[0].size();
  if (k == 1) {
    require(pts.size() == 2, ErrorCode::DegeneratePolytope, "segment must have two vertices");
    return {{0, 1}};
  }
  std::vector<std::vector<int>> out;
  for (const Facet& f : facet_list(pts)) {
    if (std::find(f.on.begin(), f.on.end(), apex) != f.on.end()) continue;
    for (auto simplex : fan(project_facet(pts, f), 0)) {
      for (auto& v : simplex) v = f.on[sz(v)];
      simplex.push_back(apex);
      out.push_back(std::move(simplex));
    }
  }
  return out;
}

Rational factorial(std::size_t k) {
  Rational f = 1;
  for (std::size_t i = 2; i <= k; ++i) f *= static_cast<long long>(i);
  return f;
}

Rational from_double(double x) {
  require(std::isfinite(x), ErrorCode::MalformedFile, "non-finite coordinate");
  if (x == 0) return 0;
  int e = 0;
  const double m = std::frexp(x, &e);
  const auto mant = static_cast<long long>(std::ldexp(m, 53));
  Rational q = mant;
  const int shift = e - 53;
  boost::multiprecision::cpp_int p = 1;
  p <<= std::abs(shift);
  return shift >= 0 ? q * Rational(p) : q / Rational(p);
}

// SAX reader that keeps the literal text of decimal numbers.
class PolytopeReader : public nlohmann::json_sax<nlohmann::json> {
 public:
  std::vector<RationalPoint> points;
  std::string name;
  bool exact = true;
  bool saw_vertices = false;

  bool null() override { return bad("null value"); }
  bool boolean(bool v) override {
    if (depth_ == 1 && key_ == "exact") {
      exact = v;
      return true;
    }
    return bad("unexpected boolean");
  }
  bool number_integer(number_integer_t v) override { return coordinate(Rational(static_cast<long long>(v))); }
  bool number_unsigned(number_unsigned_t v) override {
    return coordinate(Rational(boost::multiprecision::cpp_int(static_cast<unsigned long long>(v))));
  }
  bool number_float(number_float_t, const string_t& s) override { return coordinate(parse_rational(s)); }
  bool string(string_t& v) override {
    if (depth_ == 1 && key_ == "name") {
      name = v;
      return true;
    }
    return coordinate(parse_rational(v));
  }
  bool binary(binary_t&) override { return bad("binary value"); }
  bool start_object(std::size_t) override {
    if (depth_ != 0) return bad("nested object");
    ++depth_;
    return true;
  }
  bool key(string_t& k) override {
    if (k != "vertices" && k != "name" && k != "exact") return bad("unknown key '" + k + "'");
    key_ = k;
    return true;
  }
  bool end_object() override {
    --depth_;
    return true;
  }
  bool start_array(std::size_t) override {
    if (depth_ == 1 && key_ == "vertices") {
      saw_vertices = true;
      ++depth_;
      return true;
    }
    if (depth_ == 2) {
      points.emplace_back();
      ++depth_;
      return true;
    }
    return bad("unexpected array");
  }
  bool end_array() override {
    --depth_;
    return true;
  }
  bool parse_error(std::size_t pos, const std::string&, const nlohmann::detail::exception& ex) override {
    fail(ErrorCode::MalformedFile, "JSON syntax error at byte " + std::to_string(pos) + ": " + ex.what());
  }

 private:
  bool coordinate(const Rational& q) {
    if (depth_ != 3) return bad("number outside a vertex");
    points.back().push_back(q);
    return true;
  }
  bool bad(const std::string& what) { fail(ErrorCode::MalformedFile, "polytope file: " + what); }
  int depth_ = 0;
  std::string key_;
};

}  // namespace

Rational parse_rational(const std::string& raw) {
  const auto bad = [&]() -> Rational { fail(ErrorCode::MalformedFile, "not a rational number: '" + raw + "'"); };
  const auto first = raw.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return bad();
  const std::string text = raw.substr(first, raw.find_last_not_of(" \t\r\n") - first + 1);
  const auto slash = text.find('/');
  // cpp_int reads a leading 0 as an octal prefix
  const auto decimal = [](const std::string& d) {
    const auto nz = d.find_first_not_of('0');
    return boost::multiprecision::cpp_int(nz == std::string::npos ? std::string("0") : d.substr(nz));
  };
  const auto integer = [&](const std::string& s) {
    if (s.empty()) bad();
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) bad();
    for (std::size_t j = i; j < s.size(); ++j)
      if (!std::isdigit(static_cast<unsigned char>(s[j]))) bad();
    const auto magnitude = decimal(s.substr(i));
    return s[0] == '-' ? boost::multiprecision::cpp_int(-magnitude) : magnitude;
  };
  if (slash != std::string::npos) {
    const auto num = integer(text.substr(0, slash));
    const auto den = integer(text.substr(slash + 1));
    if (den == 0) fail(ErrorCode::MalformedFile, "zero denominator in '" + text + "'");
    return Rational(num, den);
  }
  std::size_t i = 0;
  bool negative = false;
  if (text[i] == '-' || text[i] == '+') negative = text[i++] == '-';
  std::string digits;
  int scale = 0;
  bool any = false, dot = false;
  for (; i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.'); ++i) {
    if (text[i] == '.') {
      if (dot) return bad();
      dot = true;
      continue;
    }
    any = true;
    digits += text[i];
    if (dot) --scale;
  }
  if (!any) return bad();
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') return bad();
    const std::string ex = text.substr(i + 1);
    if (ex.empty() || ex.size() > 6) return bad();
    scale += static_cast<int>(integer(ex));
  }
  Rational q{decimal(digits)};
  boost::multiprecision::cpp_int p = 1;
  for (int k = 0; k < std::abs(scale); ++k) p *= 10;
  q = scale >= 0 ? q * Rational(p) : q / Rational(p);
  return negative ? -q : q;
}

std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

Polytope canonicalize(std::vector<RationalPoint> points, std::string name) {
  if (points.empty()) fail(ErrorCode::DegeneratePolytope, "polytope has no vertices");
  const std::size_t m = points[0].size();
  if (m == 0) fail(ErrorCode::MalformedFile, "vertices must have at least one coordinate");
  for (const auto& p : points)
    if (p.size() != m) fail(ErrorCode::MalformedFile, "vertices have different dimensions");
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  Matrix diffs;
  for (std::size_t i = 1; i < points.size(); ++i) diffs.push_back(minus(points[i], points[0]));
  if (rank(diffs) < static_cast<int>(m))
    fail(ErrorCode::DegeneratePolytope, "points span fewer than " + std::to_string(m) + " dimensions");
  const auto fs = facet_list(points);
  Polytope p;
  p.dim = static_cast<int>(m);
  p.name = std::move(name);
  for (std::size_t i = 0; i < points.size(); ++i) {
    Matrix normals;
    for (const auto& f : fs)
      if (std::binary_search(f.on.begin(), f.on.end(), static_cast<int>(i))) normals.push_back(f.normal);
    if (rank(normals) == static_cast<int>(m)) p.vertices.push_back(points[i]);
  }
  return p;
}

Polytope polytope_from_doubles(const std::vector<std::vector<double>>& points, std::string name) {
  std::vector<RationalPoint> pts;
  for (const auto& p : points) {
    RationalPoint q;
    for (double x : p) q.push_back(from_double(x));
    pts.push_back(std::move(q));
  }
  Polytope out = canonicalize(std::move(pts), std::move(name));
  out.exact = false;
  return out;
}

Polytope load_polytope(const std::string& json_text) {
  PolytopeReader reader;
  nlohmann::json::sax_parse(json_text, &reader);
  if (!reader.saw_vertices) fail(ErrorCode::MalformedFile, "polytope file has no \"vertices\" array");
  Polytope p = canonicalize(std::move(reader.points), reader.name);
  p.exact = reader.exact;
  return p;
}

Polytope load_polytope_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::MalformedFile, "cannot open polytope file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_polytope(ss.str());
}

std::string save_polytope(const Polytope& p) {
  std::ostringstream os;
  os << "{\n";
  if (!p.name.empty()) os << "  \"name\": " << nlohmann::json(p.name).dump() << ",\n";
  if (!p.exact) os << "  \"exact\": false,\n";
  os << "  \"vertices\": [";
  for (std::size_t i = 0; i < p.vertices.size(); ++i) {
    const auto& v = p.vertices[i];
    auto row = nlohmann::ordered_json::array();
    for (const auto& q : v) {
      if (denominator(q) == 1 && abs(numerator(q)) < boost::multiprecision::cpp_int(1) << 62)
        row.push_back(static_cast<long long>(numerator(q)));
      else
        row.push_back(to_string(q));
    }
    os << (i ? ",\n    " : "\n    ") << row.dump();
  }
  os << "\n  ]\n}\n";
  return os.str();
}

std::vector<std::vector<int>> facets(const Polytope& p) {
  std::vector<std::vector<int>> out;
  for (auto& f : facet_list(p.vertices)) out.push_back(std::move(f.on));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<int>> triangulate(const Polytope& p, int apex) {
  require(apex >= 0 && sz(apex) < p.vertices.size(), ErrorCode::ParameterOutOfRange, "apex index out of range");
  return fan(p.vertices, apex);
}

VolumeBarycenter volume_barycenter(const Polytope& p, int apex) {
  const std::size_t m = sz(p.dim);
  const Rational mfact = factorial(m);
  VolumeBarycenter out;
  out.volume = 0;
  out.barycenter.assign(m, Rational(0));
  for (const auto& s : triangulate(p, apex)) {
    Matrix rows;
    for (std::size_t i = 1; i < s.size(); ++i) rows.push_back(minus(p.vertices[sz(s[i])], p.vertices[sz(s[0])]));
    const Rational vol = abs(determinant(rows)) / mfact;
    out.volume += vol;
    for (std::size_t c = 0; c < m; ++c) {
      Rational centroid = 0;
      for (int v : s) centroid += p.vertices[sz(v)][c];
      out.barycenter[c] += vol * centroid / static_cast<long long>(s.size());
    }
  }
  for (auto& c : out.barycenter) c /= out.volume;
  return out;
}

Rational volume(const Polytope& p) { return volume_barycenter(p).volume; }
RationalPoint barycenter(const Polytope& p) { return volume_barycenter(p).barycenter; }

std::vector<double> to_doubles(const RationalPoint& x) {
  std::vector<double> out;
  for (const auto& q : x) out.push_back(static_cast<double>(q));
  return out;
}

FutakiVerdict futaki_vanishes(const Polytope& p, std::optional<double> tol) {
  FutakiVerdict v;
  v.tolerance = tol.value_or(p.exact ? 0.0 : 1e-12);
  require(v.tolerance >= 0, ErrorCode::ParameterOutOfRange, "tolerance must be >= 0");
  v.barycenter = barycenter(p);
  const auto b = to_doubles(v.barycenter);
  double n2 = 0;
  for (double x : b) n2 += x * x;
  v.norm = std::sqrt(n2);
  const bool zero = std::all_of(v.barycenter.begin(), v.barycenter.end(), [](const Rational& q) { return q == 0; });
  v.vanishes = zero || (v.tolerance > 0 && v.norm <= v.tolerance);
  if (!zero)
    for (double x : b) v.direction.push_back(x / v.norm);
  return v;
}

Polytope truncate_corner(const Polytope& p, int vertex) {
  require(p.dim == 2, ErrorCode::ParameterOutOfRange, "corner truncation is implemented for polygons");
  require(vertex >= 0 && sz(vertex) < p.vertices.size(), ErrorCode::ParameterOutOfRange, "vertex index out of range");
  const RationalPoint& v = p.vertices[sz(vertex)];
  for (const auto& q : v)
    require(denominator(q) == 1, ErrorCode::ParameterOutOfRange, "corner truncation needs a lattice vertex");
  std::vector<RationalPoint> pts;
  for (std::size_t i = 0; i < p.vertices.size(); ++i)
    if (i != sz(vertex)) pts.push_back(p.vertices[i]);
  for (const auto& f : facets(p)) {
    if (!std::binary_search(f.begin(), f.end(), vertex)) continue;
    const int other = f[0] == vertex ? f[1] : f[0];
    RationalPoint e = minus(p.vertices[sz(other)], v);
    boost::multiprecision::cpp_int g = 0;
    for (const auto& q : e) {
      require(denominator(q) == 1, ErrorCode::ParameterOutOfRange, "corner truncation needs lattice edges");
      g = boost::multiprecision::gcd(g, abs(numerator(q)));
    }
    RationalPoint w = v;
    for (std::size_t c = 0; c < e.size(); ++c) w[c] += e[c] / Rational(g);
    pts.push_back(std::move(w));
  }
  Polytope out = canonicalize(std::move(pts), p.name.empty() ? "" : p.name + "-truncated");
  out.exact = p.exact;
  return out;
}

Polytope affine_image(const Polytope& p, const std::vector<Rational>& A, const RationalPoint& b) {
  const std::size_t m = sz(p.dim);
  require(A.size() == m * m && b.size() == m, ErrorCode::ParameterOutOfRange, "affine map has the wrong shape");
  std::vector<RationalPoint> pts;
  for (const auto& v : p.vertices) {
    RationalPoint w = b;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) w[i] += A[i * m + j] * v[j];
    pts.push_back(std::move(w));
  }
  Polytope out = canonicalize(std::move(pts), p.name);
  out.exact = p.exact;
  return out;
}

}  // namespace wlap
