#include "wlap/operators.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <unsupported/Eigen/KroneckerProduct>

#include "wlap/error.hpp"

namespace wlap {
namespace {

using Triplet = Eigen::Triplet<cplx>;
using SparseD = Eigen::SparseMatrix<double>;

constexpr std::size_t kMaxCardinality = 200000;

std::size_t sz(int v) { return static_cast<std::size_t>(v); }

// Multi-indices in [0, deg]^n, first axis slowest.
std::vector<std::vector<int>> tensor_indices(int n, int deg) {
  std::vector<std::vector<int>> out;
  std::vector<int> e(sz(n), 0);
  while (true) {
    out.push_back(e);
    int axis = n - 1;
    while (axis >= 0 && e[sz(axis)] == deg) e[sz(axis--)] = 0;
    if (axis < 0) break;
    ++e[sz(axis)];
  }
  return out;
}

// Ambient exponents spanning polynomials of degree <= L restricted to S^d,
// graded by degree, constant first.
std::vector<std::vector<int>> sphere_labels(int d, int l_max) {
  std::vector<std::vector<int>> out;
  for (int deg = 0; deg <= l_max; ++deg)
    for (int e = 0; e <= std::min(1, deg); ++e)
      for (auto a : compositions(d, deg - e)) {
        a.push_back(e);
        out.push_back(std::move(a));
      }
  return out;
}

// All basis jets of a sphere factor given ambient jets X_0..X_d.
std::vector<Jet> sphere_basis_jets(const std::vector<std::vector<int>>& labels, int d, int l_max, double radius,
                                   std::span<const Jet> X) {
  std::vector<std::vector<Jet>> P(sz(d));
  for (int i = 0; i < d; ++i) {
    const Jet xi = X[sz(i)] / radius;
    auto& p = P[sz(i)];
    p.push_back(Jet::constant(xi.dim(), xi.order(), 1.0));
    if (l_max >= 1) p.push_back(xi);
    for (int k = 1; k < l_max; ++k)
      p.push_back(((2.0 * k + 1) / (k + 1)) * (xi * p[sz(k)]) - (static_cast<double>(k) / (k + 1)) * p[sz(k - 1)]);
  }
  const Jet last = X[sz(d)] / radius;
  std::vector<Jet> out;
  out.reserve(labels.size());
  for (const auto& lab : labels) {
    Jet v = P[0][sz(lab[0])];
    for (int i = 1; i < d; ++i) v = v * P[sz(i)][sz(lab[sz(i)])];
    if (lab[sz(d)] == 1) v = v * last;
    out.push_back(std::move(v));
  }
  return out;
}

// Hermite jets h_0..h_deg composed with the coordinate jet x.
std::vector<Jet> hermite_jets(int deg, double lambda, const Jet& x) {
  const auto h = hermite_functions(deg, lambda, x.value(), x.order());
  std::vector<Jet> out;
  std::vector<double> derivs(sz(x.order() + 1));
  for (int k = 0; k <= deg; ++k) {
    for (int m = 0; m <= x.order(); ++m) derivs[sz(m)] = h[sz(m)][sz(k)];
    out.push_back(x.compose(derivs));
  }
  return out;
}

SparseMatrixC dense_to_sparse(const Eigen::MatrixXd& m, double prune) {
  const double cut = prune * m.cwiseAbs().maxCoeff();
  std::vector<Triplet> t;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i <= j; ++i) {
      const double v = m(i, j);
      if (std::abs(v) <= cut) continue;
      t.emplace_back(i, j, v);
      if (i != j) t.emplace_back(j, i, v);
    }
  SparseMatrixC s(m.rows(), m.cols());
  s.setFromTriplets(t.begin(), t.end());
  return s;
}

SparseD dense_to_sparse_real(const Eigen::MatrixXd& m, double prune) {
  const double cut = prune * m.cwiseAbs().maxCoeff();
  std::vector<Eigen::Triplet<double>> t;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i <= j; ++i) {
      const double v = m(i, j);
      if (std::abs(v) <= cut) continue;
      t.emplace_back(i, j, v);
      if (i != j) t.emplace_back(j, i, v);
    }
  SparseD s(m.rows(), m.cols());
  s.setFromTriplets(t.begin(), t.end());
  return s;
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd out = m.triangularView<Eigen::Upper>();
  out.triangularView<Eigen::StrictlyLower>() = m.triangularView<Eigen::Upper>().transpose();
  return out;
}

std::pair<double, double> extreme_eigenvalues(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

void check_gram(AssembledOperator& op, double floor) {
  if (!(op.gram_min_eigenvalue > floor * op.gram_max_eigenvalue))
    fail(ErrorCode::GramIllConditioned, "gram eigenvalues [" + std::to_string(op.gram_min_eigenvalue) + ", " +
                                            std::to_string(op.gram_max_eigenvalue) + "] violate the conditioning floor");
}

void require_space(const DiscreteBasis& basis, const ModelSpace& space) {
  if (basis.space_kind != space.kind || basis.space_n != space.n || basis.space_k != space.k)
    fail(ErrorCode::IncompatibleBasis, std::string(to_string(basis.kind)) + " basis built for " +
                                           std::string(to_string(basis.space_kind)) + " does not fit " + space.descriptor());
}

DiscreteBasis basis_shell(BasisKind kind, const ModelSpace& space) {
  DiscreteBasis b;
  b.kind = kind;
  b.space_kind = space.kind;
  b.space_n = space.n;
  b.space_k = space.k;
  return b;
}

// 1-D Hermite stiffness and gram with an n-point Gauss-Hermite rule.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> hermite_1d(int deg, double lambda, int points) {
  const QuadratureRule q = gauss_hermite(points, lambda);
  Eigen::MatrixXd vals(points, deg + 1), ders(points, deg + 1);
  Eigen::VectorXd w(points);
  for (int i = 0; i < points; ++i) {
    const double x = q.nodes[sz(i)];
    const auto h = hermite_functions(deg, lambda, x, 1);
    for (int k = 0; k <= deg; ++k) {
      vals(i, k) = h[0][sz(k)];
      ders(i, k) = h[1][sz(k)];
    }
    w(i) = q.weights[sz(i)] * std::exp(-0.5 * lambda * x * x);
  }
  Eigen::MatrixXd M = vals.transpose() * w.asDiagonal() * vals;
  Eigen::MatrixXd A = ders.transpose() * w.asDiagonal() * ders;
  return {symmetrized(A), symmetrized(M)};
}

// Sphere factor matrices by quadrature on the hyperspherical chart.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> sphere_matrices(int d, double radius, int l_max, int points,
                                                            const std::vector<std::vector<int>>& labels) {
  const ModelSpace s = sphere_space(d, radius);
  const QuadratureRule rule = make_rule(s, points);
  const int nf = static_cast<int>(labels.size());
  const int nq = static_cast<int>(rule.size());
  Eigen::MatrixXd V(nq, nf), G(static_cast<Eigen::Index>(nq) * d, nf);
  for (int q = 0; q < nq; ++q) {
    const auto x = chart_jets(rule.node(sz(q)), 1);
    const auto X = embedding(s, x);
    const auto gj = metric_jets(s, x);
    const auto phis = sphere_basis_jets(labels, d, l_max, radius, X);
    Eigen::MatrixXd ginv(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) ginv(i, j) = gj[sz(i * d + j)].value();
    ginv = ginv.inverse().eval();
    const Eigen::MatrixXd Lc = Eigen::LLT<Eigen::MatrixXd>(ginv).matrixL();
    const double sw = std::sqrt(rule.weights[sz(q)]);
    for (int a = 0; a < nf; ++a) {
      V(q, a) = sw * phis[sz(a)].value();
      Eigen::VectorXd grad(d);
      for (int i = 0; i < d; ++i) grad(i) = phis[sz(a)].partial({i});
      const Eigen::VectorXd frame = Lc.transpose() * grad;
      for (int i = 0; i < d; ++i) G(static_cast<Eigen::Index>(q) * d + i, a) = sw * frame(i);
    }
  }
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(nf, nf), A = Eigen::MatrixXd::Zero(nf, nf);
  M.selfadjointView<Eigen::Upper>().rankUpdate(V.transpose());
  A.selfadjointView<Eigen::Upper>().rankUpdate(G.transpose());
  return {symmetrized(A), symmetrized(M)};
}

SparseD kron(const SparseD& a, const SparseD& b) {
  SparseD out = Eigen::kroneckerProduct(a, b);
  out.makeCompressed();
  return out;
}

SparseMatrixC to_complex(const SparseD& m) {
  SparseMatrixC out = m.cast<cplx>();
  out.makeCompressed();
  return out;
}

}  // namespace

std::string_view to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::HermiteTensor: return "hermite";
    case BasisKind::SphericalHarmonics: return "harmonics";
    case BasisKind::ProductBasis: return "product";
    case BasisKind::FourierLatitudeGrid: return "fourier";
    case BasisKind::MonomialFock: return "fock";
  }
  return "unknown";
}

std::string DiscreteBasis::descriptor() const {
  std::ostringstream os;
  os << to_string(kind) << ':';
  switch (kind) {
    case BasisKind::HermiteTensor: os << "deg=" << max_degree; break;
    case BasisKind::SphericalHarmonics: os << "lmax=" << l_max; break;
    case BasisKind::ProductBasis: os << "lmax=" << l_max << ",deg=" << max_degree; break;
    case BasisKind::FourierLatitudeGrid:
      os << "modes=" << fourier_modes << ",lmax=" << l_max << ",nlat=" << latitude_points;
      break;
    case BasisKind::MonomialFock: os << "deg=" << max_degree; break;
  }
  return os.str();
}

DiscreteBasis hermite_basis(const ModelSpace& space, int max_degree) {
  require(space.kind == SpaceKind::GaussianEuclidean, ErrorCode::IncompatibleBasis,
          "hermite basis needs a gaussian space");
  require(max_degree >= 1, ErrorCode::ParameterOutOfRange, "hermite degree must be >= 1");
  const double card = std::pow(max_degree + 1.0, space.n);
  require(card <= static_cast<double>(kMaxCardinality), ErrorCode::ParameterOutOfRange, "hermite basis too large");
  DiscreteBasis b = basis_shell(BasisKind::HermiteTensor, space);
  b.max_degree = max_degree;
  b.labels = tensor_indices(space.n, max_degree);
  b.cardinality = static_cast<int>(b.labels.size());
  return b;
}

DiscreteBasis harmonic_basis(const ModelSpace& space, int l_max) {
  require(space.kind == SpaceKind::RoundSphere, ErrorCode::IncompatibleBasis, "harmonic basis needs a sphere");
  require(l_max >= 1 && l_max <= 40, ErrorCode::ParameterOutOfRange, "harmonic l_max must lie in [1, 40]");
  DiscreteBasis b = basis_shell(BasisKind::SphericalHarmonics, space);
  b.l_max = l_max;
  b.labels = sphere_labels(space.n, l_max);
  b.cardinality = static_cast<int>(b.labels.size());
  require(b.labels.size() <= kMaxCardinality / 20, ErrorCode::ParameterOutOfRange, "harmonic basis too large");
  return b;
}

DiscreteBasis product_basis(const ModelSpace& space, int l_max, int max_degree) {
  require(space.kind == SpaceKind::SphereGaussianProduct, ErrorCode::IncompatibleBasis,
          "product basis needs a sphere x gaussian space");
  require(l_max >= 1 && l_max <= 30, ErrorCode::ParameterOutOfRange, "product l_max must lie in [1, 30]");
  require(max_degree >= 1, ErrorCode::ParameterOutOfRange, "product degree must be >= 1");
  DiscreteBasis b = basis_shell(BasisKind::ProductBasis, space);
  b.l_max = l_max;
  b.max_degree = max_degree;
  b.sphere_labels = sphere_labels(space.sphere_dimension(), l_max);
  const auto flat = tensor_indices(space.k, max_degree);
  require(static_cast<double>(b.sphere_labels.size()) * static_cast<double>(flat.size()) <= 20000.0,
          ErrorCode::ParameterOutOfRange, "product basis too large");
  for (std::size_t s = 0; s < b.sphere_labels.size(); ++s)
    for (const auto& j : flat) {
      std::vector<int> lab{static_cast<int>(s)};
      lab.insert(lab.end(), j.begin(), j.end());
      b.labels.push_back(std::move(lab));
    }
  b.cardinality = static_cast<int>(b.labels.size());
  return b;
}

DiscreteBasis fourier_basis(const ModelSpace& space, int modes, int l_max, int latitude_points) {
  require(space.kind == SpaceKind::FanoCP1, ErrorCode::IncompatibleBasis, "fourier basis needs a fano-cp1 space");
  require(modes >= 0 && l_max >= std::max(1, modes) && l_max <= 200, ErrorCode::ParameterOutOfRange,
          "fourier basis needs 0 <= modes <= lmax <= 200");
  require(latitude_points >= l_max + 1, ErrorCode::ParameterOutOfRange, "fourier basis needs nlat >= lmax + 1");
  DiscreteBasis b = basis_shell(BasisKind::FourierLatitudeGrid, space);
  b.fourier_modes = modes;
  b.l_max = l_max;
  b.latitude_points = latitude_points;
  for (int m = -modes; m <= modes; ++m) {
    std::vector<int> block;
    for (int l = std::abs(m); l <= l_max; ++l) {
      block.push_back(static_cast<int>(b.labels.size()));
      b.labels.push_back({m, l});
    }
    b.blocks.push_back(std::move(block));
  }
  b.cardinality = static_cast<int>(b.labels.size());
  return b;
}

DiscreteBasis fock_basis(const ModelSpace& space, int max_degree) {
  require(space.kind == SpaceKind::ComplexGaussian, ErrorCode::IncompatibleBasis,
          "fock basis needs a complex-gaussian space");
  require(max_degree >= 1 && max_degree <= 12, ErrorCode::ParameterOutOfRange, "fock degree must lie in [1, 12]");
  DiscreteBasis b = basis_shell(BasisKind::MonomialFock, space);
  b.max_degree = max_degree;
  const int n = space.n;
  std::map<std::vector<int>, std::vector<int>> by_charge;
  for (int total = 0; total <= max_degree; ++total)
    for (int p = total; p >= 0; --p)
      for (const auto& a : compositions(n, p))
        for (const auto& bb : compositions(n, total - p)) {
          std::vector<int> lab = a;
          lab.insert(lab.end(), bb.begin(), bb.end());
          std::vector<int> charge(sz(n));
          for (int i = 0; i < n; ++i) charge[sz(i)] = a[sz(i)] - bb[sz(i)];
          by_charge[charge].push_back(static_cast<int>(b.labels.size()));
          b.labels.push_back(std::move(lab));
        }
  for (auto& [c, idx] : by_charge) b.blocks.push_back(std::move(idx));
  b.cardinality = static_cast<int>(b.labels.size());
  require(b.labels.size() <= 20000, ErrorCode::ParameterOutOfRange, "fock basis too large");
  return b;
}

DiscreteBasis default_basis(const ModelSpace& space) {
  switch (space.kind) {
    case SpaceKind::GaussianEuclidean: {
      int deg = 30;
      while (std::pow(deg + 1.0, space.n) > 30000.0) --deg;
      return hermite_basis(space, deg);
    }
    case SpaceKind::RoundSphere: {
      static constexpr int lmax[] = {0, 0, 10, 8, 6, 5};
      return harmonic_basis(space, lmax[space.n]);
    }
    case SpaceKind::SphereGaussianProduct: {
      const int d = space.sphere_dimension();
      const int l = d == 2 ? 6 : (d == 3 ? 5 : 4);
      const int deg = space.k == 1 ? 12 : (space.k == 2 ? 6 : 4);
      return product_basis(space, l, deg);
    }
    case SpaceKind::ComplexGaussian: return fock_basis(space, space.n >= 3 ? 3 : 4);
    case SpaceKind::FanoCP1: return fourier_basis(space, 3, 32, 128);
  }
  fail(ErrorCode::IncompatibleBasis, "no default basis");
}

DiscreteBasis make_basis(const ModelSpace& space, const std::string& descriptor) {
  if (descriptor.find_first_not_of(" \t") == std::string::npos) return default_basis(space);
  const SpaceDescriptor desc = parse_space_descriptor(descriptor);
  const DiscreteBasis def = default_basis(space);
  auto get = [&](const std::string& key, int fallback) {
    auto it = desc.params.find(key);
    if (it == desc.params.end()) return fallback;
    try {
      std::size_t used = 0;
      const int v = std::stoi(it->second, &used);
      if (used != it->second.size()) throw std::invalid_argument(it->second);
      return v;
    } catch (const std::exception&) {
      fail(ErrorCode::ParameterOutOfRange, "basis parameter '" + key + "' must be an integer");
    }
  };
  auto check_keys = [&](std::initializer_list<const char*> allowed) {
    for (const auto& [key, v] : desc.params)
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
        fail(ErrorCode::ParameterOutOfRange, "unknown basis parameter '" + key + "'");
  };
  if (desc.kind == "hermite") {
    check_keys({"deg"});
    return hermite_basis(space, get("deg", def.kind == BasisKind::HermiteTensor ? def.max_degree : 30));
  }
  if (desc.kind == "harmonics") {
    check_keys({"lmax"});
    return harmonic_basis(space, get("lmax", def.kind == BasisKind::SphericalHarmonics ? def.l_max : 8));
  }
  if (desc.kind == "product") {
    check_keys({"lmax", "deg"});
    const bool d = def.kind == BasisKind::ProductBasis;
    return product_basis(space, get("lmax", d ? def.l_max : 6), get("deg", d ? def.max_degree : 12));
  }
  if (desc.kind == "fourier") {
    check_keys({"modes", "lmax", "nlat"});
    const bool d = def.kind == BasisKind::FourierLatitudeGrid;
    const int lmax = get("lmax", d ? def.l_max : 32);
    return fourier_basis(space, get("modes", d ? def.fourier_modes : 3), lmax,
                         get("nlat", std::max(d ? def.latitude_points : 128, lmax + 1)));
  }
  if (desc.kind == "fock") {
    check_keys({"deg"});
    return fock_basis(space, get("deg", def.kind == BasisKind::MonomialFock ? def.max_degree : 4));
  }
  fail(ErrorCode::IncompatibleBasis, "unknown basis kind '" + desc.kind + "'");
}

std::vector<std::vector<double>> hermite_functions(int max_degree, double lambda, double x, int derivs) {
  std::vector<std::vector<double>> out(sz(derivs + 1), std::vector<double>(sz(max_degree + 1), 0.0));
  const double y = std::sqrt(lambda) * x;
  auto& h = out[0];
  h[0] = std::pow(lambda / (2 * std::numbers::pi), 0.25);
  if (max_degree >= 1) h[1] = y * h[0];
  for (int k = 1; k < max_degree; ++k)
    h[sz(k + 1)] = (y * h[sz(k)] - std::sqrt(static_cast<double>(k)) * h[sz(k - 1)]) / std::sqrt(k + 1.0);
  // h_k' = sqrt(lambda k) h_{k-1}
  for (int m = 1; m <= derivs; ++m)
    for (int k = 1; k <= max_degree; ++k)
      out[sz(m)][sz(k)] = std::sqrt(lambda * k) * out[sz(m - 1)][sz(k - 1)];
  return out;
}

std::vector<ModeSample> legendre_mode_samples(int m, int l_max, double theta) {
  const int mu = std::abs(m);
  require(l_max >= mu, ErrorCode::ParameterOutOfRange, "l_max below |m|");
  const double t = std::cos(theta), s = std::sin(theta);
  const auto n = sz(l_max - mu + 1);
  std::vector<double> p(n), dp(n), ddp(n);
  double c = 1 / std::sqrt(2.0);
  for (int k = 1; k <= mu; ++k) c *= std::sqrt((2.0 * k + 1) / (2.0 * k));
  p[0] = c;
  if (n > 1) {
    const double f = std::sqrt(2.0 * mu + 3);
    p[1] = f * t * c;
    dp[1] = f * c;
  }
  for (std::size_t i = 2; i < n; ++i) {
    const double l = mu + static_cast<double>(i);
    const double a = std::sqrt((4 * l * l - 1) / (l * l - mu * mu));
    const double b = std::sqrt(((l - 1) * (l - 1) - mu * mu) / (4 * (l - 1) * (l - 1) - 1));
    p[i] = a * (t * p[i - 1] - b * p[i - 2]);
    dp[i] = a * (p[i - 1] + t * dp[i - 1] - b * dp[i - 2]);
    ddp[i] = a * (2 * dp[i - 1] + t * ddp[i - 1] - b * ddp[i - 2]);
  }
  const double s_mu = std::pow(s, mu);
  const double s_mu1 = mu >= 1 ? std::pow(s, mu - 1) : 0.0;
  const double s_mu2 = mu >= 2 ? std::pow(s, mu - 2) : 0.0;
  std::vector<ModeSample> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].a = s_mu * p[i];
    out[i].a_theta = mu * s_mu1 * t * p[i] - s_mu * s * dp[i];
    out[i].a_thetatheta = mu * (mu - 1) * s_mu2 * t * t * p[i] - mu * s_mu * p[i] - (2 * mu + 1) * s_mu * t * dp[i] +
                          s_mu * s * s * ddp[i];
  }
  return out;
}

RicciPotential ricci_potential_cp1(const ModelSpace& space, int latitude_points) {
  require(space.kind == SpaceKind::FanoCP1 && space.cp1, ErrorCode::PotentialUnavailable,
          "Ricci potential is defined for fano-cp1 spaces only");
  const Cp1Geometry& geo = *space.cp1;
  const double target = 4 * std::numbers::pi;
  if (std::abs(geo.area - target) > 1e-10 * target)
    fail(ErrorCode::GaussBonnetViolated,
         "area " + std::to_string(geo.area) + " differs from 4 pi; int (K - 1) dA = " + std::to_string(target - geo.area));
  RicciPotential out;
  LegendreSeries G;
  G.coeffs.assign(1, 0.0);
  if (!geo.perturbation.empty()) {
    const auto rhs = [&](double t) { return 2 * (1 - std::exp(2 * geo.sigma(t))); };
    bool converged = false;
    for (int degree = 32; degree <= 1024 && !converged; degree *= 2) {
      const LegendreSeries h = LegendreSeries::fit(rhs, degree, 2 * degree + 16);
      double peak = 0, tail = 0;
      for (double c : h.coeffs) peak = std::max(peak, std::abs(c));
      for (int k = degree - 3; k <= degree; ++k) tail = std::max(tail, std::abs(h.coeffs[sz(k)]));
      if (tail > 1e-13 * std::max(1.0, peak)) continue;
      if (std::abs(h.coeffs[0]) > 1e-9)
        fail(ErrorCode::GaussBonnetViolated, "mean of 1 - e^{2 sigma} is " + std::to_string(h.coeffs[0] / 2));
      G.coeffs.assign(h.coeffs.size(), 0.0);
      for (std::size_t k = 1; k < h.coeffs.size(); ++k) G.coeffs[k] = -h.coeffs[k] / (k * (k + 1.0));
      out.degree = degree;
      converged = true;
    }
    if (!converged) fail(ErrorCode::PoissonSolveFailed, "Legendre coefficients of the source did not decay");
  }
  LegendreSeries F;
  F.coeffs.assign(std::max(G.coeffs.size(), geo.sigma.coeffs.size()), 0.0);
  for (std::size_t k = 0; k < G.coeffs.size(); ++k) F.coeffs[k] += G.coeffs[k];
  for (std::size_t k = 0; k < geo.sigma.coeffs.size(); ++k) F.coeffs[k] -= 2 * geo.sigma.coeffs[k];
  F.coeffs[0] -= F(1.0);
  out.series = F;
  const QuadratureRule lat = gauss_legendre(latitude_points);
  for (std::size_t q = 0; q < lat.size(); ++q) {
    const double t = lat.nodes[q];
    const auto f = F.eval(t);
    const double sigma = geo.sigma(t);
    const double lap0 = (1 - t * t) * f.d2 - 2 * t * f.d1;
    const double residual = std::abs(0.5 * std::exp(-2 * sigma) * lap0 - (geo.curvature(t) - 1));
    out.t.push_back(t);
    out.values.push_back(f.value);
    out.residual_max = std::max(out.residual_max, residual);
  }
  if (!(out.residual_max <= 1e-8))
    fail(ErrorCode::PoissonSolveFailed, "plug-back residual " + std::to_string(out.residual_max) + " exceeds 1e-8");
  return out;
}

AssembledOperator assemble(const ModelSpace& space, const DiscreteBasis& basis, const AssemblyOptions& options) {
  require_space(basis, space);
  AssembledOperator op;
  op.space = space;
  op.basis = basis;
  op.convention = options.convention.value_or(space.convention);
  op.blocks = basis.blocks;
  if (op.convention != space.convention)
    require(space.kind == SpaceKind::RoundSphere && space.n == 2, ErrorCode::IncompatibleBasis,
            "only the 2-sphere may be assembled in the complex convention");

  switch (basis.kind) {
    case BasisKind::HermiteTensor: {
      const int deg = basis.max_degree;
      const int points = options.quadrature_points > 0 ? options.quadrature_points : deg + 10;
      auto [A1, M1] = hermite_1d(deg, space.lambda, points);
      const SparseD a1 = dense_to_sparse_real(A1, options.prune);
      const SparseD m1 = dense_to_sparse_real(M1, options.prune);
      SparseD M = m1, A = a1;
      for (int axis = 1; axis < space.n; ++axis) {
        A = kron(A, m1) + kron(M, a1);
        M = kron(M, m1);
      }
      op.stiffness = to_complex(A);
      op.gram = to_complex(M);
      const auto [lo, hi] = extreme_eigenvalues(M1);
      op.gram_min_eigenvalue = std::pow(lo, space.n);
      op.gram_max_eigenvalue = std::pow(hi, space.n);
      op.factor_stiffness.assign(sz(space.n), A1);
      op.factor_gram.assign(sz(space.n), M1);
      break;
    }
    case BasisKind::SphericalHarmonics: {
      const int points = options.quadrature_points > 0 ? options.quadrature_points : basis.l_max + 2;
      auto [A, M] = sphere_matrices(space.n, space.radius, basis.l_max, points, basis.labels);
      if (op.convention == WeightConvention::Complex) A *= 0.5;
      op.stiffness = dense_to_sparse(A, options.prune);
      op.gram = dense_to_sparse(M, options.prune);
      std::tie(op.gram_min_eigenvalue, op.gram_max_eigenvalue) = extreme_eigenvalues(M);
      op.factor_stiffness = {A};
      op.factor_gram = {M};
      break;
    }
    case BasisKind::ProductBasis: {
      const int d = space.sphere_dimension();
      const int points = options.quadrature_points > 0 ? options.quadrature_points : basis.l_max + 2;
      auto [As, Ms] = sphere_matrices(d, space.radius, basis.l_max, points, basis.sphere_labels);
      auto [Ah, Mh] = hermite_1d(basis.max_degree, 0.5, basis.max_degree + 10);
      const SparseD as = dense_to_sparse_real(As, options.prune), ms = dense_to_sparse_real(Ms, options.prune);
      const SparseD ah = dense_to_sparse_real(Ah, options.prune), mh = dense_to_sparse_real(Mh, options.prune);
      SparseD Mt = mh, At = ah;
      for (int axis = 1; axis < space.k; ++axis) {
        At = kron(At, mh) + kron(Mt, ah);
        Mt = kron(Mt, mh);
      }
      op.stiffness = to_complex(SparseD(kron(as, Mt) + kron(ms, At)));
      op.gram = to_complex(kron(ms, Mt));
      const auto [slo, shi] = extreme_eigenvalues(Ms);
      const auto [hlo, hhi] = extreme_eigenvalues(Mh);
      op.gram_min_eigenvalue = slo * std::pow(hlo, space.k);
      op.gram_max_eigenvalue = shi * std::pow(hhi, space.k);
      op.factor_stiffness = {As};
      op.factor_gram = {Ms};
      for (int axis = 0; axis < space.k; ++axis) {
        op.factor_stiffness.push_back(Ah);
        op.factor_gram.push_back(Mh);
      }
      break;
    }
    case BasisKind::FourierLatitudeGrid: {
      const Cp1Geometry& geo = *space.cp1;
      const int points = options.quadrature_points > 0 ? options.quadrature_points : basis.latitude_points;
      const QuadratureRule lat = gauss_legendre(points);
      std::vector<Triplet> ta, tm;
      op.gram_min_eigenvalue = std::numeric_limits<double>::infinity();
      op.gram_max_eigenvalue = 0;
      for (const auto& block : basis.blocks) {
        const int m = basis.labels[sz(block.front())][0];
        const int nb = static_cast<int>(block.size());
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nb, nb), M = Eigen::MatrixXd::Zero(nb, nb);
        Eigen::VectorXd val(nb), dm(nb);
        for (std::size_t q = 0; q < lat.size(); ++q) {
          const double t = lat.nodes[q], theta = std::acos(t), s = std::sin(theta);
          const auto samples = legendre_mode_samples(m, basis.l_max, theta);
          for (int i = 0; i < nb; ++i) {
            val(i) = samples[sz(i)].a;
            dm(i) = samples[sz(i)].a_theta - m * samples[sz(i)].a / s;
          }
          const double eF = std::exp(geo.potential(t));
          const double w = lat.weights[q];
          M.selfadjointView<Eigen::Upper>().rankUpdate(val, w * eF * std::exp(2 * geo.sigma(t)));
          A.selfadjointView<Eigen::Upper>().rankUpdate(dm, 0.5 * w * eF);
        }
        A = symmetrized(A);
        M = symmetrized(M);
        const auto [lo, hi] = extreme_eigenvalues(M);
        op.gram_min_eigenvalue = std::min(op.gram_min_eigenvalue, lo);
        op.gram_max_eigenvalue = std::max(op.gram_max_eigenvalue, hi);
        const double cutA = options.prune * A.cwiseAbs().maxCoeff(), cutM = options.prune * M.cwiseAbs().maxCoeff();
        for (int j = 0; j < nb; ++j)
          for (int i = 0; i <= j; ++i) {
            const int gi = block[sz(i)], gj = block[sz(j)];
            if (std::abs(A(i, j)) > cutA) {
              ta.emplace_back(gi, gj, A(i, j));
              if (i != j) ta.emplace_back(gj, gi, A(i, j));
            }
            if (std::abs(M(i, j)) > cutM) {
              tm.emplace_back(gi, gj, M(i, j));
              if (i != j) tm.emplace_back(gj, gi, M(i, j));
            }
          }
      }
      op.stiffness.resize(basis.cardinality, basis.cardinality);
      op.gram.resize(basis.cardinality, basis.cardinality);
      op.stiffness.setFromTriplets(ta.begin(), ta.end());
      op.gram.setFromTriplets(tm.begin(), tm.end());
      break;
    }
    case BasisKind::MonomialFock: {
      const int n = space.n;
      const double pin = std::pow(std::numbers::pi, n);
      auto fact = [](int k) { return std::tgamma(k + 1.0); };
      auto norm = [&](const std::vector<int>& lab) {
        double v = pin;
        for (int i = 0; i < n; ++i) v *= fact(lab[sz(i)] + lab[sz(n + i)]);
        return std::sqrt(v);
      };
      std::vector<Triplet> ta, tm;
      for (const auto& block : basis.blocks) {
        for (std::size_t jj = 0; jj < block.size(); ++jj)
          for (std::size_t ii = 0; ii <= jj; ++ii) {
            const int a = block[ii], b = block[jj];
            const auto& la = basis.labels[sz(a)];
            const auto& lb = basis.labels[sz(b)];
            // phi_a = z^alpha zbar^beta, phi_b = z^gamma zbar^delta; same charge inside a block.
            double g = pin, stiff = 0;
            std::vector<int> bg(sz(n));
            for (int i = 0; i < n; ++i) {
              bg[sz(i)] = la[sz(n + i)] + lb[sz(i)];
              g *= fact(bg[sz(i)]);
            }
            for (int j = 0; j < n; ++j) {
              const int beta = la[sz(n + j)], delta = lb[sz(n + j)];
              if (beta == 0 || delta == 0) continue;
              double v = pin * beta * delta;
              for (int i = 0; i < n; ++i) v *= fact(bg[sz(i)] - (i == j ? 1 : 0));
              stiff += v;
            }
            const double scale = norm(la) * norm(lb);
            g /= scale;
            stiff /= scale;
            tm.emplace_back(a, b, g);
            if (a != b) tm.emplace_back(b, a, g);
            if (stiff != 0) {
              ta.emplace_back(a, b, stiff);
              if (a != b) ta.emplace_back(b, a, stiff);
            }
          }
      }
      op.stiffness.resize(basis.cardinality, basis.cardinality);
      op.gram.resize(basis.cardinality, basis.cardinality);
      op.stiffness.setFromTriplets(ta.begin(), ta.end());
      op.gram.setFromTriplets(tm.begin(), tm.end());
      op.gram_min_eigenvalue = std::numeric_limits<double>::infinity();
      op.gram_max_eigenvalue = 0;
      for (const auto& block : basis.blocks) {
        Eigen::MatrixXd M(static_cast<Eigen::Index>(block.size()), static_cast<Eigen::Index>(block.size()));
        for (std::size_t i = 0; i < block.size(); ++i)
          for (std::size_t j = 0; j < block.size(); ++j)
            M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = op.gram.coeff(block[i], block[j]).real();
        const auto [lo, hi] = extreme_eigenvalues(M);
        op.gram_min_eigenvalue = std::min(op.gram_min_eigenvalue, lo);
        op.gram_max_eigenvalue = std::max(op.gram_max_eigenvalue, hi);
      }
      break;
    }
  }
  op.stiffness.makeCompressed();
  op.gram.makeCompressed();
  op.real_entries = true;
  for (Eigen::Index k = 0; k < op.stiffness.outerSize(); ++k)
    for (SparseMatrixC::InnerIterator it(op.stiffness, k); it; ++it)
      if (it.value().imag() != 0) op.real_entries = false;
  check_gram(op, options.gram_condition_floor);
  return op;
}

Jet basis_jet(const ModelSpace& space, const DiscreteBasis& basis, int index, std::span<const Jet> chart) {
  require_space(basis, space);
  require(index >= 0 && index < basis.cardinality, ErrorCode::ParameterOutOfRange, "basis index out of range");
  const auto& lab = basis.labels[sz(index)];
  switch (basis.kind) {
    case BasisKind::HermiteTensor: {
      Jet acc = Jet::constant(chart[0].dim(), chart[0].order(), 1.0);
      for (int i = 0; i < space.n; ++i) acc = acc * hermite_jets(lab[sz(i)], space.lambda, chart[sz(i)])[sz(lab[sz(i)])];
      return acc;
    }
    case BasisKind::SphericalHarmonics: {
      const auto X = embedding(space, chart);
      return sphere_basis_jets({lab}, space.n, basis.l_max, space.radius, X)[0];
    }
    case BasisKind::ProductBasis: {
      const int d = space.sphere_dimension();
      const auto X = embedding(space, chart);
      Jet acc = sphere_basis_jets({basis.sphere_labels[sz(lab[0])]}, d, basis.l_max, space.radius, X)[0];
      for (int i = 0; i < space.k; ++i)
        acc = acc * hermite_jets(lab[sz(i + 1)], 0.5, chart[sz(d + i)])[sz(lab[sz(i + 1)])];
      return acc;
    }
    default: fail(ErrorCode::IncompatibleBasis, "basis_jet covers real bases only");
  }
}

std::vector<Jet> expansion_jets(const ModelSpace& space, const DiscreteBasis& basis, std::span<const double> coeffs,
                                const QuadratureRule& rule, int order) {
  require_space(basis, space);
  require(coeffs.size() == sz(basis.cardinality), ErrorCode::ParameterOutOfRange, "coefficient vector size mismatch");
  require(rule.dim == space.chart_dimension(), ErrorCode::PointOutsideChart, "rule does not match the chart");
  std::vector<Jet> out;
  out.reserve(rule.size());
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const auto x = chart_jets(rule.node(q), order);
    Jet u = Jet::constant(space.chart_dimension(), order, 0.0);
    switch (basis.kind) {
      case BasisKind::HermiteTensor: {
        std::vector<std::vector<Jet>> h;
        for (int i = 0; i < space.n; ++i) h.push_back(hermite_jets(basis.max_degree, space.lambda, x[sz(i)]));
        for (int a = 0; a < basis.cardinality; ++a) {
          if (coeffs[sz(a)] == 0) continue;
          const auto& lab = basis.labels[sz(a)];
          Jet term = coeffs[sz(a)] * h[0][sz(lab[0])];
          for (int i = 1; i < space.n; ++i) term = term * h[sz(i)][sz(lab[sz(i)])];
          u += term;
        }
        break;
      }
      case BasisKind::SphericalHarmonics: {
        const auto X = embedding(space, x);
        const auto phis = sphere_basis_jets(basis.labels, space.n, basis.l_max, space.radius, X);
        for (int a = 0; a < basis.cardinality; ++a) u += coeffs[sz(a)] * phis[sz(a)];
        break;
      }
      case BasisKind::ProductBasis: {
        const int d = space.sphere_dimension();
        const auto X = embedding(space, x);
        const auto phis = sphere_basis_jets(basis.sphere_labels, d, basis.l_max, space.radius, X);
        std::vector<std::vector<Jet>> h;
        for (int i = 0; i < space.k; ++i) h.push_back(hermite_jets(basis.max_degree, 0.5, x[sz(d + i)]));
        const std::size_t per_sphere = basis.labels.size() / basis.sphere_labels.size();
        for (std::size_t s = 0; s < basis.sphere_labels.size(); ++s) {
          Jet flat;
          for (std::size_t j = 0; j < per_sphere; ++j) {
            const std::size_t a = s * per_sphere + j;
            if (coeffs[a] == 0) continue;
            const auto& lab = basis.labels[a];
            Jet term = coeffs[a] * h[0][sz(lab[1])];
            for (int i = 1; i < space.k; ++i) term = term * h[sz(i)][sz(lab[sz(i + 1)])];
            flat += term;
          }
          if (flat.order() > 0 || flat.dim() > 0) u += phis[s] * flat;
        }
        break;
      }
      default: fail(ErrorCode::IncompatibleBasis, "expansion_jets covers real bases only");
    }
    out.push_back(std::move(u));
  }
  return out;
}

std::vector<double> apply(const ModelSpace& space, const TestFunction& u, const QuadratureRule& rule) {
  require(space.convention == WeightConvention::Real, ErrorCode::IncompatibleBasis,
          "real apply needs a real-convention space");
  if (!u.jet) fail(ErrorCode::SymbolicDerivativeUnavailable, "test function '" + u.name + "' has no symbolic form");
  require(rule.dim == space.chart_dimension(), ErrorCode::PointOutsideChart, "rule does not match the chart");
  std::vector<double> out(rule.size());
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const PointGeometry geo = point_geometry(space, rule.node(q), 2);
    out[q] = weighted_laplacian(geo, u.jet(geo.chart)).value();
  }
  return out;
}

std::vector<cplx> apply(const ModelSpace& space, const ComplexPolynomial& u, const QuadratureRule& rule) {
  require(space.kind == SpaceKind::ComplexGaussian, ErrorCode::IncompatibleBasis,
          "polynomial apply needs a complex-gaussian space");
  require(u.n() == space.n, ErrorCode::ParameterOutOfRange, "polynomial dimension mismatch");
  require(rule.dim == space.chart_dimension(), ErrorCode::PointOutsideChart, "rule does not match the chart");
  const ComplexPolynomial lu = weighted_dbar_laplacian(u);
  std::vector<cplx> out(rule.size());
  for (std::size_t q = 0; q < rule.size(); ++q) out[q] = lu.at_chart(rule.node(q));
  return out;
}

std::vector<cplx> apply_fourier(const ModelSpace& space, const DiscreteBasis& basis, std::span<const cplx> coeffs,
                                const QuadratureRule& rule) {
  require_space(basis, space);
  require(basis.kind == BasisKind::FourierLatitudeGrid, ErrorCode::IncompatibleBasis, "fourier basis required");
  require(coeffs.size() == sz(basis.cardinality), ErrorCode::ParameterOutOfRange, "coefficient vector size mismatch");
  require(rule.dim == 2, ErrorCode::PointOutsideChart, "rule does not match the chart");
  const Cp1Geometry& geo = *space.cp1;
  std::map<double, std::vector<std::pair<int, cplx>>> cache;  // theta -> (m, R_m)
  std::vector<cplx> out(rule.size());
  const double norm = 1 / std::sqrt(2 * std::numbers::pi);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double theta = rule.node(q)[0], phi = rule.node(q)[1];
    auto it = cache.find(theta);
    if (it == cache.end()) {
      const double t = std::cos(theta), s = std::sin(theta);
      const auto sig = geo.sigma.eval(t);
      const auto F = geo.potential.eval(t);
      const double F_theta = -s * F.d1;
      std::vector<std::pair<int, cplx>> modes;
      for (const auto& block : basis.blocks) {
        const int m = basis.labels[sz(block.front())][0];
        const auto samples = legendre_mode_samples(m, basis.l_max, theta);
        cplx A = 0, A1 = 0, A2 = 0;
        for (std::size_t i = 0; i < block.size(); ++i) {
          const cplx c = coeffs[sz(block[i])];
          A += c * samples[i].a;
          A1 += c * samples[i].a_theta;
          A2 += c * samples[i].a_thetatheta;
        }
        const cplx R = 0.5 * std::exp(-2 * sig.value) *
                       (A2 + (t / s) * A1 - static_cast<double>(m * m) * A / (s * s) + F_theta * (A1 - double(m) * A / s));
        modes.emplace_back(m, R);
      }
      it = cache.emplace(theta, std::move(modes)).first;
    }
    cplx v = 0;
    for (const auto& [m, R] : it->second) v += R * std::polar(norm, m * phi);
    out[q] = v;
  }
  return out;
}

std::vector<cplx> apply_sampled(const ModelSpace& space, const GridSamples& g, double smoothness_tol) {
  const int dim = space.chart_dimension();
  require(space.kind == SpaceKind::GaussianEuclidean || space.kind == SpaceKind::ComplexGaussian,
          ErrorCode::IncompatibleBasis, "sampled apply needs a flat chart");
  require(g.points.size() == sz(dim) && g.spacing.size() == sz(dim) && g.lower.size() == sz(dim),
          ErrorCode::PointOutsideChart, "grid dimension mismatch");
  std::size_t total = 1;
  for (int p : g.points) {
    if (p < 5) fail(ErrorCode::InsufficientSmoothness, "fourth-order differences need >= 5 points per axis");
    total *= sz(p);
  }
  require(g.values.size() == total, ErrorCode::ParameterOutOfRange, "sample count does not match the grid");
  std::vector<std::size_t> stride(sz(dim), 1);
  for (int a = dim - 2; a >= 0; --a) stride[sz(a)] = stride[sz(a + 1)] * sz(g.points[sz(a + 1)]);
  std::vector<int> inner(sz(dim));
  std::size_t inner_total = 1;
  for (int a = 0; a < dim; ++a) {
    inner[sz(a)] = g.points[sz(a)] - 4;
    inner_total *= sz(inner[sz(a)]);
  }
  std::vector<cplx> out(inner_total), low(inner_total);
  std::vector<int> idx(sz(dim), 0);
  double peak = 0, gap = 0;
  for (std::size_t k = 0; k < inner_total; ++k) {
    std::size_t rem = k, flat = 0;
    for (int a = dim - 1; a >= 0; --a) {
      idx[sz(a)] = static_cast<int>(rem % sz(inner[sz(a)])) + 2;
      rem /= sz(inner[sz(a)]);
    }
    for (int a = 0; a < dim; ++a) flat += sz(idx[sz(a)]) * stride[sz(a)];
    std::vector<cplx> d1(sz(dim)), d2(sz(dim)), d1l(sz(dim)), d2l(sz(dim));
    for (int a = 0; a < dim; ++a) {
      const std::size_t st = stride[sz(a)];
      const cplx m2 = g.values[flat - 2 * st], m1 = g.values[flat - st], c0 = g.values[flat];
      const cplx p1 = g.values[flat + st], p2 = g.values[flat + 2 * st];
      const double h = g.spacing[sz(a)];
      d1[sz(a)] = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12 * h);
      d2[sz(a)] = (-m2 + 16.0 * m1 - 30.0 * c0 + 16.0 * p1 - p2) / (12 * h * h);
      d1l[sz(a)] = (p1 - m1) / (2 * h);
      d2l[sz(a)] = (p1 - 2.0 * c0 + m1) / (h * h);
    }
    auto combine = [&](const std::vector<cplx>& D1, const std::vector<cplx>& D2) {
      cplx v = 0;
      if (space.kind == SpaceKind::GaussianEuclidean) {
        for (int a = 0; a < dim; ++a) {
          const double x = g.lower[sz(a)] + idx[sz(a)] * g.spacing[sz(a)];
          v += D2[sz(a)] - space.lambda * x * D1[sz(a)];
        }
      } else {
        for (int j = 0; j < space.n; ++j) {
          const double x = g.lower[sz(2 * j)] + idx[sz(2 * j)] * g.spacing[sz(2 * j)];
          const double y = g.lower[sz(2 * j + 1)] + idx[sz(2 * j + 1)] * g.spacing[sz(2 * j + 1)];
          const cplx dbar = 0.5 * (D1[sz(2 * j)] + cplx(0, 1) * D1[sz(2 * j + 1)]);
          v += 0.25 * (D2[sz(2 * j)] + D2[sz(2 * j + 1)]) - cplx(x, -y) * dbar;
        }
      }
      return v;
    };
    out[k] = combine(d1, d2);
    low[k] = combine(d1l, d2l);
    peak = std::max(peak, std::abs(out[k]));
    gap = std::max(gap, std::abs(out[k] - low[k]));
  }
  if (gap > smoothness_tol * (1 + peak))
    fail(ErrorCode::InsufficientSmoothness, "second- and fourth-order stencils disagree by " + std::to_string(gap));
  return out;
}

IdentityReport selfadjointness_report(const AssembledOperator& op, int pairs, std::uint64_t seed) {
  IdentityReport r;
  r.identity_name = "selfadjointness";
  r.tolerance = 1e-12;
  const Eigen::Index n = op.size();
  const SparseMatrixC adj = op.stiffness.adjoint();
  const double norm_a = op.stiffness.norm();
  const double herm = (op.stiffness - adj).norm();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  double worst = 0, sum2 = 0;
  for (int p = 0; p < pairs; ++p) {
    Eigen::VectorXcd u(n), v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      u(i) = {normal(rng), op.real_entries ? 0.0 : normal(rng)};
      v(i) = {normal(rng), op.real_entries ? 0.0 : normal(rng)};
    }
    u /= std::sqrt(std::abs(u.dot(op.gram * u)));
    v /= std::sqrt(std::abs(v.dot(op.gram * v)));
    const Eigen::VectorXcd au = op.stiffness * u, av = op.stiffness * v;
    const double d = std::abs(v.dot(au) - av.dot(u)) / (norm_a > 0 ? norm_a : 1.0);
    worst = std::max(worst, d);
    sum2 += d * d;
  }
  r.values["hermitian_defect"] = norm_a > 0 ? herm / norm_a : herm;
  r.values["norm"] = norm_a;
  r.max_residual = std::max(worst, r.values["hermitian_defect"]);
  r.l2_residual = pairs > 0 ? std::sqrt(sum2 / pairs) : 0.0;
  r.sample_description = std::to_string(pairs) + " random pairs, gram-normalized, relative to ||A||_F";
  r.decide();
  return r;
}

CollocationOperator collocation_operator(const ModelSpace& space, double radius, int interior_points) {
  require(space.kind == SpaceKind::GaussianEuclidean && space.n == 1, ErrorCode::IncompatibleBasis,
          "collocation diagnostic is defined on the 1-D gaussian");
  require(interior_points >= 3, ErrorCode::ParameterOutOfRange, "collocation needs >= 3 interior points");
  const int n = interior_points;
  const double h = 2 * radius / (n + 1);
  CollocationOperator c;
  c.nodes.resize(n);
  c.mass.resize(n);
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double x = -radius + (i + 1) * h;
    c.nodes(i) = x;
    c.mass(i) = h * std::exp(-0.5 * space.lambda * x * x);
    L(i, i) = 2 / (h * h);
    if (i > 0) L(i, i - 1) = -1 / (h * h) - space.lambda * x / (2 * h);
    if (i + 1 < n) L(i, i + 1) = -1 / (h * h) + space.lambda * x / (2 * h);
  }
  c.stiffness = c.mass.asDiagonal() * L;
  return c;
}

IdentityReport collocation_defect_report(const CollocationOperator& op, int pairs, std::uint64_t seed) {
  IdentityReport r;
  r.identity_name = "selfadjointness (strong-form collocation)";
  r.tolerance = 1e-12;
  r.expected_nonzero = true;
  const Eigen::Index n = op.stiffness.rows();
  const double norm_a = op.stiffness.norm();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  double worst = 0, sum2 = 0;
  for (int p = 0; p < pairs; ++p) {
    Eigen::VectorXd u(n), v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      u(i) = normal(rng);
      v(i) = normal(rng);
    }
    u /= std::sqrt(u.dot(op.mass.asDiagonal() * u));
    v /= std::sqrt(v.dot(op.mass.asDiagonal() * v));
    const double d = std::abs(v.dot(op.stiffness * u) - u.dot(op.stiffness * v)) / norm_a;
    worst = std::max(worst, d);
    sum2 += d * d;
  }
  r.values["hermitian_defect"] = (op.stiffness - op.stiffness.transpose()).norm() / norm_a;
  r.max_residual = std::max(worst, r.values["hermitian_defect"]);
  r.l2_residual = std::sqrt(sum2 / std::max(1, pairs));
  r.sample_description = "strong-form collocation, nonzero defect expected";
  r.decide();
  return r;
}

FiniteDifference1D finite_difference_1d(double lambda, double h, double radius) {
  require(h > 0 && radius > 2 * h && lambda > 0, ErrorCode::ParameterOutOfRange, "invalid finite-difference grid");
  FiniteDifference1D fd;
  fd.h = h;
  const int half = static_cast<int>(std::ceil(radius / h - 1e-9));
  fd.radius = half * h;
  const int n = 2 * half - 1;
  fd.diagonal.resize(n);
  fd.offdiagonal.resize(n - 1);
  fd.mass.resize(n);
  auto density = [&](double x) { return std::exp(-0.5 * lambda * x * x); };
  for (int i = 0; i < n; ++i) {
    const double x = -fd.radius + (i + 1) * h;
    fd.mass(i) = density(x);
    fd.diagonal(i) = (density(x - 0.5 * h) + density(x + 0.5 * h)) / (h * h);
    if (i + 1 < n) fd.offdiagonal(i) = -density(x + 0.5 * h) / (h * h);
  }
  return fd;
}

std::vector<double> finite_difference_eigenvalues(const FiniteDifference1D& fd, int count) {
  const Eigen::Index n = fd.diagonal.size();
  Eigen::VectorXd d(n), e(std::max<Eigen::Index>(n - 1, 0));
  for (Eigen::Index i = 0; i < n; ++i) d(i) = fd.diagonal(i) / fd.mass(i);
  for (Eigen::Index i = 0; i + 1 < n; ++i) e(i) = fd.offdiagonal(i) / std::sqrt(fd.mass(i) * fd.mass(i + 1));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < std::min<Eigen::Index>(count, n); ++i) out.push_back(es.eigenvalues()(i));
  return out;
}

}  // namespace wlap
