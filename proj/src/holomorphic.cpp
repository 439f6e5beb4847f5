#include "wlap/holomorphic.hpp"

#include <cmath>
#include <numbers>

#include "wlap/error.hpp"

namespace wlap {
namespace {

std::size_t sz(int v) { return static_cast<std::size_t>(v); }

double gaussian_norm2(const ComplexPolynomial& p) { return (p * p.conjugate()).gaussian_integral().real(); }

void require_cp1(const ModelSpace& space, const Cp1Function& u) {
  require(space.kind == SpaceKind::FanoCP1 && space.cp1, ErrorCode::IncompatibleBasis, "fano-cp1 space required");
  require(u.basis && u.basis->kind == BasisKind::FourierLatitudeGrid, ErrorCode::IncompatibleBasis,
          "fourier basis required");
  require(u.coeffs.size() == u.basis->cardinality, ErrorCode::ParameterOutOfRange, "coefficient vector size mismatch");
}

// theta-profile of one Fourier mode and the quantities built from it.
struct ModeProfile {
  int m = 0;
  cplx A, A1, A2;  // A and its theta-derivatives
  cplx D;          // A_theta - m A / s
  cplx h;          // X^z = h e^{i(m+1) phi} / sqrt(2 pi)
  cplx hol;        // (h_theta - (m+1) h / s) (1+t) / 2, the dbar-derivative of X^z
  cplx lap;        // Delta_F of the mode
};

struct Latitude {
  double t = 0, s = 0, weight = 0;  // weight: Gauss-Legendre weight in t
  double sigma = 0, sigma_theta = 0, F = 0, F_theta = 0;
  std::vector<ModeProfile> modes;
};

Latitude latitude(const ModelSpace& space, const Cp1Function& u, double t, double w) {
  const Cp1Geometry& geo = *space.cp1;
  Latitude L;
  L.t = t;
  L.weight = w;
  const double theta = std::acos(t);
  L.s = std::sin(theta);
  const auto sig = geo.sigma.eval(t);
  const auto F = geo.potential.eval(t);
  L.sigma = sig.value;
  L.sigma_theta = -L.s * sig.d1;
  L.F = F.value;
  L.F_theta = -L.s * F.d1;
  const double s = L.s, e2 = std::exp(-2 * L.sigma);
  for (const auto& block : u.basis->blocks) {
    ModeProfile p;
    p.m = u.basis->labels[sz(block.front())][0];
    const double m = p.m;
    const auto samples = legendre_mode_samples(p.m, u.basis->l_max, theta);
    for (std::size_t i = 0; i < block.size(); ++i) {
      const cplx c = u.coeffs(block[i]);
      p.A += c * samples[i].a;
      p.A1 += c * samples[i].a_theta;
      p.A2 += c * samples[i].a_thetatheta;
    }
    p.D = p.A1 - m * p.A / s;
    const cplx D_theta = p.A2 - m * p.A1 / s + m * p.A * t / (s * s);
    p.h = e2 * p.D / (1 + t);
    const cplx h_theta =
        e2 * (-2 * L.sigma_theta * p.D / (1 + t) + D_theta / (1 + t) + p.D * s / ((1 + t) * (1 + t)));
    p.hol = 0.5 * (1 + t) * (h_theta - (m + 1) * p.h / s);
    p.lap = 0.5 * e2 * (p.A2 + (t / s) * p.A1 - m * m * p.A / (s * s) + L.F_theta * p.D);
    L.modes.push_back(p);
  }
  return L;
}

std::vector<Latitude> latitudes(const ModelSpace& space, const Cp1Function& u, int points) {
  const int n = points > 0 ? points : u.basis->latitude_points + 32;
  const QuadratureRule gl = gauss_legendre(n);
  std::vector<Latitude> out;
  out.reserve(gl.size());
  for (std::size_t q = 0; q < gl.size(); ++q) out.push_back(latitude(space, u, gl.nodes[q], gl.weights[q]));
  return out;
}

const ModeProfile* zero_mode(const Latitude& L) {
  for (const auto& p : L.modes)
    if (p.m == 0) return &p;
  return nullptr;
}

}  // namespace

ComplexPolynomial fock_polynomial(const DiscreteBasis& basis, const Eigen::VectorXcd& coeffs) {
  require(basis.kind == BasisKind::MonomialFock, ErrorCode::IncompatibleBasis, "fock basis required");
  require(coeffs.size() == basis.cardinality, ErrorCode::ParameterOutOfRange, "coefficient vector size mismatch");
  const int n = basis.space_n;
  ComplexPolynomial out(n);
  for (int a = 0; a < basis.cardinality; ++a) {
    const auto& lab = basis.labels[sz(a)];
    std::vector<int> alpha(lab.begin(), lab.begin() + n), beta(lab.begin() + n, lab.end());
    double norm = std::pow(std::numbers::pi, n);
    for (int i = 0; i < n; ++i) norm *= std::tgamma(alpha[sz(i)] + beta[sz(i)] + 1.0);
    if (coeffs(a) != cplx(0)) out += ComplexPolynomial::monomial(alpha, beta, coeffs(a) / std::sqrt(norm));
  }
  return out;
}

std::vector<ComplexPolynomial> grad_prime(const ComplexPolynomial& u) {
  std::vector<ComplexPolynomial> out;
  for (int i = 0; i < u.n(); ++i) out.push_back(u.dzbar(i));
  return out;
}

VectorFieldSamples grad_prime(const ModelSpace& space, const ComplexPolynomial& u, const QuadratureRule& rule) {
  require(space.kind == SpaceKind::ComplexGaussian, ErrorCode::IncompatibleBasis, "complex-gaussian space required");
  require(u.n() == space.n && rule.dim == space.chart_dimension(), ErrorCode::PointOutsideChart,
          "polynomial or rule does not match the chart");
  const auto X = grad_prime(u);
  VectorFieldSamples out;
  out.chart = "z";
  out.components = space.n;
  out.nodes = rule.nodes;
  for (std::size_t q = 0; q < rule.size(); ++q)
    for (const auto& p : X) out.values.push_back(p.at_chart(rule.node(q)));
  return out;
}

VectorFieldSamples grad_prime(const ModelSpace& space, const Cp1Function& u, const QuadratureRule& rule) {
  require_cp1(space, u);
  require(rule.dim == 2, ErrorCode::PointOutsideChart, "rule does not match the chart");
  VectorFieldSamples out;
  out.chart = "stereographic z = tan(theta/2) e^{i phi}";
  out.components = 1;
  out.nodes = rule.nodes;
  const double norm = 1 / std::sqrt(2 * std::numbers::pi);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double theta = rule.node(q)[0], phi = rule.node(q)[1];
    const Latitude L = latitude(space, u, std::cos(theta), 0.0);
    cplx v = 0;
    for (const auto& p : L.modes) v += p.h * std::polar(norm, (p.m + 1) * phi);
    out.values.push_back(v);
  }
  return out;
}

HolomorphyReport holomorphy_defect(const ModelSpace& space, const ComplexPolynomial& u, double tolerance) {
  require(space.kind == SpaceKind::ComplexGaussian, ErrorCode::IncompatibleBasis, "complex-gaussian space required");
  require(u.n() == space.n, ErrorCode::PointOutsideChart, "polynomial variable count differs from the space");
  HolomorphyReport r;
  double hess = 0;
  for (int i = 0; i < u.n(); ++i)
    for (int j = 0; j < u.n(); ++j) hess += gaussian_norm2(u.dzbar(i).dzbar(j));
  r.dbar_defect = std::sqrt(hess);
  r.eigen_residual = std::sqrt(gaussian_norm2(weighted_dbar_laplacian(u) + u));
  r.norm = std::sqrt(gaussian_norm2(u));
  r.tolerance = tolerance;
  r.pass = r.dbar_defect <= tolerance && r.eigen_residual <= tolerance;
  r.description = "u = " + u.to_string() + " on " + space.descriptor() + " (exact Gaussian moments)";
  return r;
}

HolomorphyReport holomorphy_defect(const ModelSpace& space, const Cp1Function& u, double tolerance,
                                   int latitude_points) {
  require_cp1(space, u);
  double hess = 0, eig = 0, norm = 0;
  for (const Latitude& L : latitudes(space, u, latitude_points)) {
    const double w = L.weight * std::exp(L.F + 2 * L.sigma);
    for (const auto& p : L.modes) {
      hess += w * std::norm(p.hol);
      eig += w * std::norm(p.lap + p.A);
      norm += w * std::norm(p.A);
    }
  }
  HolomorphyReport r;
  r.dbar_defect = std::sqrt(hess);
  r.eigen_residual = std::sqrt(eig);
  r.norm = std::sqrt(norm);
  r.tolerance = tolerance;
  r.pass = r.dbar_defect <= tolerance && r.eigen_residual <= tolerance;
  r.description = "fourier expansion on " + space.descriptor();
  return r;
}

cplx futaki_from_eigenfunction(const ModelSpace& space, const Cp1Function& u, int latitude_points) {
  const HolomorphyReport h = holomorphy_defect(space, u, kOneEigenfunctionGate, latitude_points);
  if (!(h.norm > 0) || h.eigen_residual > kOneEigenfunctionGate * h.norm)
    fail(ErrorCode::NotOneEigenfunction, "relative eigen-residual at lambda = 1 is " +
                                             std::to_string(h.norm > 0 ? h.eigen_residual / h.norm : INFINITY));
  cplx sum = 0;
  for (const Latitude& L : latitudes(space, u, latitude_points))
    if (const ModeProfile* p = zero_mode(L)) sum += L.weight * std::exp(2 * L.sigma) * p->A;
  return -std::sqrt(2 * std::numbers::pi) * sum;
}

cplx futaki_from_potential(const ModelSpace& space, const Cp1Function& u, int latitude_points) {
  require(space.kind == SpaceKind::FanoCP1 && space.cp1, ErrorCode::PotentialUnavailable,
          "Ricci potential is available on fano-cp1 spaces only");
  require_cp1(space, u);
  cplx sum = 0;
  // X F = X^z d_z F with d_z F = e^{-i phi} (1 + t) F_theta / 2; only m = 0 survives the phi integral.
  for (const Latitude& L : latitudes(space, u, latitude_points))
    if (const ModeProfile* p = zero_mode(L)) sum += L.weight * 0.5 * p->D * L.F_theta;
  return std::sqrt(2 * std::numbers::pi) * sum;
}

Eigen::MatrixXcd vector_field_gram(const ModelSpace& space, std::span<const Cp1Function> fields, int latitude_points) {
  const auto k = static_cast<Eigen::Index>(fields.size());
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(k, k);
  std::vector<std::vector<Latitude>> lat;
  for (const auto& f : fields) {
    require_cp1(space, f);
    lat.push_back(latitudes(space, f, latitude_points));
  }
  for (Eigen::Index a = 0; a < k; ++a)
    for (Eigen::Index b = 0; b < k; ++b)
      for (std::size_t q = 0; q < lat[sz(static_cast<int>(a))].size(); ++q) {
        const Latitude& La = lat[sz(static_cast<int>(a))][q];
        const Latitude& Lb = lat[sz(static_cast<int>(b))][q];
        const double gzz = std::exp(2 * La.sigma) * (1 + La.t) * (1 + La.t) / 2;
        const double w = La.weight * std::exp(La.F + 2 * La.sigma) * gzz;
        for (const auto& pa : La.modes)
          for (const auto& pb : Lb.modes)
            if (pa.m == pb.m) G(a, b) += w * pa.h * std::conj(pb.h);
      }
  return G;
}

}  // namespace wlap
