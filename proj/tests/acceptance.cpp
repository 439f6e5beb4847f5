// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "wlap/eigensolve.hpp"
#include "wlap/holomorphic.hpp"
#include "wlap/identities.hpp"
#include "wlap/operators.hpp"
#include "wlap/toric.hpp"

using namespace wlap;

namespace {

std::size_t sz(int v) { return static_cast<std::size_t>(v); }

// Everything the run assembles and solves, re-examined by criterion 8.
struct Audit {
  double worst_selfadjoint = 0;  // relative to ||A||
  double worst_positivity = 0;   // max(0, -lambda_min / rho)
  int operators = 0;
  std::vector<std::string> failures;

  void record(const AssembledOperator& op, const SpectrumResult& r) {
    const IdentityReport sa = selfadjointness_report(op, 100, 2024);
    worst_selfadjoint = std::max(worst_selfadjoint, sa.max_residual);
    const double rho = std::max(r.spectral_radius, 1e-300);
    worst_positivity = std::max(worst_positivity, -r.min_eigenvalue / rho);
    ++operators;
    if (!(sa.max_residual <= 1e-12) || !(r.min_eigenvalue >= -1e-10 * r.spectral_radius))
      failures.push_back(op.space.descriptor() + " / " + op.basis.descriptor());
  }
};

Audit audit;

struct Solved {
  AssembledOperator op;
  SpectrumResult result;
};

// All eigenpairs when every block fits the dense path, else the lowest 24.
Solved solve(const ModelSpace& space, const DiscreteBasis& basis) {
  Solved s{assemble(space, basis), {}};
  std::size_t largest = s.op.blocks.empty() ? sz(s.op.size()) : 0;
  for (const auto& b : s.op.blocks) largest = std::max(largest, b.size());
  const int count = largest <= sz(SpectrumOptions{}.dense_limit) ? s.op.size() : std::min(24, s.op.size());
  s.result = spectrum(s.op, count);
  audit.record(s.op, s.result);
  return s;
}

class Verdict {
 public:
  __attribute__((format(printf, 3, 4))) void expect(bool ok, const char* fmt, ...) {
    char line[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(line, sizeof line, fmt, args);
    va_end(args);
    std::printf("    %s %s\n", ok ? "ok  " : "FAIL", line);
    pass_ = pass_ && ok;
  }
  bool pass() const { return pass_; }

 private:
  bool pass_ = true;
};

const Cluster& first_cluster(const SpectrumResult& r, const FirstNonzero& f) { return r.clusters[sz(f.cluster_index)]; }

bool criterion1() {
  Verdict v;
  const ModelSpace g1 = gaussian_space(1, 0.5);
  const FiniteDifference1D fd = finite_difference_1d(0.5, 0.05, truncation_radius(g1));
  const std::vector<double> fd1 = finite_difference_eigenvalues(fd, 8);
  for (int n = 1; n <= 3; ++n) {
    const ModelSpace g = gaussian_space(n, 0.5);
    const Solved s = solve(g, hermite_basis(g, 30));
    const FirstNonzero f = first_nonzero(s.result);
    v.expect(std::abs(f.lambda1 - 0.5) <= 1e-8, "n=%d lambda1 = %.15g", n, f.lambda1);
    v.expect(f.multiplicity == n, "n=%d multiplicity %d", n, f.multiplicity);
    const auto [R, names] = linear_references(s.op);
    const Eigen::MatrixXcd V = align_cluster(s.op, s.result, f.cluster_index, R);
    double worst_corr = 1;
    for (Eigen::Index j = 0; j < R.cols(); ++j) {
      const double c = std::abs(V.col(j).dot(s.op.gram * R.col(j))) /
                       std::sqrt(std::abs(V.col(j).dot(s.op.gram * V.col(j))) * std::abs(R.col(j).dot(s.op.gram * R.col(j))));
      worst_corr = std::min(worst_corr, c);
    }
    v.expect(R.cols() == n && worst_corr > 0.9999, "n=%d worst correlation with coordinates %.12f", n, worst_corr);
    double worst_hess = 0;
    for (int m : first_cluster(s.result, f).members)
      worst_hess = std::max(worst_hess, splitting_certificate(s.op, s.result, s.result.eigenvectors.col(m)).hessian_norm);
    v.expect(worst_hess <= 1e-8, "n=%d Hessian certificate %.3e", n, worst_hess);
    std::vector<double> sums = fd1;
    if (n > 1) sums = tensor_sum_spectrum(std::vector<std::vector<double>>(sz(n), fd1), n + 1);
    double fd_gap = 0;
    for (int k = 1; k <= n; ++k) fd_gap = std::max(fd_gap, std::abs(sums[sz(k)] - 0.5));
    v.expect(fd_gap <= 5e-3, "n=%d finite differences (h=0.05, R=%.3f): |lambda1 - 0.5| <= %.3e", n, fd.radius, fd_gap);
  }
  return v.pass();
}

bool criterion2() {
  Verdict v;
  const ModelSpace p = make_space("product:n=3,k=1");
  const Solved s = solve(p, default_basis(p));
  const FirstNonzero f = first_nonzero(s.result);
  v.expect(std::abs(f.lambda1 - 0.5) <= 1e-6, "S^2(sqrt 2) x R: lambda1 = %.15g", f.lambda1);
  v.expect(f.multiplicity == 1, "multiplicity %d", f.multiplicity);
  const SplittingReport cert =
      splitting_certificate(s.op, s.result, s.result.eigenvectors.col(first_cluster(s.result, f).members[0]));
  v.expect(cert.hessian_norm <= 1e-6, "Hessian certificate %.3e", cert.hessian_norm);
  const bool linear = cert.correlations.size() == 1 && cert.correlations[0] > 0.9999;
  v.expect(linear, "eigenfunction is linear in t (correlation %.12f)", cert.correlations.empty() ? 0.0 : cert.correlations[0]);

  const ModelSpace sphere = sphere_space(2, std::sqrt(2.0));
  const Solved t = solve(sphere, harmonic_basis(sphere, 6));
  const FirstNonzero fs = first_nonzero(t.result);
  v.expect(std::abs(fs.lambda1 - 1) <= 1e-10 && fs.multiplicity == 3 && fs.lambda1 > 0.5,
           "sphere factor alone: lambda1 = %.15g (multiplicity %d) > 0.5", fs.lambda1, fs.multiplicity);
  return v.pass();
}

bool criterion3() {
  Verdict v;
  const std::vector<std::vector<double>> perturbations{{}, {0.15, -0.05, 0.02}, {0.2, -0.1}, {-0.3, 0.0, 0.15}, {0.1}};
  for (const auto& pert : perturbations) {
    const ModelSpace s = fano_cp1_space(pert);
    const DiscreteBasis b = default_basis(s);
    const Solved sol = solve(s, b);
    const FirstNonzero f = first_nonzero(sol.result);
    const bool round = pert.empty();
    const std::string label = s.descriptor();
    v.expect(std::abs(f.lambda1 - 1) <= (round ? 1e-8 : 1e-6), "%s lambda1 = %.15g", label.c_str(), f.lambda1);
    v.expect(f.multiplicity == 3, "%s multiplicity %d", label.c_str(), f.multiplicity);
    double defect = 0, route_a = 0, route_b = 0, gap = 0;
    for (int m : first_cluster(sol.result, f).members) {
      const Cp1Function u{&b, sol.result.eigenvectors.col(m)};
      defect = std::max(defect, holomorphy_defect(s, u).dbar_defect);
      if (round) continue;
      const cplx a = futaki_from_eigenfunction(s, u), c = futaki_from_potential(s, u);
      route_a = std::max(route_a, std::abs(a));
      route_b = std::max(route_b, std::abs(c));
      gap = std::max(gap, std::abs(a - c));
    }
    v.expect(defect <= 1e-6, "%s holomorphy defect %.3e", label.c_str(), defect);
    if (!round)
      v.expect(route_a <= 1e-6 && route_b <= 1e-6 && gap <= 1e-6,
               "%s Futaki |eigenfunction route| %.3e, |potential route| %.3e, gap %.3e", label.c_str(), route_a, route_b,
               gap);
  }
  return v.pass();
}

bool criterion4() {
  Verdict v;
  const ModelSpace c2 = complex_gaussian_space(2);
  const QuadratureRule rule = make_rule(c2, 12);
  const std::vector<double> dens = density_at_nodes(c2, rule);
  double worst_apply = 0;
  for (int j = 0; j <= 4; ++j) {
    const ComplexPolynomial u = ComplexPolynomial::monomial({0, j}, {1, 0});
    const std::vector<cplx> lu = apply(c2, u, rule);
    double num = 0, den = 0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto x = rule.node(q);
      const cplx z[2] = {{x[0], x[1]}, {x[2], x[3]}};
      const cplx uq = u(z);
      num += rule.weights[q] * dens[q] * std::norm(lu[q] + uq);
      den += rule.weights[q] * dens[q] * std::norm(uq);
    }
    const double res = std::sqrt(num);
    worst_apply = std::max(worst_apply, res);
    v.expect(res <= 1e-10, "||Delta_F u + u|| for u = zbar1 z2^%d: %.3e (||u|| = %.4g)", j, res, std::sqrt(den));
  }
  int previous = 0;
  bool monotone = true;
  for (int d = 2; d <= 5; ++d) {
    const DiscreteBasis b = fock_basis(c2, d);
    const Solved s = solve(c2, b);
    int mult = 0;
    for (const auto& c : s.result.clusters)
      if (std::abs(c.value - 1) <= 1e-6) mult = c.multiplicity;
    monotone = monotone && mult >= previous;
    previous = mult;
    v.expect(mult >= d, "Fock degree %d: multiplicity at 1 is %d", d, mult);
    // zbar1 z2^j as a coefficient vector is an exact Galerkin eigenvector
    double galerkin = 0;
    for (int j = 0; j + 1 <= d && j <= 4; ++j) {
      const auto it = std::find(b.labels.begin(), b.labels.end(), std::vector<int>{0, j, 1, 0});
      if (it == b.labels.end()) {
        galerkin = INFINITY;
        continue;
      }
      Eigen::VectorXcd e = Eigen::VectorXcd::Zero(b.cardinality);
      e(it - b.labels.begin()) = 1;
      galerkin = std::max(galerkin, (s.op.stiffness * e - s.op.gram * e).norm() / std::sqrt(std::abs(e.dot(s.op.gram * e))));
    }
    v.expect(galerkin <= 1e-10, "Fock degree %d: Galerkin residual of zbar1 z2^j, j < d: %.3e", d, galerkin);
  }
  v.expect(monotone, "multiplicity nondecreasing in the degree");
  return v.pass();
}

bool criterion5() {
  Verdict v;
  for (const char* text : {"gaussian:n=1", "gaussian:n=2", "gaussian:n=3", "sphere:n=2", "sphere:n=3", "product:n=3,k=1"}) {
    const ModelSpace s = make_space(text);
    double worst = 0;
    int count = 0;
    for (const auto& u : bochner_family(s)) {
      worst = std::max(worst, bochner_residual_real(s, u).max_residual);
      ++count;
    }
    v.expect(worst <= 1e-8, "Bochner on %s: %d functions, max residual %.3e", text, count, worst);
  }
  for (int n = 1; n <= 2; ++n) {
    const ModelSpace s = complex_gaussian_space(n);
    double worst = 0;
    int count = 0;
    for (int d = 0; d <= 4; ++d)
      for (int p = 0; p <= d; ++p)
        for (const auto& a : compositions(n, p))
          for (const auto& b : compositions(n, d - p)) {
            worst = std::max(worst, complex_identity_residual(s, ComplexPolynomial::monomial(a, b)).max_residual);
            ++count;
          }
    v.expect(worst <= 1e-8, "complex identity on C^%d: %d monomials of degree <= 4, max residual %.3e", n, count, worst);
  }
  for (int n = 1; n <= 3; ++n) {
    const IdentityReport r = soliton_identity_residual(gaussian_space(n, 0.5));
    const double c = r.values.at("c");
    v.expect(r.max_residual <= 1e-10 && std::abs(c - n / 2.0) <= 1e-12, "soliton identity n=%d: c = %.15g, residual %.3e",
             n, c, r.max_residual);
  }
  for (const char* text : {"gaussian:n=1", "gaussian:n=2", "sphere:n=2", "product:n=3,k=1"}) {
    const ModelSpace s = make_space(text);
    const int axis = s.kind == SpaceKind::SphereGaussianProduct ? s.sphere_dimension() : 0;
    const TestFunction linear =
        s.kind == SpaceKind::RoundSphere ? ambient_monomial(s, {1, 0, 0}, s.radius) : coordinate_function(axis);
    double worst = INFINITY;
    for (double eps : {0.0, 0.1, 0.3, 1.0, 3.0}) {
      const TestFunction u = normalize_in_measure(
          s, combine("1 + eps l", {{1.0, chart_monomial(std::vector<int>(sz(s.chart_dimension()), 0))}, {eps, linear}}));
      const IdentityReport r = lsi_deficit(s, u);
      worst = std::min(worst, r.values.count("deficit") ? r.values.at("deficit") : -r.max_residual);
    }
    v.expect(worst >= -1e-8, "log-Sobolev deficit on %s over the eps sweep: min %.3e", text, worst);
  }
  return v.pass();
}

bool criterion6() {
  Verdict v;
  for (const char* text : {"complex-gaussian:n=2", "fano-cp1", "gaussian:n=2", "product:n=3,k=1", "sphere:n=2"}) {
    const ModelSpace s = make_space(text);
    const Solved sol = solve(s, default_basis(s));
    const BoundReport b = check_lower_bound(sol.result, s);
    v.expect(b.pass, "%s: %s", text, b.statement.c_str());
  }
  ModelSpace wrong = gaussian_space(1, 0.5);
  wrong.ric_f_lower_bound = 0.6;
  const Solved sol = solve(wrong, hermite_basis(wrong, 30));
  const BoundReport probe = check_lower_bound(sol.result, wrong);
  v.expect(!probe.pass, "falsification probe with declared bound 0.6 is rejected: %s", probe.statement.c_str());
  return v.pass();
}

// Uniform sampling in the bounding box; membership by the sign of every edge
// of the counter-clockwise hull.
struct MonteCarlo {
  double area = 0, area_se = 0;
  double mean[2] = {0, 0}, se[2] = {0, 0};
};

MonteCarlo monte_carlo_barycenter(const std::vector<std::vector<double>>& verts, long samples, std::uint64_t seed) {
  double cx = 0, cy = 0;
  for (const auto& p : verts) cx += p[0], cy += p[1];
  cx /= verts.size(), cy /= verts.size();
  std::vector<std::vector<double>> hull = verts;
  std::sort(hull.begin(), hull.end(), [&](const auto& a, const auto& b) {
    return std::atan2(a[1] - cy, a[0] - cx) < std::atan2(b[1] - cy, b[0] - cx);
  });
  double lo[2] = {INFINITY, INFINITY}, hi[2] = {-INFINITY, -INFINITY};
  for (const auto& p : hull)
    for (int i = 0; i < 2; ++i) lo[i] = std::min(lo[i], p[sz(i)]), hi[i] = std::max(hi[i], p[sz(i)]);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(lo[0], hi[0]), uy(lo[1], hi[1]);
  long inside = 0;
  double s1[2] = {0, 0}, s2[2] = {0, 0};
  for (long k = 0; k < samples; ++k) {
    const double x = ux(rng), y = uy(rng);
    bool in = true;
    for (std::size_t e = 0; e < hull.size() && in; ++e) {
      const auto& a = hull[e];
      const auto& b = hull[(e + 1) % hull.size()];
      in = (b[0] - a[0]) * (y - a[1]) - (b[1] - a[1]) * (x - a[0]) >= 0;
    }
    if (!in) continue;
    ++inside;
    s1[0] += x, s1[1] += y, s2[0] += x * x, s2[1] += y * y;
  }
  MonteCarlo mc;
  const double box = (hi[0] - lo[0]) * (hi[1] - lo[1]);
  const double frac = static_cast<double>(inside) / samples;
  mc.area = box * frac;
  mc.area_se = box * std::sqrt(frac * (1 - frac) / samples);
  for (int i = 0; i < 2; ++i) {
    mc.mean[i] = s1[i] / inside;
    const double var = s2[i] / inside - mc.mean[i] * mc.mean[i];
    mc.se[i] = std::sqrt(var / inside);
  }
  return mc;
}

bool criterion7() {
  Verdict v;
  const std::vector<std::pair<std::string, std::vector<RationalPoint>>> reflexive{
      {"triangle", {{-1, -1}, {2, -1}, {-1, 2}}},
      {"square", {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}}};
  for (const auto& [name, pts] : reflexive) {
    const Polytope p = canonicalize(pts, name);
    const FutakiVerdict f = futaki_vanishes(p);
    const RationalPoint b = barycenter(p);
    const bool exact_zero = std::all_of(b.begin(), b.end(), [](const Rational& q) { return q == 0; });
    v.expect(f.vanishes && exact_zero, "%s: %s, barycenter (%s, %s)", name.c_str(), f.vanishes ? "VANISHES" : "NONZERO",
             to_string(b[0]).c_str(), to_string(b[1]).c_str());
  }
  const Polytope tri = canonicalize({{-1, -1}, {2, -1}, {-1, 2}}, "triangle");
  int corner = 0;
  for (std::size_t i = 0; i < tri.vertices.size(); ++i)
    if (tri.vertices[i] == RationalPoint{-1, -1}) corner = static_cast<int>(i);
  const Polytope cut = truncate_corner(tri, corner);
  const FutakiVerdict f = futaki_vanishes(cut);
  const VolumeBarycenter vb = volume_barycenter(cut);
  v.expect(!f.vanishes, "corner-truncated triangle: %s, volume %s, barycenter (%s, %s)",
           f.vanishes ? "VANISHES" : "NONZERO", to_string(vb.volume).c_str(), to_string(vb.barycenter[0]).c_str(),
           to_string(vb.barycenter[1]).c_str());
  std::vector<std::vector<double>> verts;
  for (const auto& x : cut.vertices) verts.push_back(to_doubles(x));
  const MonteCarlo mc = monte_carlo_barycenter(verts, 10'000'000, 20261016);
  const std::vector<double> exact = to_doubles(vb.barycenter);
  for (int i = 0; i < 2; ++i) {
    const double z = std::abs(mc.mean[i] - exact[sz(i)]) / mc.se[i];
    v.expect(z <= 3, "Monte-Carlo barycenter[%d] = %.6f +- %.6f vs exact %.6f (%.2f SE)", i, mc.mean[i], mc.se[i],
             exact[sz(i)], z);
  }
  const double vol = to_doubles({vb.volume})[0];
  const double zv = std::abs(mc.area - vol) / mc.area_se;
  v.expect(zv <= 3, "Monte-Carlo area %.6f +- %.6f vs exact %.6f (%.2f SE)", mc.area, mc.area_se, vol, zv);
  return v.pass();
}

bool criterion8() {
  Verdict v;
  // Default operators of the catalog, both conventions on the sphere.
  for (const char* text : {"gaussian:n=1", "gaussian:n=3", "sphere:n=3", "complex-gaussian:n=1", "complex-gaussian:n=3",
                           "fano-cp1:pert=0.25;-0.1"}) {
    const ModelSpace s = make_space(text);
    solve(s, default_basis(s));
  }
  const ModelSpace s2 = sphere_space(2, 1.5);
  AssemblyOptions complex;
  complex.convention = WeightConvention::Complex;
  const AssembledOperator op = assemble(s2, harmonic_basis(s2, 8), complex);
  audit.record(op, spectrum(op, op.size()));

  v.expect(audit.worst_selfadjoint <= 1e-12, "%d operators: worst self-adjointness defect %.3e ||A||", audit.operators,
           audit.worst_selfadjoint);
  v.expect(audit.worst_positivity <= 1e-10, "%d operators: most negative eigenvalue %.3e rho", audit.operators,
           -audit.worst_positivity);
  for (const auto& name : audit.failures) v.expect(false, "violated on %s", name.c_str());
  return v.pass();
}

}  // namespace

int main() {
  const std::vector<std::function<bool()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                    criterion5, criterion6, criterion7, criterion8};
  bool all = true;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = criteria[k]();
    } catch (const std::exception& e) {
      std::printf("    FAIL exception: %s\n", e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("Criterion %zu: %s  (%.1f s)\n", k + 1, ok ? "PASS" : "FAIL", secs);
    std::fflush(stdout);
    all = all && ok;
  }
  return all ? 0 : 1;
}
