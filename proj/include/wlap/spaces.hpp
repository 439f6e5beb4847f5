#pragma once

// Catalog of model metric measure spaces.
//
// Real spaces carry the measure e^{-f} dV_g, complex (Kaehler) spaces carry
// e^{F} dV_g. The two sign conventions are kept apart on purpose through
// `WeightConvention`; every integral in the library asks the space which one
// applies.

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wlap/jet.hpp"
#include "wlap/legendre.hpp"
#include "wlap/quadrature.hpp"

namespace wlap {

enum class SpaceKind { GaussianEuclidean, RoundSphere, SphereGaussianProduct, ComplexGaussian, FanoCP1 };
enum class WeightConvention { Real, Complex };

std::string_view to_string(SpaceKind kind);

/// S^1-symmetric Kaehler metric on CP^1 in the class 2 pi c_1.
///
/// Chart: colatitude theta in (0, pi) and longitude phi; t = cos(theta).
/// The metric is e^{2 sigma(t)} (d theta^2 + sin^2 theta d phi^2) with
/// sigma = log_scale + sum_k perturbation[k-1] P_k(t). The constant
/// log_scale fixes the total area to 4 pi * area_scale.
struct Cp1Geometry {
  std::vector<double> perturbation;
  double area_scale = 1.0;
  double log_scale = 0.0;
  LegendreSeries sigma;      // includes log_scale in coeffs[0]
  LegendreSeries potential;  // Ricci potential F, F(north pole) = 0
  double area = 0.0;
  double potential_residual = 0.0;  // max |1/2 Delta F - (K - 1)| at the latitude nodes

  /// Gaussian curvature K(t) computed from sigma.
  double curvature(double t) const;
};

struct ModelSpace {
  SpaceKind kind = SpaceKind::GaussianEuclidean;
  int n = 1;              // real dimension (sphere/product total), complex dimension for ComplexGaussian
  int k = 0;              // flat-factor dimension (product only)
  double lambda = 0.5;    // Gaussian curvature constant
  double radius = 1.0;    // sphere radius (sphere, product sphere factor)
  int real_dimension = 1;
  WeightConvention convention = WeightConvention::Real;
  std::optional<double> ric_f_lower_bound;
  std::shared_ptr<const Cp1Geometry> cp1;

  /// Dimension of the chart used by nodes and weight_at.
  int chart_dimension() const;
  /// Dimension of the sphere factor (sphere and product only).
  int sphere_dimension() const;
  std::string descriptor() const;
};

/// Parsed "kind:key=val,key=val" descriptor.
struct SpaceDescriptor {
  std::string kind;
  std::map<std::string, std::string> params;
};

SpaceDescriptor parse_space_descriptor(const std::string& text);

ModelSpace make_space(const SpaceDescriptor& desc);
inline ModelSpace make_space(const std::string& text) { return make_space(parse_space_descriptor(text)); }

ModelSpace gaussian_space(int n, double lambda);
ModelSpace sphere_space(int n, double radius);
ModelSpace product_space(int n, int k);
ModelSpace complex_gaussian_space(int n);
ModelSpace fano_cp1_space(std::vector<double> perturbation, double area_scale = 1.0);

/// f(point) for real spaces, F(point) for complex ones.
double weight_at(const ModelSpace& space, std::span<const double> point);

/// Weight as a jet in chart coordinates.
Jet weight_jet(const ModelSpace& space, std::span<const Jet> chart);

/// Riemannian metric g_ij in chart coordinates (row-major, dim x dim).
std::vector<Jet> metric_jets(const ModelSpace& space, std::span<const Jet> chart);

/// Ambient coordinates of a chart point (spheres and products embed in
/// R^{d+1} x R^k; flat spaces embed as themselves).
std::vector<Jet> embedding(const ModelSpace& space, std::span<const Jet> chart);

/// Default quadrature with `points` nodes per Gaussian axis / latitude.
QuadratureRule make_rule(const ModelSpace& space, int points);

/// Gauss-Legendre rule truncated to the cube [-R, R]^dim of a Gaussian chart,
/// with the weighted tail mass recorded in tail_estimate.
QuadratureRule truncated_rule(const ModelSpace& space, double radius, int points_per_axis);

/// Truncation radius at which the Gaussian weight drops to 1e-12 of its peak.
double truncation_radius(const ModelSpace& space);

/// int e^{-f} dV (real) or int e^{F} dV (complex). Throws TruncationInsufficient
/// when the rule's tail estimate exceeds `tolerance`.
double weighted_volume(const ModelSpace& space, const QuadratureRule& rule, double tolerance = 1e-10);

/// e^{-f} or e^{F} at every node of a rule.
std::vector<double> density_at_nodes(const ModelSpace& space, const QuadratureRule& rule);

struct CatalogEntry {
  std::string name;
  std::string parameters;
  std::string bound;
  std::string spectrum;
};

/// Catalog description, sorted by name.
std::vector<CatalogEntry> catalog();

}  // namespace wlap
