#pragma once

// Exact polytope geometry: canonical vertex sets, volumes, barycenters and
// the barycenter test for the Futaki character of a toric Fano.

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>
#include <vector>

namespace wlap {

using Rational = boost::multiprecision::cpp_rational;
using RationalPoint = std::vector<Rational>;

struct Polytope {
  int dim = 0;
  std::vector<RationalPoint> vertices;  // lexicographically sorted, hull vertices only
  bool exact = true;                    // false when built from binary floating input
  std::string name;

  bool operator==(const Polytope&) const = default;
};

/// Parses "3", "-2/5", "0.125", "1e-3" into an exact rational.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);

/// Removes duplicates and non-vertices; throws DegeneratePolytope when the
/// points do not span their ambient space.
Polytope canonicalize(std::vector<RationalPoint> points, std::string name = {});
Polytope polytope_from_doubles(const std::vector<std::vector<double>>& points, std::string name = {});

/// {"vertices": [[q, ...], ...], "name": optional string}; coordinates are
/// integers, decimals (read exactly) or strings "p/q".
Polytope load_polytope(const std::string& json_text);
Polytope load_polytope_file(const std::string& path);
/// Coordinates are written as strings "p/q" (or integers), so loading the
/// output reproduces the polytope exactly.
std::string save_polytope(const Polytope& p);

/// Facets as the sorted indices of the vertices lying on them.
std::vector<std::vector<int>> facets(const Polytope& p);

/// Simplices (vertex index lists) of a triangulation coned from `apex`.
std::vector<std::vector<int>> triangulate(const Polytope& p, int apex = 0);

struct VolumeBarycenter {
  Rational volume;
  RationalPoint barycenter;
};
VolumeBarycenter volume_barycenter(const Polytope& p, int apex = 0);
Rational volume(const Polytope& p);
RationalPoint barycenter(const Polytope& p);

struct FutakiVerdict {
  bool vanishes = false;
  RationalPoint barycenter;
  std::vector<double> direction;  // unit vector along the barycenter when nonzero
  double norm = 0;
  double tolerance = 0;
};

/// Vanishing iff |barycenter| <= tol; tol defaults to 0 for exact input and
/// 1e-12 otherwise.
FutakiVerdict futaki_vanishes(const Polytope& p, std::optional<double> tol = {});

/// Planar polygon with vertex `vertex` cut off at lattice distance 1 along
/// its two primitive edge directions (toric blow-up of that fixed point).
Polytope truncate_corner(const Polytope& p, int vertex);

/// Image of p under x -> A x + b (A invertible, row-major m x m).
Polytope affine_image(const Polytope& p, const std::vector<Rational>& A, const RationalPoint& b);

std::vector<double> to_doubles(const RationalPoint& x);

}  // namespace wlap
