#pragma once

#include <map>
#include <string>

namespace wlap {

/// Residual statistics of one numerically checked identity.
struct IdentityReport {
  std::string identity_name;
  double max_residual = 0;
  double l2_residual = 0;
  double tolerance = 0;
  std::string sample_description;
  bool pass = false;
  /// Set when a nonzero residual is the documented outcome (diagnostic modes).
  bool expected_nonzero = false;
  std::map<std::string, double> values;  // named auxiliary quantities

  void decide() { pass = max_residual <= tolerance; }
};

}  // namespace wlap
