#pragma once

// Config-driven experiment runner behind the `wlap` command line tool.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace wlap {

inline constexpr const char* kSchemaVersion = "1.0";
inline constexpr const char* kToolVersion = "0.1.0";

/// Check names in their fixed execution order.
inline const std::vector<std::string>& check_order() {
  static const std::vector<std::string> order{"spectrum", "bounds", "identities", "holomorphy", "toric"};
  return order;
}

struct ExperimentConfig {
  std::string space;         // descriptor, or "toric" for polytope-only runs
  std::string basis;         // empty = default basis of the space
  std::optional<int> eigs;   // unset: all (dense path) or 24 (iterative path)
  double tol = 1e-8;         // eigen-residual tolerance
  double cluster_tol = 1e-6;
  std::optional<double> zero_tol;
  double identity_tol = 1e-8;
  double bound_slack = 1e-6;
  std::vector<std::string> checks{"all"};
  std::string out = ".";
  bool csv = true;
  std::uint64_t seed = 42;
  std::string polytope;             // path of a polytope JSON file
  std::optional<std::string> expect_futaki;  // "vanishes" or "nonzero"
  std::vector<int> sweep_degrees;   // Fock degrees for the multiplicity sweep
  std::vector<double> lsi_eps{0.0, 0.1, 0.3, 1.0, 3.0};
  std::string config_path;          // informational

  nlohmann::ordered_json to_json() const;
};

/// Parses a JSON config object; unknown keys and bad values throw ConfigInvalid.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
/// Expands "all", checks descriptors and ranges; throws ConfigInvalid.
void validate(ExperimentConfig& config);

struct RunReport {
  nlohmann::ordered_json json;
  bool all_pass = true;
};

/// Runs the requested checks in check_order(). Library failures inside a
/// check mark that check FAIL and are recorded in the report.
RunReport run(const ExperimentConfig& config);

/// Writes report.json (and spectrum.csv when the report has eigenvalues) to
/// config.out; returns the written paths.
std::vector<std::string> write_outputs(const RunReport& report, const ExperimentConfig& config);

/// Report JSON with the fields that vary between identical runs removed.
nlohmann::ordered_json deterministic_part(const nlohmann::ordered_json& report);

std::string spectrum_csv(const nlohmann::ordered_json& report);

/// Catalog listing, one block per space kind, sorted by name.
std::string catalog_text();

/// Eigenvalue ladder (and multiplicity staircase when a sweep is present)
/// as SVG files in `dir`; throws NoSpectrumData when the report has no
/// eigenvalues.
std::vector<std::string> emit_plots(const nlohmann::ordered_json& report, const std::string& dir);

}  // namespace wlap
