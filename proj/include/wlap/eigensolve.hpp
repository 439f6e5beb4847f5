#pragma once

// Generalized Hermitian eigenproblems A v = lambda M v, clustering and the
// spectral-gap checks built on them.

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wlap/operators.hpp"

namespace wlap {

struct Cluster {
  double value = 0;  // mean of the members
  int multiplicity = 0;
  std::vector<int> members;
};

enum class SolverPath { Auto, Dense, Iterative };

struct SpectrumOptions {
  double tol = 1e-8;            // residual tolerance
  double cluster_tol = 1e-6;    // relative gap for multiplicity clusters
  SolverPath path = SolverPath::Auto;
  std::uint64_t seed = 42;      // iterative starting block
  int dense_limit = 2000;
  int max_iterations = 2000;
};

struct SpectrumResult {
  std::vector<double> eigenvalues;  // ascending
  std::vector<Cluster> clusters;
  Eigen::MatrixXcd eigenvectors;    // gram-orthonormal columns
  std::vector<double> residuals;    // ||A v - lambda M v|| / max(1, |lambda|)
  double cluster_tol = 1e-6;
  double tol = 1e-8;
  double spectral_radius = 0;
  double min_eigenvalue = 0;        // over everything the solver computed
  WeightConvention convention = WeightConvention::Real;
  std::string path;
  int iterations = 0;
};

SpectrumResult spectrum(const AssembledOperator& op, int count, const SpectrumOptions& options = {});

/// Groups ascending eigenvalues: |l_{i+1} - l_i| <= cluster_tol * max(1, l_i).
std::vector<Cluster> cluster_eigenvalues(const std::vector<double>& values, double cluster_tol);

struct FirstNonzero {
  double lambda1 = 0;
  int multiplicity = 0;
  int cluster_index = 0;
};

/// First cluster above zero_tol (default 1e-8 x spectral radius).
FirstNonzero first_nonzero(const SpectrumResult& result, std::optional<double> zero_tol = {});

struct BoundReport {
  double lambda1 = 0;
  int multiplicity = 0;
  double bound = 0;
  double slack = 0;
  bool pass = false;
  std::string statement;
};

/// Analytic bound for the convention the spectrum was computed in: the
/// declared ric_f_lower_bound (real) or 1 (complex, Ric = omega).
std::optional<double> spectral_bound(const ModelSpace& space, WeightConvention convention);

BoundReport check_lower_bound(const SpectrumResult& result, const ModelSpace& space, double slack = 1e-6);

struct SplittingReport {
  double lambda = 0;
  double hessian_norm = 0;             // ||Hess u|| in L^2(d mu), u gram-normalized
  std::vector<std::string> references;  // names of the linear reference functions
  std::vector<double> correlations;    // |<u, r>| / (||u|| ||r||) per reference
  std::vector<double> cluster_capture;  // ||P_cluster r|| / ||r|| per reference
};

/// Hessian certificate of an eigenvector from the first nonzero cluster.
SplittingReport splitting_certificate(const AssembledOperator& op, const SpectrumResult& result,
                                      const Eigen::VectorXcd& vector);

/// Coefficients of the linear reference functions of a real space (chart
/// coordinates of the flat factor), gram-normalized, with their names.
std::pair<Eigen::MatrixXcd, std::vector<std::string>> linear_references(const AssembledOperator& op);

/// Rotates the eigenvectors of a cluster so that the i-th rotated vector
/// matches the i-th reference as closely as possible (orthogonal Procrustes).
Eigen::MatrixXcd align_cluster(const AssembledOperator& op, const SpectrumResult& result, int cluster_index,
                               const Eigen::MatrixXcd& references);

/// Smallest `count` sums l_1 + ... + l_n with l_i from the i-th list.
std::vector<double> tensor_sum_spectrum(const std::vector<std::vector<double>>& factors, int count);

}  // namespace wlap
