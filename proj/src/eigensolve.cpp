#include "wlap/eigensolve.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "wlap/error.hpp"

namespace wlap {
namespace {

std::size_t sz(int v) { return static_cast<std::size_t>(v); }

struct Eigenpairs {
  std::vector<double> values;
  Eigen::MatrixXcd vectors;  // block-local columns
};

template <class Mat>
Eigenpairs dense_pairs(const Mat& A, const Mat& M) {
  Eigen::LLT<Mat> llt(M);
  if (llt.info() != Eigen::Success) fail(ErrorCode::GramNotPD, "gram matrix is not positive definite");
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(A, M);
  if (es.info() != Eigen::Success) fail(ErrorCode::GramNotPD, "generalized eigensolver rejected the gram matrix");
  Eigenpairs out;
  const Eigen::Index n = A.rows();
  out.vectors = es.eigenvectors().template cast<cplx>();
  for (Eigen::Index j = 0; j < n; ++j) out.values.push_back(es.eigenvalues()(j));
  return out;
}

template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> dense_block(const SparseMatrixC& m, const std::vector<int>& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const cplx v = m.coeff(rows[sz(static_cast<int>(i))], rows[sz(static_cast<int>(j))]);
      if constexpr (std::is_same_v<Scalar, double>)
        out(i, j) = v.real();
      else
        out(i, j) = v;
    }
  return out;
}

template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> random_block(Eigen::Index rows, Eigen::Index cols,
                                                                    std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> x(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      if constexpr (std::is_same_v<Scalar, double>)
        x(i, j) = normal(rng);
      else
        x(i, j) = Scalar(normal(rng), normal(rng));
    }
  return x;
}

struct IterativeOutcome {
  std::vector<double> values;
  Eigen::MatrixXcd vectors;
  double spectral_radius = 0;
  int iterations = 0;
};

// Shift-invert block subspace iteration with Rayleigh-Ritz.
template <class Scalar>
IterativeOutcome iterative_pairs(const SparseMatrixC& Ac, const SparseMatrixC& Mc, int count,
                                 const SpectrumOptions& opt) {
  using SpM = Eigen::SparseMatrix<Scalar>;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  SpM A, M;
  if constexpr (std::is_same_v<Scalar, double>) {
    A = Ac.real();
    M = Mc.real();
  } else {
    A = Ac;
    M = Mc;
  }
  const Eigen::Index n = A.rows();
  std::mt19937_64 rng(opt.seed);

  Eigen::SimplicialLDLT<SpM> mfac(M);
  if (mfac.info() != Eigen::Success) fail(ErrorCode::GramNotPD, "sparse factorization of the gram matrix failed");
  IterativeOutcome out;
  {
    Vec x = random_block<Scalar>(n, 1, rng).col(0);
    double rq = 0;
    for (int it = 0; it < 200; ++it) {
      Vec y = mfac.solve(A * x);
      const double nrm = std::sqrt(std::abs(y.dot(M * y)));
      if (nrm == 0) break;
      x = y / nrm;
      const double next = std::abs(x.dot(A * x));
      if (it > 10 && std::abs(next - rq) <= 1e-6 * next) {
        rq = next;
        break;
      }
      rq = next;
    }
    out.spectral_radius = rq;
  }

  double trace_a = 0, trace_m = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    trace_a += std::abs(A.coeff(i, i));
    trace_m += std::abs(M.coeff(i, i));
  }
  const double shift = -0.01 * std::max(trace_a / trace_m, 1e-3);
  SpM K = A - Scalar(shift) * M;
  Eigen::SimplicialLDLT<SpM> kfac(K);
  if (kfac.info() != Eigen::Success) fail(ErrorCode::ConvergenceFailure, "shifted factorization failed");

  const Eigen::Index block = std::min<Eigen::Index>(n, 2 * count + 10);
  Mat X = random_block<Scalar>(n, block, rng);
  Eigen::VectorXd theta;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    Mat Y = kfac.solve(M * X);
    // M-orthonormalize Y through the eigen-decomposition of its gram.
    Mat My = M * Y;
    Mat G = Y.adjoint() * My;
    G = (0.5 * (G + G.adjoint())).eval();
    Eigen::SelfAdjointEigenSolver<Mat> ge(G);
    const double top = ge.eigenvalues().maxCoeff();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index j = 0; j < G.rows(); ++j)
      if (ge.eigenvalues()(j) > 1e-13 * top) keep.push_back(j);
    Mat Q(n, static_cast<Eigen::Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j)
      Q.col(static_cast<Eigen::Index>(j)) = Y * ge.eigenvectors().col(keep[j]) / std::sqrt(ge.eigenvalues()(keep[j]));
    Mat Ar = Q.adjoint() * (A * Q);
    Ar = (0.5 * (Ar + Ar.adjoint())).eval();
    Eigen::SelfAdjointEigenSolver<Mat> re(Ar);
    X = Q * re.eigenvectors();
    theta = re.eigenvalues();
    if (X.cols() < count) fail(ErrorCode::ConvergenceFailure, "subspace collapsed below the requested count");
    bool done = true;
    for (int j = 0; j < count && done; ++j) {
      const Vec x = X.col(j);
      const Vec r = A * x - Scalar(theta(j)) * (M * x);
      if (r.norm() / std::max(1.0, std::abs(theta(j))) > opt.tol) done = false;
    }
    out.iterations = it;
    if (done) {
      for (int j = 0; j < count; ++j) out.values.push_back(theta(j));
      out.vectors = X.leftCols(count).template cast<cplx>();
      out.spectral_radius = std::max(out.spectral_radius, theta.maxCoeff());
      return out;
    }
    // Re-expand to the full block width when rank was lost.
    if (X.cols() < block) {
      Mat Z(n, block);
      Z << X, random_block<Scalar>(n, block - X.cols(), rng);
      X = Z;
    }
  }
  fail(ErrorCode::ConvergenceFailure,
       "subspace iteration did not reach tolerance in " + std::to_string(opt.max_iterations) + " iterations");
}

}  // namespace

std::vector<Cluster> cluster_eigenvalues(const std::vector<double>& values, double cluster_tol) {
  std::vector<Cluster> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0 && std::abs(values[i] - values[i - 1]) <= cluster_tol * std::max(1.0, std::abs(values[i - 1]))) {
      out.back().members.push_back(static_cast<int>(i));
    } else {
      out.push_back({0, 0, {static_cast<int>(i)}});
    }
  }
  for (auto& c : out) {
    double s = 0;
    for (int m : c.members) s += values[sz(m)];
    c.multiplicity = static_cast<int>(c.members.size());
    c.value = s / c.multiplicity;
  }
  return out;
}

SpectrumResult spectrum(const AssembledOperator& op, int count, const SpectrumOptions& opt) {
  require(count >= 0 && count <= op.size(), ErrorCode::ParameterOutOfRange,
          "eigenvalue count must lie in [0, " + std::to_string(op.size()) + "]");
  require(opt.tol > 0 && opt.cluster_tol > 0, ErrorCode::ParameterOutOfRange, "tolerances must be positive");
  SpectrumResult res;
  res.cluster_tol = opt.cluster_tol;
  res.tol = opt.tol;
  res.convention = op.convention;
  if (count == 0) {
    res.path = "none";
    res.eigenvectors.resize(op.size(), 0);
    return res;
  }
  std::vector<std::vector<int>> blocks = op.blocks;
  if (blocks.empty()) {
    blocks.emplace_back(sz(op.size()));
    std::iota(blocks[0].begin(), blocks[0].end(), 0);
  }
  std::size_t largest = 0;
  for (const auto& b : blocks) largest = std::max(largest, b.size());
  SolverPath path = opt.path;
  if (path == SolverPath::Auto)
    path = largest <= sz(opt.dense_limit) ? SolverPath::Dense : SolverPath::Iterative;

  std::vector<double> values;
  Eigen::MatrixXcd vectors;
  if (path == SolverPath::Dense) {
    require(largest <= 20000, ErrorCode::ParameterOutOfRange, "dense path limited to blocks of 20000");
    std::vector<double> all;
    std::vector<Eigen::MatrixXcd> parts;
    std::vector<std::pair<int, int>> where;  // (part, column)
    for (const auto& b : blocks) {
      Eigenpairs p = op.real_entries
                         ? dense_pairs(dense_block<double>(op.stiffness, b), dense_block<double>(op.gram, b))
                         : dense_pairs(dense_block<cplx>(op.stiffness, b), dense_block<cplx>(op.gram, b));
      for (std::size_t j = 0; j < p.values.size(); ++j) {
        all.push_back(p.values[j]);
        where.emplace_back(static_cast<int>(parts.size()), static_cast<int>(j));
      }
      parts.push_back(std::move(p.vectors));
    }
    std::vector<std::size_t> order(all.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return all[a] < all[b]; });
    res.spectral_radius = std::abs(*std::max_element(all.begin(), all.end(), [](double a, double b) {
      return std::abs(a) < std::abs(b);
    }));
    res.min_eigenvalue = all[order.front()];
    vectors = Eigen::MatrixXcd::Zero(op.size(), count);
    for (int j = 0; j < count; ++j) {
      const auto [part, col] = where[order[sz(j)]];
      values.push_back(all[order[sz(j)]]);
      const auto& rows = blocks[sz(part)];
      for (std::size_t i = 0; i < rows.size(); ++i)
        vectors(rows[i], j) = parts[sz(part)](static_cast<Eigen::Index>(i), col);
    }
    res.path = blocks.size() > 1 ? "dense-blocks" : "dense";
  } else {
    IterativeOutcome o = op.real_entries ? iterative_pairs<double>(op.stiffness, op.gram, count, opt)
                                         : iterative_pairs<cplx>(op.stiffness, op.gram, count, opt);
    values = o.values;
    vectors = o.vectors;
    res.spectral_radius = o.spectral_radius;
    res.min_eigenvalue = values.front();
    res.iterations = o.iterations;
    res.path = "shift-invert";
  }
  res.eigenvalues = values;
  res.eigenvectors = vectors;
  for (int j = 0; j < count; ++j) {
    const Eigen::VectorXcd v = vectors.col(j);
    const Eigen::VectorXcd r = op.stiffness * v - values[sz(j)] * (op.gram * v);
    res.residuals.push_back(r.norm() / std::max(1.0, std::abs(values[sz(j)])));
  }
  res.clusters = cluster_eigenvalues(values, opt.cluster_tol);
  return res;
}

FirstNonzero first_nonzero(const SpectrumResult& result, std::optional<double> zero_tol) {
  const double tol = zero_tol.value_or(1e-8 * std::max(result.spectral_radius, 1e-300));
  for (std::size_t c = 0; c < result.clusters.size(); ++c)
    if (result.clusters[c].value > tol)
      return {result.clusters[c].value, result.clusters[c].multiplicity, static_cast<int>(c)};
  fail(ErrorCode::AllZero, "no eigenvalue above zero_tol " + std::to_string(tol) + "; increase the eigenvalue count");
}

std::optional<double> spectral_bound(const ModelSpace& space, WeightConvention convention) {
  if (convention == WeightConvention::Real) return space.ric_f_lower_bound;
  if (space.kind == SpaceKind::RoundSphere) return 1.0 / (space.radius * space.radius);
  return 1.0;
}

BoundReport check_lower_bound(const SpectrumResult& result, const ModelSpace& space, double slack) {
  BoundReport r;
  r.slack = slack;
  const auto fnz = first_nonzero(result);
  r.lambda1 = fnz.lambda1;
  r.multiplicity = fnz.multiplicity;
  const auto bound = spectral_bound(space, result.convention);
  if (!bound) {
    r.pass = false;
    r.statement = "no analytic lower bound declared for " + space.descriptor();
    return r;
  }
  r.bound = *bound;
  r.pass = r.lambda1 >= r.bound - slack;
  char buf[256];
  std::snprintf(buf, sizeof buf, "lambda1 = %.12g %s bound - slack = %.12g - %.1e", r.lambda1, r.pass ? ">=" : "<",
                r.bound, slack);
  r.statement = buf;
  return r;
}

std::pair<Eigen::MatrixXcd, std::vector<std::string>> linear_references(const AssembledOperator& op) {
  const DiscreteBasis& b = op.basis;
  std::vector<int> hits;
  std::vector<std::string> names;
  if (b.kind == BasisKind::HermiteTensor) {
    for (int axis = 0; axis < op.space.n; ++axis) {
      for (int a = 0; a < b.cardinality; ++a) {
        const auto& lab = b.labels[sz(a)];
        bool match = true;
        for (int i = 0; i < op.space.n; ++i) match = match && lab[sz(i)] == (i == axis ? 1 : 0);
        if (match) hits.push_back(a);
      }
      names.push_back("x" + std::to_string(axis + 1));
    }
  } else if (b.kind == BasisKind::ProductBasis) {
    for (int axis = 0; axis < op.space.k; ++axis) {
      for (int a = 0; a < b.cardinality; ++a) {
        const auto& lab = b.labels[sz(a)];
        bool match = lab[0] == 0;
        for (int i = 0; i < op.space.k; ++i) match = match && lab[sz(i + 1)] == (i == axis ? 1 : 0);
        if (match) hits.push_back(a);
      }
      names.push_back("t" + std::to_string(axis + 1));
    }
  }
  Eigen::MatrixXcd R = Eigen::MatrixXcd::Zero(op.size(), static_cast<Eigen::Index>(hits.size()));
  for (std::size_t j = 0; j < hits.size(); ++j) {
    R(hits[j], static_cast<Eigen::Index>(j)) = 1.0;
    const Eigen::VectorXcd col = R.col(static_cast<Eigen::Index>(j));
    R.col(static_cast<Eigen::Index>(j)) /= std::sqrt(std::abs(col.dot(op.gram * col)));
  }
  return {R, names};
}

Eigen::MatrixXcd align_cluster(const AssembledOperator& op, const SpectrumResult& result, int cluster_index,
                               const Eigen::MatrixXcd& references) {
  require(cluster_index >= 0 && sz(cluster_index) < result.clusters.size(), ErrorCode::ParameterOutOfRange,
          "cluster index out of range");
  const auto& c = result.clusters[sz(cluster_index)];
  Eigen::MatrixXcd V(op.size(), c.multiplicity);
  for (int j = 0; j < c.multiplicity; ++j) V.col(j) = result.eigenvectors.col(c.members[sz(j)]);
  if (references.cols() == 0) return V;
  const Eigen::MatrixXcd C = V.adjoint() * (op.gram * references);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(C, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return V * (svd.matrixU() * svd.matrixV().adjoint());
}

SplittingReport splitting_certificate(const AssembledOperator& op, const SpectrumResult& result,
                                      const Eigen::VectorXcd& vector) {
  require(op.convention == WeightConvention::Real, ErrorCode::IncompatibleBasis,
          "splitting certificate needs a real-convention space");
  require(vector.size() == op.size(), ErrorCode::ParameterOutOfRange, "eigenvector size mismatch");
  SplittingReport rep;
  const double mnorm2 = std::abs(vector.dot(op.gram * vector));
  require(mnorm2 > 0, ErrorCode::NotFirstCluster, "zero vector");
  Eigen::VectorXcd v = vector / std::sqrt(mnorm2);
  rep.lambda = std::real(v.dot(op.stiffness * v));
  const auto fnz = first_nonzero(result);
  const auto& cl = result.clusters[sz(fnz.cluster_index)];
  double lo = result.eigenvalues[sz(cl.members.front())], hi = result.eigenvalues[sz(cl.members.back())];
  const double pad = result.cluster_tol * std::max(1.0, fnz.lambda1);
  if (rep.lambda < lo - pad || rep.lambda > hi + pad)
    fail(ErrorCode::NotFirstCluster, "Rayleigh quotient " + std::to_string(rep.lambda) +
                                         " lies outside the first nonzero cluster at " + std::to_string(fnz.lambda1));
  // Remove the global phase so the coefficients are real.
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  v *= std::polar(1.0, -std::arg(v(imax)));
  const Eigen::VectorXd c = v.real();

  if (op.basis.kind == BasisKind::HermiteTensor) {
    const int n = op.space.n, deg = op.basis.max_degree;
    std::vector<Eigen::Index> stride(sz(n), 1);
    for (int a = n - 2; a >= 0; --a) stride[sz(a)] = stride[sz(a + 1)] * (deg + 1);
    const double lambda = op.space.lambda;
    auto shift = [&](const Eigen::VectorXd& x, int axis) {
      Eigen::VectorXd y = Eigen::VectorXd::Zero(x.size());
      for (Eigen::Index a = 0; a < x.size(); ++a) {
        const int k = op.basis.labels[sz(static_cast<int>(a))][sz(axis)];
        if (k > 0) y(a - stride[sz(axis)]) = std::sqrt(lambda * k) * x(a);
      }
      return y;
    };
    const Eigen::SparseMatrix<double> M = op.gram.real();
    double total = 0;
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd di = shift(c, i);
      for (int j = 0; j < n; ++j) {
        const Eigen::VectorXd dij = shift(di, j);
        total += dij.dot(M * dij);
      }
    }
    rep.hessian_norm = std::sqrt(std::max(total, 0.0));
  } else if (op.basis.kind == BasisKind::SphericalHarmonics || op.basis.kind == BasisKind::ProductBasis) {
    const int points = std::max(op.basis.l_max, op.basis.max_degree) + 2;
    const QuadratureRule rule = make_rule(op.space, points);
    std::vector<double> coeffs(c.data(), c.data() + c.size());
    const auto jets = expansion_jets(op.space, op.basis, coeffs, rule, 2);
    const auto density = density_at_nodes(op.space, rule);
    double total = 0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const PointGeometry geo = point_geometry(op.space, rule.node(q), 2);
      total += rule.weights[q] * density[q] * hessian_norm_squared(geo, jets[q]);
    }
    rep.hessian_norm = std::sqrt(std::max(total, 0.0));
  } else {
    fail(ErrorCode::IncompatibleBasis, "splitting certificate needs a real basis");
  }

  const auto [R, names] = linear_references(op);
  rep.references = names;
  Eigen::MatrixXcd V(op.size(), cl.multiplicity);
  for (int j = 0; j < cl.multiplicity; ++j) V.col(j) = result.eigenvectors.col(cl.members[sz(j)]);
  for (Eigen::Index j = 0; j < R.cols(); ++j) {
    const Eigen::VectorXcd r = R.col(j);
    rep.correlations.push_back(std::abs(r.dot(op.gram * v)));
    rep.cluster_capture.push_back((V.adjoint() * (op.gram * r)).norm());
  }
  return rep;
}

std::vector<double> tensor_sum_spectrum(const std::vector<std::vector<double>>& factors, int count) {
  std::vector<double> acc{0.0};
  for (const auto& f : factors) {
    std::vector<double> next;
    for (double a : acc)
      for (double b : f) next.push_back(a + b);
    std::sort(next.begin(), next.end());
    if (next.size() > sz(count)) next.resize(sz(count));
    acc = std::move(next);
  }
  return acc;
}

}  // namespace wlap
