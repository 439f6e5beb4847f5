#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wlap {

enum class ErrorCode {
  UnknownKind,
  ParameterOutOfRange,
  PointOutsideChart,
  TruncationInsufficient,
  IncompatibleBasis,
  GramIllConditioned,
  InsufficientSmoothness,
  GaussBonnetViolated,
  PoissonSolveFailed,
  ConvergenceFailure,
  GramNotPD,
  AllZero,
  NotFirstCluster,
  SymbolicDerivativeUnavailable,
  NonIntegrable,
  NotASoliton,
  NormalizationViolated,
  NotOneEigenfunction,
  PotentialUnavailable,
  MalformedFile,
  DegeneratePolytope,
  ConfigInvalid,
  NoSpectrumData,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying one of the library's error conditions.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) throw Error(code, what);
}

}  // namespace wlap
