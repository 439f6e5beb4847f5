#include "wlap/error.hpp"

namespace wlap {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownKind: return "UnknownKind";
    case ErrorCode::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorCode::PointOutsideChart: return "PointOutsideChart";
    case ErrorCode::TruncationInsufficient: return "TruncationInsufficient";
    case ErrorCode::IncompatibleBasis: return "IncompatibleBasis";
    case ErrorCode::GramIllConditioned: return "GramIllConditioned";
    case ErrorCode::InsufficientSmoothness: return "InsufficientSmoothness";
    case ErrorCode::GaussBonnetViolated: return "GaussBonnetViolated";
    case ErrorCode::PoissonSolveFailed: return "PoissonSolveFailed";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::GramNotPD: return "GramNotPD";
    case ErrorCode::AllZero: return "AllZero";
    case ErrorCode::NotFirstCluster: return "NotFirstCluster";
    case ErrorCode::SymbolicDerivativeUnavailable: return "SymbolicDerivativeUnavailable";
    case ErrorCode::NonIntegrable: return "NonIntegrable";
    case ErrorCode::NotASoliton: return "NotASoliton";
    case ErrorCode::NormalizationViolated: return "NormalizationViolated";
    case ErrorCode::NotOneEigenfunction: return "NotOneEigenfunction";
    case ErrorCode::PotentialUnavailable: return "PotentialUnavailable";
    case ErrorCode::MalformedFile: return "MalformedFile";
    case ErrorCode::DegeneratePolytope: return "DegeneratePolytope";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::NoSpectrumData: return "NoSpectrumData";
  }
  return "Unknown";
}

}  // namespace wlap
