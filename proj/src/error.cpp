#include "mixvol/error.hpp"

namespace mixvol {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::SingularTransform: return "SingularTransform";
    case ErrorCode::NonOrthonormalBasis: return "NonOrthonormalBasis";
    case ErrorCode::NotUnitVector: return "NotUnitVector";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::NegativeDiscriminant: return "NegativeDiscriminant";
    case ErrorCode::NonConvexBody: return "NonConvexBody";
    case ErrorCode::IllConditionedFit: return "IllConditionedFit";
    case ErrorCode::DegenerateVariance: return "DegenerateVariance";
    case ErrorCode::DegenerateGradient: return "DegenerateGradient";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code) {}

}  // namespace mixvol
