#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mixvol {

enum class ErrorCode {
  NotSymmetric,
  NotPositiveDefinite,
  OutOfRange,
  SingularTransform,
  NonOrthonormalBasis,
  NotUnitVector,
  DimensionMismatch,
  IllConditioned,
  NegativeDiscriminant,
  NonConvexBody,
  IllConditionedFit,
  DegenerateVariance,
  DegenerateGradient,
  GridTooCoarse,
  InvalidInput,
};

std::string_view error_name(ErrorCode code) noexcept;

/// Validation failure raised by every module. `what()` reads "<Name>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }

 private:
  ErrorCode code_;
};

}  // namespace mixvol
