#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ugf {

enum class ErrorCode {
  NegativeProbability,
  MassNotNormalized,
  EmptyInput,
  StepNotPositive,
  VarianceTooLarge,
  MeanOutOfRange,
  InvalidDensityParams,
  BothRatesZero,
  SingularOrReducible,
  UnmappedState,
  AllResidenceZero,
  DegenerateSeries,
  EmptyMechList,
  SpaceTooLarge,
  InvalidSpec,
  InvalidConfig,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library. The optional component tag names the
/// system part (solar, wind, ...) whose build raised it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, std::string component = {})
      : std::runtime_error(what), code_(code), component_(std::move(component)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& component() const noexcept { return component_; }

 private:
  ErrorCode code_;
  std::string component_;
};

}  // namespace ugf
