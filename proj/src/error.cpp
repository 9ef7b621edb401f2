#include "ugf/error.hpp"

namespace ugf {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NegativeProbability: return "NegativeProbability";
    case ErrorCode::MassNotNormalized: return "MassNotNormalized";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::StepNotPositive: return "StepNotPositive";
    case ErrorCode::VarianceTooLarge: return "VarianceTooLarge";
    case ErrorCode::MeanOutOfRange: return "MeanOutOfRange";
    case ErrorCode::InvalidDensityParams: return "InvalidDensityParams";
    case ErrorCode::BothRatesZero: return "BothRatesZero";
    case ErrorCode::SingularOrReducible: return "SingularOrReducible";
    case ErrorCode::UnmappedState: return "UnmappedState";
    case ErrorCode::AllResidenceZero: return "AllResidenceZero";
    case ErrorCode::DegenerateSeries: return "DegenerateSeries";
    case ErrorCode::EmptyMechList: return "EmptyMechList";
    case ErrorCode::SpaceTooLarge: return "SpaceTooLarge";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

}  // namespace ugf
