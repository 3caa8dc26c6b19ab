#include "polygal/types.hpp"

namespace polygal {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::UnboundedRegion: return "UnboundedRegion";
    case ErrorCode::DuplicateRow: return "DuplicateRow";
    case ErrorCode::ZeroRow: return "ZeroRow";
    case ErrorCode::BadDimension: return "BadDimension";
    case ErrorCode::UnboundedSpace: return "UnboundedSpace";
    case ErrorCode::ComplexityLimit: return "ComplexityLimit";
    case ErrorCode::EmptyPolytope: return "EmptyPolytope";
    case ErrorCode::ExteriorCoordinates: return "ExteriorCoordinates";
    case ErrorCode::UnboundedBody: return "UnboundedBody";
    case ErrorCode::DegenerateBody: return "DegenerateBody";
    case ErrorCode::BadLevel: return "BadLevel";
    case ErrorCode::InfeasibleLevel: return "InfeasibleLevel";
    case ErrorCode::SchemaError: return "SchemaError";
  }
  return "Unknown";
}

}  // namespace polygal
