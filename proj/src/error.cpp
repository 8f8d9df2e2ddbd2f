#include "qps/error.hpp"

namespace qps {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::Reducible: return "Reducible";
    case ErrorCode::InvalidPolynomial: return "InvalidPolynomial";
    case ErrorCode::SizeCapExceeded: return "SizeCapExceeded";
    case ErrorCode::ContextMismatch: return "ContextMismatch";
    case ErrorCode::ZeroInverse: return "ZeroInverse";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NotABasis: return "NotABasis";
    case ErrorCode::SingularGram: return "SingularGram";
    case ErrorCode::NotSelfdual: return "NotSelfdual";
    case ErrorCode::BasisMismatch: return "BasisMismatch";
    case ErrorCode::ZeroSqueeze: return "ZeroSqueeze";
    case ErrorCode::EvenDimension: return "EvenDimension";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::SingularPKernel: return "SingularPKernel";
    case ErrorCode::NormViolation: return "NormViolation";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace qps
