#include "lcqft/errors.hpp"

namespace lcqft {

const char* error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NoIntertwiner: return "NoIntertwiner";
    case ErrorCode::NoSolution: return "NoSolution";
    case ErrorCode::NotInSpinGroup: return "NotInSpinGroup";
    case ErrorCode::BadGenerator: return "BadGenerator";
    case ErrorCode::LogBranchFailure: return "LogBranchFailure";
    case ErrorCode::SingularMetric: return "SingularMetric";
    case ErrorCode::FrameDegenerate: return "FrameDegenerate";
    case ErrorCode::GridTooSmall: return "GridTooSmall";
    case ErrorCode::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorCode::DimTooLarge: return "DimTooLarge";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::CFLViolation: return "CFLViolation";
    case ErrorCode::SlabTooThin: return "SlabTooThin";
    case ErrorCode::ZeroSection: return "ZeroSection";
    case ErrorCode::EvaluationFailure: return "EvaluationFailure";
    case ErrorCode::SingularMap: return "SingularMap";
    case ErrorCode::NotAchronal: return "NotAchronal";
    case ErrorCode::GeometryError: return "GeometryError";
    case ErrorCode::UnknownSuite: return "UnknownSuite";
    case ErrorCode::ConfigParse: return "ConfigParse";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Error";
}

}  // namespace lcqft
