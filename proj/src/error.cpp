#include "fpbench/error.hpp"

namespace fpbench {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedFilename: return "MalformedFilename";
    case ErrorCode::MissingRoot: return "MissingRoot";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::ClassTooSmall: return "ClassTooSmall";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::UnsupportedChannelCount: return "UnsupportedChannelCount";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::KernelLargerThanImage: return "KernelLargerThanImage";
    case ErrorCode::ImageTooSmall: return "ImageTooSmall";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::OddSpatialDim: return "OddSpatialDim";
    case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::EmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::LabelOutOfRange: return "LabelOutOfRange";
    case ErrorCode::EmptyEvaluation: return "EmptyEvaluation";
    case ErrorCode::UnknownExperiment: return "UnknownExperiment";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::TooFewReports: return "TooFewReports";
  }
  return "Unknown";
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonFiniteLoss:
      return 4;
    case ErrorCode::MissingRoot:
    case ErrorCode::EmptyDataset:
    case ErrorCode::ClassTooSmall:
    case ErrorCode::IoFailure:
    case ErrorCode::MalformedFilename:
    case ErrorCode::UnsupportedChannelCount:
    case ErrorCode::ImageTooSmall:
    case ErrorCode::KernelLargerThanImage:
      return 3;
    default:
      return 2;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace fpbench
