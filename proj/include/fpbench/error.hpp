#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fpbench {

enum class ErrorCode {
  // dataset
  MalformedFilename,
  MissingRoot,
  EmptyDataset,
  ClassTooSmall,
  IoFailure,
  // imaging
  UnsupportedChannelCount,
  InvalidArgument,
  // features
  KernelLargerThanImage,
  ImageTooSmall,
  DimensionMismatch,
  // neuralnet / classifiers
  ShapeMismatch,
  OddSpatialDim,
  NonFiniteLoss,
  EmptyTrainingSet,
  // metrics
  LengthMismatch,
  LabelOutOfRange,
  EmptyEvaluation,
  // harness
  UnknownExperiment,
  ConfigInvalid,
  SchemaError,
  TooFewReports,
};

std::string_view to_string(ErrorCode code);

/// Process exit code for scripting: 2 usage/config, 3 data/I-O, 4 numeric.
int exit_code_for(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fpbench
