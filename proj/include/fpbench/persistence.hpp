#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "fpbench/classifiers.hpp"
#include "fpbench/features.hpp"
#include "fpbench/metrics.hpp"
#include "fpbench/neuralnet.hpp"

namespace fpbench {

using Json = nlohmann::ordered_json;

inline constexpr int kModelFormatVersion = 1;

Json to_json(const CnnModel& model);
CnnModel cnn_from_json(const Json& j);

Json to_json(const TrainedClassifier& model);
TrainedClassifier classifier_from_json(const Json& j);

Json to_json(const PcaModel& model);
PcaModel pca_from_json(const Json& j);

/// Report schema: experiment_id, seed, config_digest, accuracy, per_class,
/// macro_avg, weighted_avg, confusion, wall_time_seconds, descriptor_ids.
Json report_to_json(const EvalReport& report);
/// Validates the schema; a missing or mistyped field raises SchemaError naming it.
EvalReport report_from_json(const Json& j);

std::string dump_json(const Json& j);
Json read_json_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file, then renames over the target.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace fpbench
