#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "fpbench/classifiers.hpp"
#include "fpbench/dataset.hpp"
#include "fpbench/metrics.hpp"
#include "fpbench/neuralnet.hpp"
#include "fpbench/persistence.hpp"

namespace fpbench {

enum class ExperimentId { Exp1, Exp2Cnn, Exp2LogReg, Exp3, Exp4, Exp5Mlp, Exp5Svm };

inline constexpr std::array<ExperimentId, 7> kAllExperiments = {
    ExperimentId::Exp1, ExperimentId::Exp2Cnn, ExperimentId::Exp2LogReg, ExperimentId::Exp3,
    ExperimentId::Exp4, ExperimentId::Exp5Mlp, ExperimentId::Exp5Svm};

std::string_view to_string(ExperimentId id);
/// Throws UnknownExperiment.
ExperimentId parse_experiment_id(std::string_view text);

enum class Stage { Resize, Pixels, GaborMaps, GaborFeatures, Hog, Pca, Smote, Cnn, LogReg, Knn, Mlp, Svm };

std::string_view to_string(Stage stage);
Stage parse_stage(std::string_view text);

struct CnnSettings {
  std::vector<std::size_t> filters = {32, 64, 128};
  std::size_t dense_hidden = 128;
  double dropout_rate = 0.5;
  TrainConfig train;
};

struct ExperimentConfig {
  ExperimentId experiment_id = ExperimentId::Exp1;
  std::filesystem::path data_root;
  int input_size = 32;
  std::vector<Stage> pipeline;
  std::uint64_t seed = 0;
  double train_fraction = 0.8;
  bool stratified = true;

  double pca_variance_target = 0.95;
  std::size_t pca_max_components = 64;
  std::size_t smote_k = 5;
  CnnSettings cnn;
  LogRegConfig logreg;
  KnnConfig knn;
  MlpConfig mlp;
  SvmConfig svm;
  /// When false the report carries wall_time_seconds = 0 so reruns are byte-identical.
  bool record_wall_time = false;

  bool has_stage(Stage s) const;
  /// Stage list is legal for experiment_id; throws ConfigInvalid.
  void validate() const;
  /// Every resolved field as `key = value` lines; reparsing this text reproduces the config.
  std::string resolved_text() const;
  /// 64-bit FNV-1a of resolved_text, hex.
  std::string digest() const;
  SplitSpec split_spec() const { return {train_fraction, seed, stratified}; }
};

ExperimentConfig builtin_config(ExperimentId id);

/// Flat `key = value` lines (# comments allowed). `experiment` picks the builtin
/// defaults that the remaining keys override; unknown keys raise ConfigInvalid.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config_file(const std::filesystem::path& path);

struct RunOutcome {
  EvalReport report;
  Json model;
  /// Training-set class counts after any resampling stage.
  std::array<std::size_t, kNumClasses> train_counts{};
  std::array<std::size_t, kNumClasses> train_counts_before_resample{};
  std::vector<std::string> descriptor_ids;
};

/// Fits every stage on `train` only and scores `test` once.
RunOutcome execute(const ExperimentConfig& cfg, const Dataset& train, const Dataset& test);

struct RunRecord {
  std::string config_digest;
  EvalReport report;
  std::filesystem::path report_path;
  std::filesystem::path model_path;
  std::string started_at;
  std::string finished_at;
  std::array<std::size_t, kNumClasses> train_counts{};
  std::array<std::size_t, kNumClasses> train_counts_before_resample{};
};

/// Loads, splits, executes, then writes the report to report_path and the model
/// next to it (<stem>.model.json). Log lines go to `log` when given.
RunRecord run(const ExperimentConfig& cfg, const std::filesystem::path& report_path, std::ostream* log = nullptr);

/// Model file path used by run for a given report path.
std::filesystem::path model_path_for(const std::filesystem::path& report_path);

/// One row per class plus macro and weighted rows.
std::string report_to_csv(const EvalReport& report);

struct ComparisonEntry {
  std::string label;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct ComparisonSummary {
  /// Ordered by experiment id.
  std::vector<ComparisonEntry> entries;
  /// Labels by descending accuracy.
  std::vector<std::string> ranking;

  std::string render() const;
};

ComparisonSummary compare(const std::vector<EvalReport>& reports);

/// Grouped bar chart (accuracy and macro precision/recall/F1 per experiment) as SVG.
std::string render_comparison_svg(const ComparisonSummary& summary);

}  // namespace fpbench
