#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fpbench/dataset.hpp"
#include "fpbench/types.hpp"

namespace fpbench {

/// Rows are the true class, columns the predicted class.
struct ConfusionMatrix {
  std::array<std::array<std::uint64_t, kNumClasses>, kNumClasses> counts{};

  std::uint64_t total() const;
  std::uint64_t trace() const;
};

ConfusionMatrix confusion(const Labels& y_true, const Labels& y_pred);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::uint64_t support = 0;
  /// (TP + TN) / total for this class against the rest.
  double one_vs_rest_accuracy = 0.0;
};

struct AverageMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct ReportMeta {
  std::string experiment_id;
  std::uint64_t seed = 0;
  std::string config_digest;
  double wall_time_seconds = 0.0;
  std::vector<std::string> descriptor_ids;
};

struct EvalReport {
  std::array<ClassMetrics, kNumClasses> per_class{};
  double accuracy = 0.0;
  AverageMetrics macro_avg;
  AverageMetrics weighted_avg;
  ConfusionMatrix confusion;
  ReportMeta meta;
};

/// Precision, recall and F1 per class with 0/0 taken as 0; macro averages are over
/// all four classes, weighted averages use the supports.
EvalReport report_from_confusion(const ConfusionMatrix& cm, const ReportMeta& meta = {});

enum class RowAccuracy { Overall, OneVsRest };

/// Class rows (Real .. Hard) with Accuracy, Precision, Recall and F1-Score columns,
/// two decimals.
std::string render_table(const EvalReport& report, RowAccuracy row_accuracy = RowAccuracy::Overall);

/// One row per model (accuracy and macro precision/recall/F1).
struct SummaryRow {
  std::string name;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

std::string render_summary_table(const std::vector<SummaryRow>& rows, const std::string& first_column = "Classifier");

}  // namespace fpbench
