#include "fpbench/metrics.hpp"

#include <algorithm>
#include <cstdio>

#include "fpbench/error.hpp"

namespace fpbench {

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t t = 0;
  for (const auto& row : counts)
    for (auto v : row) t += v;
  return t;
}

std::uint64_t ConfusionMatrix::trace() const {
  std::uint64_t t = 0;
  for (int i = 0; i < kNumClasses; ++i) t += counts[i][i];
  return t;
}

ConfusionMatrix confusion(const Labels& y_true, const Labels& y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw Error(ErrorCode::LengthMismatch,
                std::to_string(y_true.size()) + " true labels vs " + std::to_string(y_pred.size()) + " predictions");
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const int t = y_true[i], p = y_pred[i];
    if (t < 0 || t >= kNumClasses || p < 0 || p >= kNumClasses) {
      throw Error(ErrorCode::LabelOutOfRange, "label pair (" + std::to_string(t) + ", " + std::to_string(p) + ")");
    }
    ++cm.counts[t][p];
  }
  return cm;
}

namespace {

double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

EvalReport report_from_confusion(const ConfusionMatrix& cm, const ReportMeta& meta) {
  const std::uint64_t total = cm.total();
  if (total == 0) throw Error(ErrorCode::EmptyEvaluation, "confusion matrix is empty");
  EvalReport r;
  r.confusion = cm;
  r.meta = meta;
  r.accuracy = static_cast<double>(cm.trace()) / static_cast<double>(total);
  for (int c = 0; c < kNumClasses; ++c) {
    double tp = static_cast<double>(cm.counts[c][c]);
    double predicted = 0.0, actual = 0.0;
    for (int k = 0; k < kNumClasses; ++k) {
      predicted += static_cast<double>(cm.counts[k][c]);
      actual += static_cast<double>(cm.counts[c][k]);
    }
    ClassMetrics& m = r.per_class[c];
    m.precision = ratio(tp, predicted);
    m.recall = ratio(tp, actual);
    m.f1 = ratio(2.0 * m.precision * m.recall, m.precision + m.recall);
    m.support = static_cast<std::uint64_t>(actual);
    const double fp = predicted - tp, fn = actual - tp;
    m.one_vs_rest_accuracy = (static_cast<double>(total) - fp - fn) / static_cast<double>(total);

    r.macro_avg.precision += m.precision / kNumClasses;
    r.macro_avg.recall += m.recall / kNumClasses;
    r.macro_avg.f1 += m.f1 / kNumClasses;
    const double w = actual / static_cast<double>(total);
    r.weighted_avg.precision += w * m.precision;
    r.weighted_avg.recall += w * m.recall;
    r.weighted_avg.f1 += w * m.f1;
  }
  return r;
}

namespace {

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string render_grid(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& row : rows) width[c] = std::max(width[c], row[c].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::string pad(width[c] - cells[c].size(), ' ');
      if (c == 0) {
        s += cells[c] + pad;
      } else {
        s += "  " + pad + cells[c];
      }
    }
    return s + "\n";
  };
  std::string out = line(header);
  for (const auto& row : rows) out += line(row);
  return out;
}

}  // namespace

std::string render_table(const EvalReport& report, RowAccuracy row_accuracy) {
  std::vector<std::vector<std::string>> rows;
  for (AlterationClass c : kAllClasses) {
    const ClassMetrics& m = report.per_class[to_index(c)];
    const double acc = row_accuracy == RowAccuracy::Overall ? report.accuracy : m.one_vs_rest_accuracy;
    rows.push_back({std::string(class_name(c)), fixed2(acc), fixed2(m.precision), fixed2(m.recall), fixed2(m.f1)});
  }
  return render_grid({"Experiment", "Accuracy", "Precision", "Recall", "F1-Score"}, rows);
}

std::string render_summary_table(const std::vector<SummaryRow>& rows, const std::string& first_column) {
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : rows) {
    cells.push_back({r.name, fixed2(r.accuracy), fixed2(r.precision), fixed2(r.recall), fixed2(r.f1)});
  }
  return render_grid({first_column, "Accuracy", "Precision", "Recall", "F1-Score"}, cells);
}

}  // namespace fpbench
