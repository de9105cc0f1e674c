#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "fpbench/types.hpp"

namespace fpbench {

enum class ClassifierKind { LogReg, Knn, Mlp, Svm };

std::string_view to_string(ClassifierKind kind);

struct LogRegConfig {
  double l2 = 1e-4;
  double learning_rate = 0.01;
  std::size_t max_epochs = 500;
  double tol = 1e-6;
  std::uint64_t seed = 0;
};

struct KnnConfig {
  std::size_t k = 5;
};

struct MlpConfig {
  std::size_t hidden = 100;
  std::size_t max_iter = 1000;
  double learning_rate = 0.001;
  std::size_t batch_size = 32;
  double tol = 1e-4;
  std::size_t n_iter_no_change = 10;
  std::uint64_t seed = 0;
};

struct SvmConfig {
  double C = 1.0;
  /// Empty means 1 / (feature_dim * mean per-feature variance).
  std::optional<double> gamma;
  double tol = 1e-3;
  std::size_t max_iterations = 10'000'000;
};

/// Softmax regression; one weight row per class in TrainedClassifier::classes.
struct LogRegParams {
  Samples weights;
  Vector bias;
};

struct KnnParams {
  std::size_t k = 5;
  Samples points;
  Labels labels;
};

/// w1 is feature_dim x hidden, w2 is hidden x classes, both row-major.
struct MlpParams {
  std::size_t hidden = 0;
  Vector w1, b1, w2, b2;
};

/// One-vs-rest binary machine: f(x) = sum_i coef_i K(sv_i, x) - rho, coef_i = alpha_i y_i.
struct SvmBinary {
  Samples support;
  Vector alpha;
  std::vector<int> sign;
  double rho = 0.0;
  std::size_t iterations = 0;
};

struct SvmParams {
  double gamma = 0.0;
  double C = 1.0;
  std::vector<SvmBinary> machines;
};

struct TrainedClassifier {
  ClassifierKind kind = ClassifierKind::LogReg;
  std::variant<LogRegParams, KnnParams, MlpParams, SvmParams> params;
  /// Sorted distinct training labels; score column i belongs to classes[i].
  Labels classes;
  std::size_t feature_dim = 0;
  /// Mean training loss per epoch (LogReg, Mlp).
  std::vector<double> loss_curve;
};

TrainedClassifier logreg_fit(const Samples& X, const Labels& y, const LogRegConfig& cfg = {});
TrainedClassifier knn_fit(const Samples& X, const Labels& y, const KnnConfig& cfg = {});
TrainedClassifier mlp_fit(const Samples& X, const Labels& y, const MlpConfig& cfg = {});
TrainedClassifier svm_fit(const Samples& X, const Labels& y, const SvmConfig& cfg = {});

/// The automatic RBF width; falls back to 1/feature_dim for zero-variance data.
double auto_gamma(const Samples& X);

struct Prediction {
  Labels labels;
  /// Per-class scores: probabilities (LogReg, Mlp), vote shares (Knn), decision values (Svm).
  Samples scores;
};

Prediction predict(const TrainedClassifier& model, const Samples& X);

std::size_t parameter_count(const TrainedClassifier& model);

/// Binary decision value of one-vs-rest machine `m` at x.
double svm_decision(const SvmParams& params, std::size_t m, const Vector& x);

}  // namespace fpbench
