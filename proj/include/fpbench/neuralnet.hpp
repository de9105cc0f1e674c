#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fpbench/types.hpp"

namespace fpbench {

/// Dense row-major tensor. Images are H x W x C; conv filters K x K x C x F.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> data;

  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> shape, double fill = 0.0);

  std::size_t size() const { return data.size(); }
  std::size_t dim(std::size_t i) const { return shape.at(i); }
  double& operator[](std::size_t i) { return data[i]; }
  double operator[](std::size_t i) const { return data[i]; }
};

/// "Same" cross-correlation, stride 1, zero padding. bias may be empty.
Tensor conv2d(const Tensor& input, const Tensor& filters, const Tensor& bias = {});
/// 2x2 max, stride 2.
Tensor maxpool2d(const Tensor& input);
Tensor relu(const Tensor& x);
/// Max-subtracted softmax.
Vector softmax(std::span<const double> logits);

enum class DropoutMode { Train, Infer };
/// Inverted dropout: survivors scaled by 1/(1-rate) in Train mode, identity in Infer.
Tensor dropout(const Tensor& x, double rate, DropoutMode mode, std::uint64_t seed);

/// -ln(max(probs[label], 1e-12)).
double cross_entropy(std::span<const double> probs, int label);

struct ConvLayerSpec {
  std::size_t filters = 32;
  std::size_t kernel = 3;
};

struct CnnArchitecture {
  std::size_t height = 32;
  std::size_t width = 32;
  std::size_t channels = 1;
  std::vector<ConvLayerSpec> conv_layers = {{32, 3}, {64, 3}, {128, 3}};
  std::size_t dense_hidden = 128;
  double dropout_rate = 0.5;
  std::size_t output_classes = 4;

  /// Three conv layers (32, 64, 128 filters, 3x3), dense 128, dropout 0.5, 4 outputs.
  static CnnArchitecture standard(std::size_t size, std::size_t channels);
  void validate() const;
  /// Flattened length after the last pooling stage.
  std::size_t flat_size() const;
};

struct TrainConfig {
  double learning_rate = 0.001;
  std::size_t batch_size = 32;
  std::size_t epochs = 20;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 0;

  void validate() const;
};

struct AdamState {
  std::vector<Tensor> m;
  std::vector<Tensor> v;
  std::uint64_t step = 0;
};

/// Parameter order: per conv layer (weights KxKxCxF, bias F), then dense hidden
/// (weights in x hidden, bias), then output (weights hidden x classes, bias).
struct CnnModel {
  CnnArchitecture arch;
  std::vector<Tensor> params;
  AdamState optimizer;
  std::uint64_t seed = 0;
  std::vector<double> epoch_losses;
};

/// He-normal weights for ReLU layers, 1/fan_in variance for the output layer, zero biases.
CnnModel init_cnn(const CnnArchitecture& arch, std::uint64_t seed);

/// A dropout mask is one multiplier per hidden unit (0 or 1/(1-rate)); an empty
/// mask means inference mode.
using DropoutMask = std::vector<double>;
DropoutMask draw_dropout_mask(std::size_t units, double rate, std::uint64_t seed);

struct Batch {
  std::vector<Tensor> images;
  Labels labels;
  /// Empty, or one mask per image.
  std::vector<DropoutMask> masks;
};

struct GradientResult {
  std::vector<Tensor> grads;
  double loss = 0.0;
};

/// Class probabilities for one image.
Vector forward(const CnnModel& model, const Tensor& image, const DropoutMask& mask = {});
/// Mean batch loss.
double batch_loss(const CnnModel& model, const Batch& batch);
/// Exact gradients of the mean batch loss with respect to every parameter.
GradientResult backward(const CnnModel& model, const Batch& batch);

void adam_step(std::vector<Tensor>& params, const std::vector<Tensor>& grads, AdamState& state,
               const TrainConfig& cfg);

CnnModel train_cnn(const CnnArchitecture& arch, const std::vector<Tensor>& images, const Labels& labels,
                   const TrainConfig& cfg);

struct CnnPrediction {
  Labels labels;
  Samples probabilities;
};

/// argmax of softmax with dropout disabled; ties go to the smaller index.
CnnPrediction predict_cnn(const CnnModel& model, const std::vector<Tensor>& images);

struct GradientCheckReport {
  double max_relative_error = 0.0;
  std::size_t worst_param = 0;
  std::size_t worst_index = 0;
  std::size_t checked = 0;
  bool passed = false;
};

/// Compares the supplied analytic gradients with central differences of batch_loss.
GradientCheckReport compare_gradients(const CnnModel& model, const Batch& batch, const std::vector<Tensor>& analytic,
                                      double tolerance, double step = 1e-5);
GradientCheckReport gradient_check(const CnnModel& model, const Batch& batch, double tolerance, double step = 1e-5);

}  // namespace fpbench
