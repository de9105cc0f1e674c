#include "fpbench/neuralnet.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "fpbench/error.hpp"
#include "fpbench/rng.hpp"

namespace fpbench {

namespace {

std::size_t product(const std::vector<std::size_t>& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

std::string shape_string(const std::vector<std::size_t>& shape) {
  std::string s = "(";
  for (std::size_t i = 0; i < shape.size(); ++i) s += (i ? "," : "") + std::to_string(shape[i]);
  return s + ")";
}

void conv_forward(const double* in, std::size_t h, std::size_t w, std::size_t c, const double* weights,
                  std::size_t k, std::size_t f, const double* bias, double* out) {
  const std::ptrdiff_t pad = static_cast<std::ptrdiff_t>(k / 2);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      double* o = out + (y * w + x) * f;
      for (std::size_t j = 0; j < f; ++j) o[j] = bias ? bias[j] : 0.0;
      for (std::size_t ky = 0; ky < k; ++ky) {
        const std::ptrdiff_t iy = static_cast<std::ptrdiff_t>(y + ky) - pad;
        if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(h)) continue;
        for (std::size_t kx = 0; kx < k; ++kx) {
          const std::ptrdiff_t ix = static_cast<std::ptrdiff_t>(x + kx) - pad;
          if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(w)) continue;
          const double* px = in + (static_cast<std::size_t>(iy) * w + static_cast<std::size_t>(ix)) * c;
          const double* wk = weights + (ky * k + kx) * c * f;
          for (std::size_t ch = 0; ch < c; ++ch) {
            const double v = px[ch];
            if (v == 0.0) continue;
            const double* wr = wk + ch * f;
            for (std::size_t j = 0; j < f; ++j) o[j] += v * wr[j];
          }
        }
      }
    }
  }
}

// grad_in may be null (first layer).
void conv_backward(const double* in, std::size_t h, std::size_t w, std::size_t c, const double* weights,
                   std::size_t k, std::size_t f, const double* grad_out, double* grad_w, double* grad_b,
                   double* grad_in) {
  const std::ptrdiff_t pad = static_cast<std::ptrdiff_t>(k / 2);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const double* g = grad_out + (y * w + x) * f;
      bool any = false;
      for (std::size_t j = 0; j < f; ++j) {
        grad_b[j] += g[j];
        any = any || g[j] != 0.0;
      }
      if (!any) continue;
      for (std::size_t ky = 0; ky < k; ++ky) {
        const std::ptrdiff_t iy = static_cast<std::ptrdiff_t>(y + ky) - pad;
        if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(h)) continue;
        for (std::size_t kx = 0; kx < k; ++kx) {
          const std::ptrdiff_t ix = static_cast<std::ptrdiff_t>(x + kx) - pad;
          if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(w)) continue;
          const std::size_t pix = static_cast<std::size_t>(iy) * w + static_cast<std::size_t>(ix);
          const double* px = in + pix * c;
          const std::size_t wo = (ky * k + kx) * c * f;
          for (std::size_t ch = 0; ch < c; ++ch) {
            const double v = px[ch];
            double* gw = grad_w + wo + ch * f;
            if (v != 0.0)
              for (std::size_t j = 0; j < f; ++j) gw[j] += v * g[j];
            if (grad_in) {
              const double* wr = weights + wo + ch * f;
              double acc = 0.0;
              for (std::size_t j = 0; j < f; ++j) acc += wr[j] * g[j];
              grad_in[pix * c + ch] += acc;
            }
          }
        }
      }
    }
  }
}

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteLoss, std::string("non-finite value in ") + what);
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> s, double fill) : shape(std::move(s)), data(product(shape), fill) {}

Tensor conv2d(const Tensor& input, const Tensor& filters, const Tensor& bias) {
  if (input.shape.size() != 3 || filters.shape.size() != 4) {
    throw Error(ErrorCode::ShapeMismatch, "conv2d expects HxWxC input and KxKxCxF filters");
  }
  const std::size_t h = input.dim(0), w = input.dim(1), c = input.dim(2);
  const std::size_t k = filters.dim(0), f = filters.dim(3);
  if (filters.dim(1) != k || k % 2 == 0) throw Error(ErrorCode::ShapeMismatch, "conv2d kernel must be square and odd");
  if (filters.dim(2) != c) {
    throw Error(ErrorCode::ShapeMismatch,
                "filters " + shape_string(filters.shape) + " do not match input " + shape_string(input.shape));
  }
  if (!bias.data.empty() && bias.size() != f) throw Error(ErrorCode::ShapeMismatch, "conv2d bias length");
  Tensor out({h, w, f});
  conv_forward(input.data.data(), h, w, c, filters.data.data(), k, f, bias.data.empty() ? nullptr : bias.data.data(),
               out.data.data());
  return out;
}

Tensor maxpool2d(const Tensor& input) {
  if (input.shape.size() != 3) throw Error(ErrorCode::ShapeMismatch, "maxpool2d expects HxWxC");
  const std::size_t h = input.dim(0), w = input.dim(1), c = input.dim(2);
  if (h % 2 != 0 || w % 2 != 0) throw Error(ErrorCode::OddSpatialDim, shape_string(input.shape));
  Tensor out({h / 2, w / 2, c});
  for (std::size_t y = 0; y < h / 2; ++y)
    for (std::size_t x = 0; x < w / 2; ++x)
      for (std::size_t ch = 0; ch < c; ++ch) {
        double m = input[((2 * y) * w + 2 * x) * c + ch];
        m = std::max(m, input[((2 * y) * w + 2 * x + 1) * c + ch]);
        m = std::max(m, input[((2 * y + 1) * w + 2 * x) * c + ch]);
        m = std::max(m, input[((2 * y + 1) * w + 2 * x + 1) * c + ch]);
        out[(y * (w / 2) + x) * c + ch] = m;
      }
  return out;
}

Tensor relu(const Tensor& x) {
  Tensor out = x;
  for (double& v : out.data) v = std::max(v, 0.0);
  return out;
}

Vector softmax(std::span<const double> logits) {
  Vector p(logits.begin(), logits.end());
  if (p.empty()) return p;
  const double m = *std::max_element(p.begin(), p.end());
  double sum = 0.0;
  for (double& v : p) {
    v = std::exp(v - m);
    sum += v;
  }
  for (double& v : p) v /= sum;
  return p;
}

DropoutMask draw_dropout_mask(std::size_t units, double rate, std::uint64_t seed) {
  if (!(rate >= 0.0 && rate < 1.0)) throw Error(ErrorCode::InvalidArgument, "dropout rate must lie in [0,1)");
  Rng rng(seed);
  DropoutMask mask(units);
  const double keep_scale = 1.0 / (1.0 - rate);
  for (double& m : mask) m = rng.uniform() < rate ? 0.0 : keep_scale;
  return mask;
}

Tensor dropout(const Tensor& x, double rate, DropoutMode mode, std::uint64_t seed) {
  if (!(rate >= 0.0 && rate < 1.0)) throw Error(ErrorCode::InvalidArgument, "dropout rate must lie in [0,1)");
  if (mode == DropoutMode::Infer) return x;
  const DropoutMask mask = draw_dropout_mask(x.size(), rate, seed);
  Tensor out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= mask[i];
  return out;
}

double cross_entropy(std::span<const double> probs, int label) {
  if (label < 0 || static_cast<std::size_t>(label) >= probs.size()) {
    throw Error(ErrorCode::LabelOutOfRange, "label " + std::to_string(label));
  }
  return -std::log(std::max(probs[static_cast<std::size_t>(label)], 1e-12));
}

CnnArchitecture CnnArchitecture::standard(std::size_t size, std::size_t channels) {
  CnnArchitecture arch;
  arch.height = size;
  arch.width = size;
  arch.channels = channels;
  return arch;
}

void CnnArchitecture::validate() const {
  if (conv_layers.empty()) throw Error(ErrorCode::ShapeMismatch, "architecture needs at least one conv layer");
  std::size_t h = height, w = width;
  for (const auto& layer : conv_layers) {
    if (layer.kernel % 2 == 0 || layer.filters == 0) {
      throw Error(ErrorCode::ShapeMismatch, "conv layers need an odd kernel and at least one filter");
    }
    if (h % 2 != 0 || w % 2 != 0 || h == 0 || w == 0) {
      throw Error(ErrorCode::OddSpatialDim, "input " + std::to_string(height) + "x" + std::to_string(width) +
                                                " cannot be halved " + std::to_string(conv_layers.size()) + " times");
    }
    h /= 2;
    w /= 2;
  }
  if (channels == 0 || dense_hidden == 0 || output_classes < 2) {
    throw Error(ErrorCode::ShapeMismatch, "degenerate architecture");
  }
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) throw Error(ErrorCode::InvalidArgument, "dropout rate");
}

std::size_t CnnArchitecture::flat_size() const {
  std::size_t h = height, w = width;
  for (std::size_t i = 0; i < conv_layers.size(); ++i) {
    h /= 2;
    w /= 2;
  }
  return h * w * conv_layers.back().filters;
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw Error(ErrorCode::InvalidArgument, "learning_rate must be positive");
  if (batch_size < 1) throw Error(ErrorCode::InvalidArgument, "batch_size must be at least 1");
}

CnnModel init_cnn(const CnnArchitecture& arch, std::uint64_t seed) {
  arch.validate();
  CnnModel model;
  model.arch = arch;
  model.seed = seed;
  Rng rng(derive_seed(seed, {0x696e6974ULL}));
  auto fill_normal = [&rng](Tensor& t, double stddev) {
    for (double& v : t.data) v = rng.normal(0.0, stddev);
  };
  std::size_t c = arch.channels;
  for (const auto& layer : arch.conv_layers) {
    Tensor w({layer.kernel, layer.kernel, c, layer.filters});
    fill_normal(w, std::sqrt(2.0 / static_cast<double>(layer.kernel * layer.kernel * c)));
    model.params.push_back(std::move(w));
    model.params.emplace_back(std::vector<std::size_t>{layer.filters});
    c = layer.filters;
  }
  const std::size_t flat = arch.flat_size();
  Tensor w1({flat, arch.dense_hidden});
  fill_normal(w1, std::sqrt(2.0 / static_cast<double>(flat)));
  model.params.push_back(std::move(w1));
  model.params.emplace_back(std::vector<std::size_t>{arch.dense_hidden});
  Tensor w2({arch.dense_hidden, arch.output_classes});
  fill_normal(w2, std::sqrt(1.0 / static_cast<double>(arch.dense_hidden)));
  model.params.push_back(std::move(w2));
  model.params.emplace_back(std::vector<std::size_t>{arch.output_classes});

  for (const auto& p : model.params) {
    model.optimizer.m.emplace_back(p.shape);
    model.optimizer.v.emplace_back(p.shape);
  }
  return model;
}

namespace {

/// Activations kept for the backward pass.
struct ForwardTrace {
  std::vector<Tensor> conv_inputs;   // input to each conv layer
  std::vector<Tensor> conv_outputs;  // post-ReLU, pre-pool
  Tensor flat;
  Vector hidden_pre;
  Vector hidden;  // post-ReLU, post-dropout
  Vector probs;
};

void check_input(const CnnModel& model, const Tensor& image) {
  const auto& a = model.arch;
  if (image.shape != std::vector<std::size_t>{a.height, a.width, a.channels}) {
    throw Error(ErrorCode::ShapeMismatch, "image " + shape_string(image.shape) + " does not match architecture input " +
                                              shape_string({a.height, a.width, a.channels}));
  }
}

Vector run_forward(const CnnModel& model, const Tensor& image, const DropoutMask& mask, ForwardTrace* trace) {
  check_input(model, image);
  const auto& arch = model.arch;
  const std::size_t layers = arch.conv_layers.size();
  Tensor x = image;
  for (std::size_t l = 0; l < layers; ++l) {
    Tensor conv = relu(conv2d(x, model.params[2 * l], model.params[2 * l + 1]));
    if (trace) {
      trace->conv_inputs.push_back(std::move(x));
      trace->conv_outputs.push_back(conv);
    }
    x = maxpool2d(conv);
  }
  const Tensor& w1 = model.params[2 * layers];
  const Tensor& b1 = model.params[2 * layers + 1];
  const Tensor& w2 = model.params[2 * layers + 2];
  const Tensor& b2 = model.params[2 * layers + 3];
  const std::size_t flat = x.size(), hidden = arch.dense_hidden, out = arch.output_classes;
  if (!mask.empty() && mask.size() != hidden) throw Error(ErrorCode::ShapeMismatch, "dropout mask length");

  Vector pre(b1.data);
  for (std::size_t i = 0; i < flat; ++i) {
    const double v = x[i];
    if (v == 0.0) continue;
    const double* row = &w1.data[i * hidden];
    for (std::size_t j = 0; j < hidden; ++j) pre[j] += v * row[j];
  }
  Vector act(hidden);
  for (std::size_t j = 0; j < hidden; ++j) {
    act[j] = std::max(pre[j], 0.0);
    if (!mask.empty()) act[j] *= mask[j];
  }
  Vector logits(b2.data);
  for (std::size_t j = 0; j < hidden; ++j) {
    const double v = act[j];
    if (v == 0.0) continue;
    const double* row = &w2.data[j * out];
    for (std::size_t o = 0; o < out; ++o) logits[o] += v * row[o];
  }
  Vector probs = softmax(logits);
  if (trace) {
    trace->flat = std::move(x);
    trace->hidden_pre = std::move(pre);
    trace->hidden = std::move(act);
    trace->probs = probs;
  }
  return probs;
}

const DropoutMask& mask_for(const Batch& batch, std::size_t i) {
  static const DropoutMask none;
  return batch.masks.empty() ? none : batch.masks[i];
}

void check_batch(const Batch& batch) {
  if (batch.images.size() != batch.labels.size()) throw Error(ErrorCode::ShapeMismatch, "images and labels differ in count");
  if (!batch.masks.empty() && batch.masks.size() != batch.images.size()) {
    throw Error(ErrorCode::ShapeMismatch, "one dropout mask per image required");
  }
  if (batch.images.empty()) throw Error(ErrorCode::ShapeMismatch, "empty batch");
}

}  // namespace

Vector forward(const CnnModel& model, const Tensor& image, const DropoutMask& mask) {
  return run_forward(model, image, mask, nullptr);
}

double batch_loss(const CnnModel& model, const Batch& batch) {
  check_batch(batch);
  double total = 0.0;
  for (std::size_t i = 0; i < batch.images.size(); ++i) {
    total += cross_entropy(run_forward(model, batch.images[i], mask_for(batch, i), nullptr), batch.labels[i]);
  }
  return total / static_cast<double>(batch.images.size());
}

GradientResult backward(const CnnModel& model, const Batch& batch) {
  check_batch(batch);
  const auto& arch = model.arch;
  const std::size_t layers = arch.conv_layers.size();
  GradientResult result;
  for (const auto& p : model.params) result.grads.emplace_back(p.shape);
  const std::size_t hidden = arch.dense_hidden, out = arch.output_classes;
  const double inv_n = 1.0 / static_cast<double>(batch.images.size());

  for (std::size_t s = 0; s < batch.images.size(); ++s) {
    ForwardTrace tr;
    const DropoutMask& mask = mask_for(batch, s);
    run_forward(model, batch.images[s], mask, &tr);
    const int label = batch.labels[s];
    if (label < 0 || static_cast<std::size_t>(label) >= out) {
      throw Error(ErrorCode::LabelOutOfRange, "label " + std::to_string(label));
    }
    result.loss += cross_entropy(tr.probs, label) * inv_n;

    // softmax + cross-entropy
    Vector d_logits(out);
    for (std::size_t o = 0; o < out; ++o) d_logits[o] = (tr.probs[o] - (static_cast<int>(o) == label ? 1.0 : 0.0)) * inv_n;

    const Tensor& w2 = model.params[2 * layers + 2];
    Tensor& gw2 = result.grads[2 * layers + 2];
    Tensor& gb2 = result.grads[2 * layers + 3];
    Vector d_hidden(hidden, 0.0);
    for (std::size_t j = 0; j < hidden; ++j) {
      const double* row = &w2.data[j * out];
      double* grow = &gw2.data[j * out];
      double acc = 0.0;
      for (std::size_t o = 0; o < out; ++o) {
        grow[o] += tr.hidden[j] * d_logits[o];
        acc += row[o] * d_logits[o];
      }
      const double m = mask.empty() ? 1.0 : mask[j];
      d_hidden[j] = tr.hidden_pre[j] > 0.0 ? acc * m : 0.0;
    }
    for (std::size_t o = 0; o < out; ++o) gb2[o] += d_logits[o];

    const Tensor& w1 = model.params[2 * layers];
    Tensor& gw1 = result.grads[2 * layers];
    Tensor& gb1 = result.grads[2 * layers + 1];
    Tensor d_flat(tr.flat.shape);
    for (std::size_t i = 0; i < tr.flat.size(); ++i) {
      const double v = tr.flat[i];
      const double* row = &w1.data[i * hidden];
      double* grow = &gw1.data[i * hidden];
      double acc = 0.0;
      for (std::size_t j = 0; j < hidden; ++j) {
        grow[j] += v * d_hidden[j];
        acc += row[j] * d_hidden[j];
      }
      d_flat[i] = acc;
    }
    for (std::size_t j = 0; j < hidden; ++j) gb1[j] += d_hidden[j];

    Tensor d_pool = std::move(d_flat);
    for (std::size_t l = layers; l-- > 0;) {
      const Tensor& act = tr.conv_outputs[l];
      const std::size_t h = act.dim(0), w = act.dim(1), f = act.dim(2);
      // route through the pooling argmax (first maximum in scan order), then ReLU
      Tensor d_act({h, w, f});
      for (std::size_t y = 0; y < h / 2; ++y)
        for (std::size_t x = 0; x < w / 2; ++x)
          for (std::size_t ch = 0; ch < f; ++ch) {
            const std::size_t cand[4] = {((2 * y) * w + 2 * x) * f + ch, ((2 * y) * w + 2 * x + 1) * f + ch,
                                         ((2 * y + 1) * w + 2 * x) * f + ch, ((2 * y + 1) * w + 2 * x + 1) * f + ch};
            std::size_t best = cand[0];
            for (int q = 1; q < 4; ++q)
              if (act[cand[q]] > act[best]) best = cand[q];
            if (act[best] > 0.0) d_act[best] += d_pool[(y * (w / 2) + x) * f + ch];
          }
      const Tensor& input = tr.conv_inputs[l];
      const std::size_t c = input.dim(2);
      const std::size_t k = arch.conv_layers[l].kernel;
      Tensor d_input;
      if (l > 0) d_input = Tensor(input.shape);
      conv_backward(input.data.data(), h, w, c, model.params[2 * l].data.data(), k, f, d_act.data.data(),
                    result.grads[2 * l].data.data(), result.grads[2 * l + 1].data.data(),
                    l > 0 ? d_input.data.data() : nullptr);
      d_pool = std::move(d_input);
    }
  }
  return result;
}

void adam_step(std::vector<Tensor>& params, const std::vector<Tensor>& grads, AdamState& state,
               const TrainConfig& cfg) {
  if (params.size() != grads.size()) throw Error(ErrorCode::ShapeMismatch, "parameter and gradient counts differ");
  if (state.m.empty()) {
    for (const auto& p : params) {
      state.m.emplace_back(p.shape);
      state.v.emplace_back(p.shape);
    }
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(cfg.beta1, t);
  const double c2 = 1.0 - std::pow(cfg.beta2, t);
  for (std::size_t p = 0; p < params.size(); ++p) {
    if (params[p].size() != grads[p].size() || state.m[p].size() != params[p].size()) {
      throw Error(ErrorCode::ShapeMismatch, "parameter " + std::to_string(p) + " shape");
    }
    auto& w = params[p].data;
    auto& m = state.m[p].data;
    auto& v = state.v[p].data;
    const auto& g = grads[p].data;
    for (std::size_t i = 0; i < w.size(); ++i) {
      m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
      v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
      w[i] -= cfg.learning_rate * (m[i] / c1) / (std::sqrt(v[i] / c2) + cfg.epsilon);
    }
  }
}

CnnModel train_cnn(const CnnArchitecture& arch, const std::vector<Tensor>& images, const Labels& labels,
                   const TrainConfig& cfg) {
  cfg.validate();
  if (images.size() != labels.size()) throw Error(ErrorCode::ShapeMismatch, "images and labels differ in count");
  if (images.empty()) throw Error(ErrorCode::EmptyTrainingSet, "no training images");
  CnnModel model = init_cnn(arch, cfg.seed);
  for (const auto& img : images) check_input(model, img);
  for (int label : labels)
    if (label < 0 || static_cast<std::size_t>(label) >= arch.output_classes)
      throw Error(ErrorCode::LabelOutOfRange, "label " + std::to_string(label));

  std::vector<std::size_t> order(images.size());
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    Rng shuffle_rng(derive_seed(cfg.seed, {0x65706f6368ULL, epoch}));
    shuffle_rng.shuffle(order);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      Batch batch;
      for (std::size_t i = start; i < end; ++i) {
        batch.images.push_back(images[order[i]]);
        batch.labels.push_back(labels[order[i]]);
        if (arch.dropout_rate > 0.0) {
          batch.masks.push_back(
              draw_dropout_mask(arch.dense_hidden, arch.dropout_rate, derive_seed(cfg.seed, {0x64726f70ULL, epoch, i})));
        }
      }
      GradientResult g = backward(model, batch);
      check_finite(g.loss, "training loss");
      epoch_loss += g.loss * static_cast<double>(end - start);
      adam_step(model.params, g.grads, model.optimizer, cfg);
    }
    epoch_loss /= static_cast<double>(order.size());
    check_finite(epoch_loss, "epoch loss");
    model.epoch_losses.push_back(epoch_loss);
  }
  return model;
}

CnnPrediction predict_cnn(const CnnModel& model, const std::vector<Tensor>& images) {
  CnnPrediction pred;
  for (const auto& img : images) {
    Vector p = forward(model, img);
    pred.labels.push_back(static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin()));
    pred.probabilities.push_back(std::move(p));
  }
  return pred;
}

GradientCheckReport compare_gradients(const CnnModel& model, const Batch& batch, const std::vector<Tensor>& analytic,
                                      double tolerance, double step) {
  if (analytic.size() != model.params.size()) throw Error(ErrorCode::ShapeMismatch, "gradient count");
  GradientCheckReport report;
  CnnModel probe = model;
  for (std::size_t p = 0; p < probe.params.size(); ++p) {
    if (analytic[p].size() != probe.params[p].size()) throw Error(ErrorCode::ShapeMismatch, "gradient shape");
    for (std::size_t i = 0; i < probe.params[p].size(); ++i) {
      const double saved = probe.params[p][i];
      probe.params[p][i] = saved + step;
      const double up = batch_loss(probe, batch);
      probe.params[p][i] = saved - step;
      const double down = batch_loss(probe, batch);
      probe.params[p][i] = saved;
      const double numeric = (up - down) / (2.0 * step);
      const double a = analytic[p][i];
      // relative error with a 1e-6 floor so that exactly-zero gradients compare absolutely
      const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-6});
      ++report.checked;
      if (rel > report.max_relative_error) {
        report.max_relative_error = rel;
        report.worst_param = p;
        report.worst_index = i;
      }
    }
  }
  report.passed = report.max_relative_error < tolerance;
  return report;
}

GradientCheckReport gradient_check(const CnnModel& model, const Batch& batch, double tolerance, double step) {
  return compare_gradients(model, batch, backward(model, batch).grads, tolerance, step);
}

}  // namespace fpbench
