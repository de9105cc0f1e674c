#include "fpbench/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "fpbench/error.hpp"
#include "fpbench/rng.hpp"

namespace fpbench {

std::string_view to_string(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::LogReg: return "logreg";
    case ClassifierKind::Knn: return "knn";
    case ClassifierKind::Mlp: return "mlp";
    case ClassifierKind::Svm: return "svm";
  }
  return "unknown";
}

namespace {

void check_training_set(const Samples& X, const Labels& y) {
  if (X.size() != y.size()) throw Error(ErrorCode::LengthMismatch, "samples and labels differ in length");
  if (X.empty()) throw Error(ErrorCode::EmptyTrainingSet, "no training samples");
  const std::size_t d = X.front().size();
  for (const auto& x : X)
    if (x.size() != d) throw Error(ErrorCode::DimensionMismatch, "training samples differ in length");
  for (int label : y)
    if (label < 0) throw Error(ErrorCode::LabelOutOfRange, "negative label " + std::to_string(label));
}

Labels distinct_classes(const Labels& y) {
  Labels classes = y;
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  return classes;
}

std::size_t class_slot(const Labels& classes, int label) {
  return static_cast<std::size_t>(std::lower_bound(classes.begin(), classes.end(), label) - classes.begin());
}

/// Lexicographic (label, features) order so fits do not depend on input order.
std::vector<std::size_t> canonical_order(const Samples& X, const Labels& y) {
  std::vector<std::size_t> order(X.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (y[a] != y[b]) return y[a] < y[b];
    return X[a] < X[b];
  });
  return order;
}

double squared_distance(const Vector& a, const Vector& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

void softmax_inplace(Vector& z) {
  const double m = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - m);
    sum += v;
  }
  for (double& v : z) v /= sum;
}

int argmax_label(const Vector& scores, const Labels& classes) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i)
    if (scores[i] > scores[best]) best = i;
  return classes[best];
}

}  // namespace

TrainedClassifier logreg_fit(const Samples& X_in, const Labels& y_in, const LogRegConfig& cfg) {
  check_training_set(X_in, y_in);
  const auto order = canonical_order(X_in, y_in);
  Samples X;
  Labels y;
  for (std::size_t i : order) {
    X.push_back(X_in[i]);
    y.push_back(y_in[i]);
  }

  TrainedClassifier model;
  model.kind = ClassifierKind::LogReg;
  model.classes = distinct_classes(y);
  model.feature_dim = X.front().size();
  const std::size_t n = X.size(), d = model.feature_dim, k = model.classes.size();
  LogRegParams p;
  p.weights.assign(k, Vector(d, 0.0));
  p.bias.assign(k, 0.0);

  std::vector<std::size_t> slot(n);
  for (std::size_t i = 0; i < n; ++i) slot[i] = class_slot(model.classes, y[i]);

  double previous = std::numeric_limits<double>::infinity();
  Samples grad_w(k, Vector(d));
  Vector grad_b(k), z(k);
  for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    for (auto& row : grad_w) std::fill(row.begin(), row.end(), 0.0);
    std::fill(grad_b.begin(), grad_b.end(), 0.0);
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < k; ++c) z[c] = p.bias[c] + std::inner_product(X[i].begin(), X[i].end(), p.weights[c].begin(), 0.0);
      softmax_inplace(z);
      loss -= std::log(std::max(z[slot[i]], 1e-12));
      for (std::size_t c = 0; c < k; ++c) {
        const double r = z[c] - (c == slot[i] ? 1.0 : 0.0);
        grad_b[c] += r;
        for (std::size_t j = 0; j < d; ++j) grad_w[c][j] += r * X[i][j];
      }
    }
    loss /= static_cast<double>(n);
    double sq = 0.0;
    for (const auto& row : p.weights)
      for (double w : row) sq += w * w;
    loss += 0.5 * cfg.l2 * sq;
    if (!std::isfinite(loss)) throw Error(ErrorCode::NonFiniteLoss, "logistic regression diverged");
    model.loss_curve.push_back(loss);
    if (previous - loss < cfg.tol && epoch > 0) break;
    previous = loss;

    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t c = 0; c < k; ++c) {
      for (std::size_t j = 0; j < d; ++j) p.weights[c][j] -= cfg.learning_rate * (grad_w[c][j] * inv_n + cfg.l2 * p.weights[c][j]);
      p.bias[c] -= cfg.learning_rate * grad_b[c] * inv_n;
    }
  }
  model.params = std::move(p);
  return model;
}

TrainedClassifier knn_fit(const Samples& X, const Labels& y, const KnnConfig& cfg) {
  if (X.empty()) throw Error(ErrorCode::EmptyTrainingSet, "KNN needs at least one training sample");
  check_training_set(X, y);
  if (cfg.k < 1 || cfg.k > X.size()) {
    throw Error(ErrorCode::InvalidArgument,
                "k=" + std::to_string(cfg.k) + " with " + std::to_string(X.size()) + " training samples");
  }
  TrainedClassifier model;
  model.kind = ClassifierKind::Knn;
  model.classes = distinct_classes(y);
  model.feature_dim = X.front().size();
  model.params = KnnParams{cfg.k, X, y};
  return model;
}

TrainedClassifier mlp_fit(const Samples& X_in, const Labels& y_in, const MlpConfig& cfg) {
  check_training_set(X_in, y_in);
  if (cfg.hidden == 0 || cfg.batch_size == 0) throw Error(ErrorCode::InvalidArgument, "MLP hidden and batch must be positive");
  const auto order0 = canonical_order(X_in, y_in);
  Samples X;
  Labels y;
  for (std::size_t i : order0) {
    X.push_back(X_in[i]);
    y.push_back(y_in[i]);
  }

  TrainedClassifier model;
  model.kind = ClassifierKind::Mlp;
  model.classes = distinct_classes(y);
  model.feature_dim = X.front().size();
  const std::size_t n = X.size(), d = model.feature_dim, h = cfg.hidden, k = model.classes.size();

  MlpParams p;
  p.hidden = h;
  p.w1.resize(d * h);
  p.b1.assign(h, 0.0);
  p.w2.resize(h * k);
  p.b2.assign(k, 0.0);
  Rng rng(derive_seed(cfg.seed, {0x6d6c70ULL}));
  const double bound1 = std::sqrt(6.0 / static_cast<double>(d + h));
  const double bound2 = std::sqrt(6.0 / static_cast<double>(h + k));
  for (double& w : p.w1) w = rng.uniform(-bound1, bound1);
  for (double& w : p.b1) w = rng.uniform(-bound1, bound1);
  for (double& w : p.w2) w = rng.uniform(-bound2, bound2);
  for (double& w : p.b2) w = rng.uniform(-bound2, bound2);

  std::vector<std::size_t> slot(n);
  for (std::size_t i = 0; i < n; ++i) slot[i] = class_slot(model.classes, y[i]);

  std::vector<Vector*> params = {&p.w1, &p.b1, &p.w2, &p.b2};
  std::vector<Vector> grads(4), m(4), v(4);
  for (std::size_t q = 0; q < 4; ++q) {
    grads[q].assign(params[q]->size(), 0.0);
    m[q].assign(params[q]->size(), 0.0);
    v[q].assign(params[q]->size(), 0.0);
  }
  const double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  std::uint64_t step = 0;

  std::vector<std::size_t> order(n);
  Vector pre(h), act(h), z(k), d_hidden(h);
  double best_loss = std::numeric_limits<double>::infinity();
  std::size_t stale = 0;
  for (std::size_t epoch = 0; epoch < cfg.max_iter; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    Rng shuffle_rng(derive_seed(cfg.seed, {0x65706f6368ULL, epoch}));
    shuffle_rng.shuffle(order);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
      const std::size_t end = std::min(n, start + cfg.batch_size);
      const double inv_b = 1.0 / static_cast<double>(end - start);
      for (auto& g : grads) std::fill(g.begin(), g.end(), 0.0);
      for (std::size_t t = start; t < end; ++t) {
        const Vector& x = X[order[t]];
        const std::size_t target = slot[order[t]];
        pre = p.b1;
        for (std::size_t j = 0; j < d; ++j) {
          const double xv = x[j];
          if (xv == 0.0) continue;
          const double* row = &p.w1[j * h];
          for (std::size_t u = 0; u < h; ++u) pre[u] += xv * row[u];
        }
        for (std::size_t u = 0; u < h; ++u) act[u] = std::max(pre[u], 0.0);
        z = p.b2;
        for (std::size_t u = 0; u < h; ++u) {
          if (act[u] == 0.0) continue;
          for (std::size_t c = 0; c < k; ++c) z[c] += act[u] * p.w2[u * k + c];
        }
        softmax_inplace(z);
        epoch_loss -= std::log(std::max(z[target], 1e-12));
        for (std::size_t c = 0; c < k; ++c) z[c] = (z[c] - (c == target ? 1.0 : 0.0)) * inv_b;
        for (std::size_t c = 0; c < k; ++c) grads[3][c] += z[c];
        for (std::size_t u = 0; u < h; ++u) {
          double acc = 0.0;
          for (std::size_t c = 0; c < k; ++c) {
            grads[2][u * k + c] += act[u] * z[c];
            acc += p.w2[u * k + c] * z[c];
          }
          d_hidden[u] = pre[u] > 0.0 ? acc : 0.0;
        }
        for (std::size_t u = 0; u < h; ++u) grads[1][u] += d_hidden[u];
        for (std::size_t j = 0; j < d; ++j) {
          const double xv = x[j];
          if (xv == 0.0) continue;
          double* grow = &grads[0][j * h];
          for (std::size_t u = 0; u < h; ++u) grow[u] += xv * d_hidden[u];
        }
      }
      ++step;
      const double c1 = 1.0 - std::pow(beta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(beta2, static_cast<double>(step));
      for (std::size_t q = 0; q < 4; ++q) {
        Vector& w = *params[q];
        for (std::size_t i = 0; i < w.size(); ++i) {
          m[q][i] = beta1 * m[q][i] + (1.0 - beta1) * grads[q][i];
          v[q][i] = beta2 * v[q][i] + (1.0 - beta2) * grads[q][i] * grads[q][i];
          w[i] -= cfg.learning_rate * (m[q][i] / c1) / (std::sqrt(v[q][i] / c2) + eps);
        }
      }
    }
    epoch_loss /= static_cast<double>(n);
    if (!std::isfinite(epoch_loss)) throw Error(ErrorCode::NonFiniteLoss, "MLP diverged");
    model.loss_curve.push_back(epoch_loss);
    if (epoch_loss > best_loss - cfg.tol) {
      if (++stale >= cfg.n_iter_no_change) break;
    } else {
      stale = 0;
    }
    best_loss = std::min(best_loss, epoch_loss);
  }
  model.params = std::move(p);
  return model;
}

double auto_gamma(const Samples& X) {
  if (X.empty() || X.front().empty()) return 1.0;
  const std::size_t n = X.size(), d = X.front().size();
  double mean_var = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    double mean = 0.0;
    for (const auto& x : X) mean += x[j];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (const auto& x : X) var += (x[j] - mean) * (x[j] - mean);
    mean_var += var / static_cast<double>(n);
  }
  mean_var /= static_cast<double>(d);
  if (!(mean_var > 0.0)) return 1.0 / static_cast<double>(d);
  return 1.0 / (static_cast<double>(d) * mean_var);
}

namespace {

/// RBF kernel rows, fully materialised for small problems and cached otherwise.
class KernelRows {
 public:
  KernelRows(const Samples& X, double gamma) : X_(X), gamma_(gamma), n_(X.size()) {
    if (n_ * n_ <= kFullLimit) {
      full_.resize(n_ * n_);
      for (std::size_t i = 0; i < n_; ++i) {
        full_[i * n_ + i] = 1.0;
        for (std::size_t j = i + 1; j < n_; ++j) {
          const double v = std::exp(-gamma_ * squared_distance(X_[i], X_[j]));
          full_[i * n_ + j] = v;
          full_[j * n_ + i] = v;
        }
      }
    }
  }

  const double* row(std::size_t i) {
    if (!full_.empty()) return &full_[i * n_];
    auto it = cache_.find(i);
    if (it != cache_.end()) return it->second.data();
    if (cache_.size() * n_ >= kFullLimit) {
      cache_.erase(fifo_.front());
      fifo_.erase(fifo_.begin());
    }
    Vector r(n_);
    for (std::size_t j = 0; j < n_; ++j) r[j] = std::exp(-gamma_ * squared_distance(X_[i], X_[j]));
    fifo_.push_back(i);
    return cache_.emplace(i, std::move(r)).first->second.data();
  }

 private:
  static constexpr std::size_t kFullLimit = 16'000'000;
  const Samples& X_;
  double gamma_;
  std::size_t n_;
  Vector full_;
  std::unordered_map<std::size_t, Vector> cache_;
  std::vector<std::size_t> fifo_;
};

struct BinarySolution {
  Vector alpha;
  double rho = 0.0;
  std::size_t iterations = 0;
};

/// Dual C-SVC solved by SMO with second-order working-set selection.
BinarySolution solve_binary(KernelRows& K, const std::vector<int>& y, double C, double tol, std::size_t max_iter) {
  const std::size_t n = y.size();
  constexpr double kTau = 1e-12;
  BinarySolution sol;
  Vector& alpha = sol.alpha;
  alpha.assign(n, 0.0);
  Vector G(n, -1.0);
  auto upper = [&](std::size_t t) { return alpha[t] >= C; };
  auto lower = [&](std::size_t t) { return alpha[t] <= 0.0; };

  std::size_t iter = 0;
  for (; iter < max_iter; ++iter) {
    double gmax = -std::numeric_limits<double>::infinity();
    std::ptrdiff_t i = -1;
    for (std::size_t t = 0; t < n; ++t) {
      if (y[t] == +1) {
        if (!upper(t) && -G[t] >= gmax) {
          gmax = -G[t];
          i = static_cast<std::ptrdiff_t>(t);
        }
      } else if (!lower(t) && G[t] >= gmax) {
        gmax = G[t];
        i = static_cast<std::ptrdiff_t>(t);
      }
    }
    if (i < 0) break;
    const std::size_t ii = static_cast<std::size_t>(i);
    const double* Ki = K.row(ii);
    double gmax2 = -std::numeric_limits<double>::infinity();
    std::ptrdiff_t j = -1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
      const double qit = static_cast<double>(y[ii] * y[t]) * Ki[t];
      if (y[t] == +1) {
        if (!lower(t)) {
          const double diff = gmax + G[t];
          gmax2 = std::max(gmax2, G[t]);
          if (diff > 0.0) {
            double quad = 2.0 - 2.0 * y[ii] * qit;
            if (quad <= 0.0) quad = kTau;
            const double obj = -(diff * diff) / quad;
            if (obj <= best) {
              best = obj;
              j = static_cast<std::ptrdiff_t>(t);
            }
          }
        }
      } else if (!upper(t)) {
        const double diff = gmax - G[t];
        gmax2 = std::max(gmax2, -G[t]);
        if (diff > 0.0) {
          double quad = 2.0 + 2.0 * y[ii] * qit;
          if (quad <= 0.0) quad = kTau;
          const double obj = -(diff * diff) / quad;
          if (obj <= best) {
            best = obj;
            j = static_cast<std::ptrdiff_t>(t);
          }
        }
      }
    }
    if (gmax + gmax2 < tol || j < 0) break;
    const std::size_t jj = static_cast<std::size_t>(j);
    const double* Kj = K.row(jj);
    Ki = K.row(ii);
    const double qij = static_cast<double>(y[ii] * y[jj]) * Ki[jj];
    const double old_i = alpha[ii], old_j = alpha[jj];

    if (y[ii] != y[jj]) {
      double quad = 2.0 + 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (-G[ii] - G[jj]) / quad;
      const double diff = alpha[ii] - alpha[jj];
      alpha[ii] += delta;
      alpha[jj] += delta;
      if (diff > 0.0) {
        if (alpha[jj] < 0.0) {
          alpha[jj] = 0.0;
          alpha[ii] = diff;
        }
      } else if (alpha[ii] < 0.0) {
        alpha[ii] = 0.0;
        alpha[jj] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[ii] > C) {
          alpha[ii] = C;
          alpha[jj] = C - diff;
        }
      } else if (alpha[jj] > C) {
        alpha[jj] = C;
        alpha[ii] = C + diff;
      }
    } else {
      double quad = 2.0 - 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (G[ii] - G[jj]) / quad;
      const double sum = alpha[ii] + alpha[jj];
      alpha[ii] -= delta;
      alpha[jj] += delta;
      if (sum > C) {
        if (alpha[ii] > C) {
          alpha[ii] = C;
          alpha[jj] = sum - C;
        }
      } else if (alpha[jj] < 0.0) {
        alpha[jj] = 0.0;
        alpha[ii] = sum;
      }
      if (sum > C) {
        if (alpha[jj] > C) {
          alpha[jj] = C;
          alpha[ii] = sum - C;
        }
      } else if (alpha[ii] < 0.0) {
        alpha[ii] = 0.0;
        alpha[jj] = sum;
      }
    }

    const double di = alpha[ii] - old_i, dj = alpha[jj] - old_j;
    for (std::size_t t = 0; t < n; ++t) {
      G[t] += static_cast<double>(y[ii] * y[t]) * Ki[t] * di + static_cast<double>(y[jj] * y[t]) * Kj[t] * dj;
    }
  }
  sol.iterations = iter;

  double ub = std::numeric_limits<double>::infinity(), lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  std::size_t free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * G[t];
    if (upper(t)) {
      if (y[t] == -1) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (lower(t)) {
      if (y[t] == +1) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      ++free;
      sum_free += yg;
    }
  }
  sol.rho = free > 0 ? sum_free / static_cast<double>(free) : (ub + lb) / 2.0;
  return sol;
}

}  // namespace

TrainedClassifier svm_fit(const Samples& X_in, const Labels& y_in, const SvmConfig& cfg) {
  check_training_set(X_in, y_in);
  if (!(cfg.C > 0.0)) throw Error(ErrorCode::InvalidArgument, "SVM C must be positive");
  const auto order = canonical_order(X_in, y_in);
  Samples X;
  Labels y;
  for (std::size_t i : order) {
    X.push_back(X_in[i]);
    y.push_back(y_in[i]);
  }

  TrainedClassifier model;
  model.kind = ClassifierKind::Svm;
  model.classes = distinct_classes(y);
  model.feature_dim = X.front().size();
  if (model.classes.size() < 2) throw Error(ErrorCode::InvalidArgument, "SVM needs at least two classes");

  SvmParams p;
  p.C = cfg.C;
  p.gamma = cfg.gamma ? *cfg.gamma : auto_gamma(X);
  if (!(p.gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "SVM gamma must be positive");
  KernelRows K(X, p.gamma);
  for (int cls : model.classes) {
    std::vector<int> sign(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) sign[i] = y[i] == cls ? +1 : -1;
    BinarySolution sol = solve_binary(K, sign, cfg.C, cfg.tol, cfg.max_iterations);
    SvmBinary machine;
    machine.rho = sol.rho;
    machine.iterations = sol.iterations;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (sol.alpha[i] > 0.0) {
        machine.support.push_back(X[i]);
        machine.alpha.push_back(sol.alpha[i]);
        machine.sign.push_back(sign[i]);
      }
    }
    p.machines.push_back(std::move(machine));
  }
  model.params = std::move(p);
  return model;
}

double svm_decision(const SvmParams& params, std::size_t m, const Vector& x) {
  const SvmBinary& machine = params.machines.at(m);
  double acc = 0.0;
  for (std::size_t i = 0; i < machine.support.size(); ++i) {
    acc += machine.alpha[i] * machine.sign[i] * std::exp(-params.gamma * squared_distance(machine.support[i], x));
  }
  return acc - machine.rho;
}

Prediction predict(const TrainedClassifier& model, const Samples& X) {
  Prediction out;
  out.labels.reserve(X.size());
  out.scores.reserve(X.size());
  const std::size_t k = model.classes.size();
  for (const auto& x : X) {
    if (x.size() != model.feature_dim) {
      throw Error(ErrorCode::DimensionMismatch,
                  "expected " + std::to_string(model.feature_dim) + " features, got " + std::to_string(x.size()));
    }
    Vector scores(k, 0.0);
    switch (model.kind) {
      case ClassifierKind::LogReg: {
        const auto& p = std::get<LogRegParams>(model.params);
        for (std::size_t c = 0; c < k; ++c) scores[c] = p.bias[c] + std::inner_product(x.begin(), x.end(), p.weights[c].begin(), 0.0);
        softmax_inplace(scores);
        break;
      }
      case ClassifierKind::Knn: {
        const auto& p = std::get<KnnParams>(model.params);
        std::vector<std::pair<double, std::size_t>> dist(p.points.size());
        for (std::size_t i = 0; i < p.points.size(); ++i) dist[i] = {squared_distance(p.points[i], x), i};
        const std::size_t kk = std::min(p.k, dist.size());
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(kk), dist.end());
        for (std::size_t t = 0; t < kk; ++t) scores[class_slot(model.classes, p.labels[dist[t].second])] += 1.0 / static_cast<double>(kk);
        break;
      }
      case ClassifierKind::Mlp: {
        const auto& p = std::get<MlpParams>(model.params);
        const std::size_t h = p.hidden;
        Vector act = p.b1;
        for (std::size_t j = 0; j < x.size(); ++j)
          for (std::size_t u = 0; u < h; ++u) act[u] += x[j] * p.w1[j * h + u];
        for (std::size_t c = 0; c < k; ++c) scores[c] = p.b2[c];
        for (std::size_t u = 0; u < h; ++u) {
          const double a = std::max(act[u], 0.0);
          for (std::size_t c = 0; c < k; ++c) scores[c] += a * p.w2[u * k + c];
        }
        softmax_inplace(scores);
        break;
      }
      case ClassifierKind::Svm: {
        const auto& p = std::get<SvmParams>(model.params);
        for (std::size_t c = 0; c < k; ++c) scores[c] = svm_decision(p, c, x);
        break;
      }
    }
    out.labels.push_back(argmax_label(scores, model.classes));
    out.scores.push_back(std::move(scores));
  }
  return out;
}

std::size_t parameter_count(const TrainedClassifier& model) {
  switch (model.kind) {
    case ClassifierKind::LogReg: {
      const auto& p = std::get<LogRegParams>(model.params);
      return p.weights.size() * model.feature_dim + p.bias.size();
    }
    case ClassifierKind::Knn: {
      const auto& p = std::get<KnnParams>(model.params);
      return p.points.size() * model.feature_dim;
    }
    case ClassifierKind::Mlp: {
      const auto& p = std::get<MlpParams>(model.params);
      return p.w1.size() + p.b1.size() + p.w2.size() + p.b2.size();
    }
    case ClassifierKind::Svm: {
      std::size_t total = 0;
      for (const auto& m : std::get<SvmParams>(model.params).machines) total += m.support.size() * (model.feature_dim + 1) + 1;
      return total;
    }
  }
  return 0;
}

}  // namespace fpbench
