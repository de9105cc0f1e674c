#include "fpbench/features.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

#include "fpbench/error.hpp"
#include "fpbench/rng.hpp"

namespace fpbench {

void GaborParams::validate() const {
  if (ksize < 3 || ksize % 2 == 0) throw Error(ErrorCode::InvalidArgument, "Gabor ksize must be odd and >= 3");
  if (!(sigma > 0.0) || !(lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "Gabor sigma and lambda must be positive");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw Error(ErrorCode::InvalidArgument, "Gabor gamma must lie in (0,1]");
}

GaborBank GaborBank::standard(int ksize) {
  GaborBank bank;
  const std::array<std::pair<double, double>, 2> scales = {{{2.0, 4.0}, {4.0, 8.0}}};
  for (const auto& [sigma, lambda] : scales) {
    for (int o = 0; o < 4; ++o) {
      GaborParams p;
      p.theta = o * std::numbers::pi / 4.0;
      p.sigma = sigma;
      p.lambda = lambda;
      p.ksize = ksize;
      bank.kernels.push_back(p);
    }
  }
  return bank;
}

GaborBank GaborBank::for_input_size(int size) { return standard(size <= 16 ? 7 : 9); }

Kernel2D gabor_kernel_raw(const GaborParams& p) {
  p.validate();
  Kernel2D k;
  k.size = p.ksize;
  k.values.resize(static_cast<std::size_t>(p.ksize) * p.ksize);
  const int half = p.ksize / 2;
  const double c = std::cos(p.theta), s = std::sin(p.theta);
  for (int y = -half; y <= half; ++y) {
    for (int x = -half; x <= half; ++x) {
      const double xr = x * c + y * s;
      const double yr = -x * s + y * c;
      const double envelope = std::exp(-(xr * xr + p.gamma * p.gamma * yr * yr) / (2.0 * p.sigma * p.sigma));
      k.values[static_cast<std::size_t>(y + half) * p.ksize + (x + half)] =
          envelope * std::cos(2.0 * std::numbers::pi * xr / p.lambda + p.psi);
    }
  }
  return k;
}

Kernel2D gabor_kernel(const GaborParams& p) {
  Kernel2D k = gabor_kernel_raw(p);
  const double mean = std::accumulate(k.values.begin(), k.values.end(), 0.0) / static_cast<double>(k.values.size());
  for (double& v : k.values) v -= mean;
  return k;
}

namespace {

// reflect-101: -1 -> 1, n -> n-2
int reflect101(int i, int n) {
  if (n == 1) return 0;
  while (i < 0 || i >= n) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * n - 2 - i;
  }
  return i;
}

}  // namespace

GrayImage correlate(const GrayImage& img, const Kernel2D& kernel) {
  if (kernel.size > img.width || kernel.size > img.height) {
    throw Error(ErrorCode::KernelLargerThanImage, std::to_string(kernel.size) + "px kernel on " +
                                                      std::to_string(img.width) + "x" + std::to_string(img.height));
  }
  const int half = kernel.size / 2;
  GrayImage out(img.width, img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double acc = 0.0;
      for (int ky = 0; ky < kernel.size; ++ky) {
        const int sy = reflect101(y + ky - half, img.height);
        for (int kx = 0; kx < kernel.size; ++kx) {
          acc += kernel.at(kx, ky) * img.at(reflect101(x + kx - half, img.width), sy);
        }
      }
      out.at(x, y) = acc;
    }
  }
  return out;
}

std::vector<GrayImage> apply_gabor_bank(const GrayImage& img, const GaborBank& bank) {
  std::vector<GrayImage> maps;
  maps.reserve(bank.kernels.size());
  for (const auto& p : bank.kernels) maps.push_back(correlate(img, gabor_kernel(p)));
  return maps;
}

FeatureVector gabor_features(const GrayImage& img, const GaborBank& bank) {
  FeatureVector fv;
  fv.descriptor_id = kGaborDescriptor;
  fv.values.reserve(bank.kernels.size() * 18);
  for (const GrayImage& map : apply_gabor_bank(img, bank)) {
    const double n = static_cast<double>(map.size());
    const double mean = std::accumulate(map.pixels.begin(), map.pixels.end(), 0.0) / n;
    double var = 0.0;
    for (double v : map.pixels) var += (v - mean) * (v - mean);
    fv.values.push_back(mean);
    fv.values.push_back(std::sqrt(var / n));
    for (int by = 0; by < 4; ++by) {
      const int y0 = by * map.height / 4, y1 = (by + 1) * map.height / 4;
      for (int bx = 0; bx < 4; ++bx) {
        const int x0 = bx * map.width / 4, x1 = (bx + 1) * map.width / 4;
        double acc = 0.0;
        for (int y = y0; y < y1; ++y)
          for (int x = x0; x < x1; ++x) acc += std::abs(map.at(x, y));
        const int count = (y1 - y0) * (x1 - x0);
        fv.values.push_back(count > 0 ? acc / count : 0.0);
      }
    }
  }
  return fv;
}

FeatureVector hog_features(const GrayImage& img, const HogParams& params) {
  if (img.width < 2 * params.cell || img.height < 2 * params.cell) {
    throw Error(ErrorCode::ImageTooSmall, "HOG needs at least " + std::to_string(2 * params.cell) + "x" +
                                              std::to_string(2 * params.cell) + " pixels");
  }
  const int cells_x = img.width / params.cell;
  const int cells_y = img.height / params.cell;
  const int bins = params.bins;
  const double bin_width = 180.0 / bins;
  std::vector<double> hist(static_cast<std::size_t>(cells_x) * cells_y * bins, 0.0);

  for (int y = 0; y < cells_y * params.cell; ++y) {
    for (int x = 0; x < cells_x * params.cell; ++x) {
      // border pixels get a zero gradient component
      const double gx = (x > 0 && x < img.width - 1) ? img.at(x + 1, y) - img.at(x - 1, y) : 0.0;
      const double gy = (y > 0 && y < img.height - 1) ? img.at(x, y + 1) - img.at(x, y - 1) : 0.0;
      const double mag = std::hypot(gx, gy);
      if (mag == 0.0) continue;
      double angle = std::atan2(gy, gx) * 180.0 / std::numbers::pi;
      if (angle < 0.0) angle += 180.0;
      if (angle >= 180.0) angle -= 180.0;
      // bin b is centred on b * bin_width
      const double pos = angle / bin_width;
      const int b0 = static_cast<int>(std::floor(pos)) % bins;
      const int b1 = (b0 + 1) % bins;
      const double w1 = pos - std::floor(pos);
      double* cell = &hist[(static_cast<std::size_t>(y / params.cell) * cells_x + x / params.cell) * bins];
      cell[b0] += mag * (1.0 - w1);
      if (w1 > 0.0) cell[b1] += mag * w1;
    }
  }

  FeatureVector fv;
  fv.descriptor_id = kHogDescriptor;
  const int blocks_x = cells_x - params.block + 1;
  const int blocks_y = cells_y - params.block + 1;
  std::vector<double> block;
  for (int by = 0; by < blocks_y; ++by) {
    for (int bx = 0; bx < blocks_x; ++bx) {
      block.clear();
      for (int cy = by; cy < by + params.block; ++cy)
        for (int cx = bx; cx < bx + params.block; ++cx)
          for (int b = 0; b < bins; ++b) block.push_back(hist[(static_cast<std::size_t>(cy) * cells_x + cx) * bins + b]);
      auto l2_normalize = [&block] {
        double sq = 0.0;
        for (double v : block) sq += v * v;
        const double norm = std::sqrt(sq);
        for (double& v : block) v = norm > 0.0 ? v / norm : 0.0;
      };
      l2_normalize();
      for (double& v : block) v = std::min(v, params.clip);
      l2_normalize();
      fv.values.insert(fv.values.end(), block.begin(), block.end());
    }
  }
  return fv;
}

FeatureVector pixel_features(const GrayImage& img) { return {img.pixels, kPixelDescriptor}; }

Vector PcaModel::explained_variance_ratio() const {
  Vector r(explained_variance.size(), 0.0);
  if (total_variance > 0.0)
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = explained_variance[i] / total_variance;
  return r;
}

void symmetric_eigen(std::vector<double> a, std::size_t n, Vector& eigenvalues, Samples& eigenvectors) {
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  auto A = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };

  double scale = 0.0;
  for (double x : a) scale = std::max(scale, std::abs(x));
  for (int sweep = 0; sweep < 100 && scale > 0.0; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += A(i, j) * A(i, j);
    if (std::sqrt(off) <= 1e-15 * scale) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = A(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p], vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return A(i, i) > A(j, j); });
  eigenvalues.assign(n, 0.0);
  eigenvectors.assign(n, Vector(n, 0.0));
  for (std::size_t r = 0; r < n; ++r) {
    eigenvalues[r] = A(order[r], order[r]);
    for (std::size_t k = 0; k < n; ++k) eigenvectors[r][k] = v[k * n + order[r]];
  }
}

PcaModel pca_fit(const Samples& X, double variance_target, std::size_t max_components) {
  if (X.size() < 2) throw Error(ErrorCode::InvalidArgument, "PCA needs at least 2 samples");
  if (!(variance_target > 0.0 && variance_target <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "variance_target must lie in (0,1]");
  }
  const std::size_t d = X.front().size();
  for (const auto& x : X)
    if (x.size() != d) throw Error(ErrorCode::DimensionMismatch, "PCA samples differ in length");

  PcaModel model;
  model.mean.assign(d, 0.0);
  for (const auto& x : X)
    for (std::size_t j = 0; j < d; ++j) model.mean[j] += x[j];
  for (double& m : model.mean) m /= static_cast<double>(X.size());

  std::vector<double> cov(d * d, 0.0);
  Vector centered(d);
  for (const auto& x : X) {
    for (std::size_t j = 0; j < d; ++j) centered[j] = x[j] - model.mean[j];
    for (std::size_t i = 0; i < d; ++i) {
      const double ci = centered[i];
      if (ci == 0.0) continue;
      double* row = &cov[i * d];
      for (std::size_t j = i; j < d; ++j) row[j] += ci * centered[j];
    }
  }
  const double denom = static_cast<double>(X.size() - 1);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      cov[i * d + j] /= denom;
      cov[j * d + i] = cov[i * d + j];
    }
  }

  for (std::size_t i = 0; i < d; ++i) model.total_variance += cov[i * d + i];
  if (!(model.total_variance > 0.0)) return model;

  Vector values;
  Samples vectors;
  symmetric_eigen(std::move(cov), d, values, vectors);
  for (double& v : values) v = std::max(v, 0.0);

  std::size_t keep = 0;
  double cumulative = 0.0;
  const double eigen_total = std::accumulate(values.begin(), values.end(), 0.0);
  while (keep < d && keep < max_components) {
    cumulative += values[keep];
    ++keep;
    if (cumulative / eigen_total >= variance_target - 1e-12) break;
  }

  for (std::size_t r = 0; r < keep; ++r) {
    Vector comp = vectors[r];
    std::size_t arg = 0;
    for (std::size_t k = 1; k < d; ++k)
      if (std::abs(comp[k]) > std::abs(comp[arg])) arg = k;
    if (comp[arg] < 0.0)
      for (double& c : comp) c = -c;
    model.components.push_back(std::move(comp));
    model.explained_variance.push_back(values[r]);
  }
  return model;
}

Vector pca_transform(const PcaModel& model, const Vector& x) {
  if (x.size() != model.dimension()) {
    throw Error(ErrorCode::DimensionMismatch,
                "expected " + std::to_string(model.dimension()) + " features, got " + std::to_string(x.size()));
  }
  Vector out(model.retained(), 0.0);
  for (std::size_t r = 0; r < model.retained(); ++r) {
    double acc = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) acc += (x[j] - model.mean[j]) * model.components[r][j];
    out[r] = acc;
  }
  return out;
}

Samples pca_transform(const PcaModel& model, const Samples& X) {
  Samples out;
  out.reserve(X.size());
  for (const auto& x : X) out.push_back(pca_transform(model, x));
  return out;
}

namespace {

double squared_distance(const Vector& a, const Vector& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
  return acc;
}

}  // namespace

SmoteResult smote_resample(const Samples& X, const Labels& y, std::size_t k, std::uint64_t seed) {
  if (X.size() != y.size()) throw Error(ErrorCode::LengthMismatch, "SMOTE samples and labels differ in length");
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "SMOTE k must be positive");
  SmoteResult result{X, y, {}};
  if (X.empty()) return result;

  int max_label = *std::max_element(y.begin(), y.end());
  std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(max_label) + 1);
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] < 0) throw Error(ErrorCode::LabelOutOfRange, "negative label");
    members[static_cast<std::size_t>(y[i])].push_back(i);
  }
  std::size_t majority = 0;
  for (const auto& m : members) majority = std::max(majority, m.size());

  Rng rng(derive_seed(seed, {0x736d6f7465ULL}));
  for (std::size_t c = 0; c < members.size(); ++c) {
    const auto& idx = members[c];
    if (idx.empty() || idx.size() == majority) continue;
    if (idx.size() < 2) {
      throw Error(ErrorCode::ClassTooSmall, "class " + std::to_string(c) + " has a single sample");
    }
    const std::size_t kk = std::min(k, idx.size() - 1);

    // k nearest same-class neighbours per member; distance ties resolved by index
    std::vector<std::vector<std::size_t>> neighbors(idx.size());
    std::vector<std::pair<double, std::size_t>> dist;
    for (std::size_t a = 0; a < idx.size(); ++a) {
      dist.clear();
      for (std::size_t b = 0; b < idx.size(); ++b)
        if (b != a) dist.emplace_back(squared_distance(X[idx[a]], X[idx[b]]), idx[b]);
      std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(kk), dist.end());
      for (std::size_t t = 0; t < kk; ++t) neighbors[a].push_back(dist[t].second);
    }

    for (std::size_t made = idx.size(); made < majority; ++made) {
      const std::size_t a = rng.index(idx.size());
      const std::size_t b = neighbors[a][rng.index(kk)];
      const double lambda = rng.uniform();
      const Vector& pa = X[idx[a]];
      const Vector& pb = X[b];
      Vector s(pa.size());
      for (std::size_t j = 0; j < s.size(); ++j) s[j] = pa[j] + lambda * (pb[j] - pa[j]);
      result.X.push_back(std::move(s));
      result.y.push_back(static_cast<int>(c));
      result.origins.push_back({idx[a], b, lambda});
    }
  }
  return result;
}

}  // namespace fpbench
