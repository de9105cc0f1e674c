#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "fpbench/features.hpp"
#include "fpbench/rng.hpp"
#include "test_util.hpp"

using namespace fpbench;
using fpbench::testing::error_code_of;

namespace {

constexpr double kPi = std::numbers::pi;

GrayImage random_image(Rng& rng, int w, int h) {
  GrayImage img(w, h);
  for (double& v : img.pixels) v = rng.uniform();
  return img;
}

int reflect101(int i, int n) {
  if (n == 1) return 0;
  while (i < 0 || i >= n) i = i < 0 ? -i : 2 * n - 2 - i;
  return i;
}

GrayImage correlate_reference(const GrayImage& img, const Kernel2D& k) {
  GrayImage out(img.width, img.height);
  const int r = k.size / 2;
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      double acc = 0.0;
      for (int ky = 0; ky < k.size; ++ky)
        for (int kx = 0; kx < k.size; ++kx)
          acc += k.at(kx, ky) * img.at(reflect101(x + kx - r, img.width), reflect101(y + ky - r, img.height));
      out.at(x, y) = acc;
    }
  return out;
}

double mean_abs(const GrayImage& img) {
  double s = 0.0;
  for (double v : img.pixels) s += std::abs(v);
  return s / double(img.size());
}

double squared_distance(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

Samples covariance(const Samples& X) {
  const std::size_t n = X.size(), d = X[0].size();
  Vector mean(d, 0.0);
  for (const auto& x : X)
    for (std::size_t j = 0; j < d; ++j) mean[j] += x[j] / double(n);
  Samples c(d, Vector(d, 0.0));
  for (const auto& x : X)
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) c[a][b] += (x[a] - mean[a]) * (x[b] - mean[b]) / double(n - 1);
  return c;
}

}  // namespace

TEST_CASE("gabor kernel shape and symmetry") {
  for (double theta : {0.0, kPi / 4, kPi / 2, 3 * kPi / 4, 1.1}) {
    GaborParams p;
    p.theta = theta;
    const Kernel2D raw = gabor_kernel_raw(p);
    CHECK(raw.size == 9);
    CHECK(raw.at(4, 4) == doctest::Approx(1.0).epsilon(1e-15));

    GaborParams q = p;
    q.theta = theta + kPi;
    const Kernel2D a = gabor_kernel(p), b = gabor_kernel(q);
    for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(std::abs(a.values[i] - b.values[i]) < 1e-12);
    const double mean = std::accumulate(a.values.begin(), a.values.end(), 0.0) / double(a.values.size());
    CHECK(std::abs(mean) < 1e-12);
  }
  GaborParams bad;
  bad.ksize = 4;
  CHECK(error_code_of([&] { bad.validate(); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("standard bank order") {
  const GaborBank bank = GaborBank::standard(9);
  REQUIRE(bank.kernels.size() == 8);
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(bank.kernels[i].sigma == (i < 4 ? 2.0 : 4.0));
    CHECK(bank.kernels[i].lambda == (i < 4 ? 4.0 : 8.0));
    CHECK(bank.kernels[i].theta == doctest::Approx(double(i % 4) * kPi / 4));
  }
  CHECK(GaborBank::for_input_size(16).kernels[0].ksize == 7);
  CHECK(GaborBank::for_input_size(32).kernels[0].ksize == 9);
}

TEST_CASE("theta=0 prefers vertical ridges") {
  GrayImage img(8, 8);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) img.at(x, y) = 0.5 + 0.5 * std::cos(2 * kPi * x / 4.0);
  GaborParams p;
  p.ksize = 7;
  const GrayImage r0 = correlate_reference(img, gabor_kernel(p));
  p.theta = kPi / 2;
  const GrayImage r90 = correlate_reference(img, gabor_kernel(p));
  CHECK(mean_abs(r0) > mean_abs(r90));
  // same ordering through the library path
  GaborBank bank;
  bank.kernels = {GaborParams{0.0, 2.0, 4.0, 0.5, 0.0, 7}, GaborParams{kPi / 2, 2.0, 4.0, 0.5, 0.0, 7}};
  const auto maps = apply_gabor_bank(img, bank);
  CHECK(mean_abs(maps[0]) > mean_abs(maps[1]));
}

TEST_CASE("correlate matches the nested-loop reference") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int w = 3 + static_cast<int>(rng.index(8)), h = 3 + static_cast<int>(rng.index(8));
    const GrayImage img = random_image(rng, w, h);
    Kernel2D k;
    k.size = 3;
    k.values.resize(9);
    for (double& v : k.values) v = rng.uniform(-1, 1);
    const GrayImage a = correlate(img, k), b = correlate_reference(img, k);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a.pixels[i] - b.pixels[i]) < 1e-12);
  }
  Rng rng2(6);
  const GrayImage five = random_image(rng2, 5, 5);
  GaborParams p;
  p.ksize = 5;
  const GrayImage a = correlate(five, gabor_kernel(p)), b = correlate_reference(five, gabor_kernel(p));
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a.pixels[i] - b.pixels[i]) < 1e-12);
  CHECK(error_code_of([&] { correlate(five, gabor_kernel(GaborParams{})); }) == ErrorCode::KernelLargerThanImage);
}

TEST_CASE("bank responses: constant images, shapes, linearity") {
  const GaborBank bank = GaborBank::for_input_size(16);
  const auto zero_maps = apply_gabor_bank(GrayImage(16, 16, 0.7), bank);
  REQUIRE(zero_maps.size() == 8);
  for (const auto& m : zero_maps) {
    CHECK(m.width == 16);
    CHECK(m.height == 16);
    for (double v : m.pixels) CHECK(std::abs(v) < 1e-12);
  }
  Rng rng(8);
  const GrayImage img = random_image(rng, 16, 16);
  GrayImage scaled = img;
  for (double& v : scaled.pixels) v *= 0.37;
  const auto a = apply_gabor_bank(img, bank), b = apply_gabor_bank(scaled, bank);
  for (std::size_t k = 0; k < a.size(); ++k)
    for (std::size_t i = 0; i < a[k].size(); ++i) CHECK(std::abs(0.37 * a[k].pixels[i] - b[k].pixels[i]) < 1e-12);
}

TEST_CASE("gabor-v1 features") {
  const GaborBank bank = GaborBank::standard(9);
  const FeatureVector flat = gabor_features(GrayImage(32, 32, 0.3), bank);
  CHECK(flat.descriptor_id == "gabor-v1");
  REQUIRE(flat.values.size() == 144);
  for (double v : flat.values) CHECK(std::abs(v) < 1e-12);

  Rng rng(9);
  const GrayImage img = random_image(rng, 32, 32);
  const FeatureVector fv = gabor_features(img, bank);
  REQUIRE(fv.values.size() == 144);
  for (std::size_t k = 0; k < 8; ++k) {
    const GrayImage map = correlate_reference(img, gabor_kernel(bank.kernels[k]));
    double sum = 0.0;
    for (double v : map.pixels) sum += v;
    const double mean = sum / 1024.0;
    double var = 0.0;
    for (double v : map.pixels) var += (v - mean) * (v - mean);
    CHECK(fv.values[k * 18] == doctest::Approx(mean).epsilon(1e-10));
    CHECK(fv.values[k * 18 + 1] == doctest::Approx(std::sqrt(var / 1024.0)).epsilon(1e-10));
    // top-left 8x8 block
    double block = 0.0;
    for (int y = 0; y < 8; ++y)
      for (int x = 0; x < 8; ++x) block += std::abs(map.at(x, y));
    CHECK(fv.values[k * 18 + 2] == doctest::Approx(block / 64.0).epsilon(1e-10));
  }
}

TEST_CASE("hog-v1: length, constants, offsets") {
  const FeatureVector flat = hog_features(GrayImage(32, 32, 0.4));
  CHECK(flat.descriptor_id == "hog-v1");
  REQUIRE(flat.values.size() == 324);
  for (double v : flat.values) CHECK(v == 0.0);

  Rng rng(12);
  const GrayImage img = random_image(rng, 32, 32);
  GrayImage shifted = img;
  for (double& v : shifted.pixels) v += 0.25;
  const auto a = hog_features(img).values, b = hog_features(shifted).values;
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-12);
  for (double v : a) CHECK(std::isfinite(v));

  CHECK(error_code_of([] { hog_features(GrayImage(15, 32)); }) == ErrorCode::ImageTooSmall);
  CHECK(hog_features(GrayImage(16, 16)).values.size() == 36);
}

TEST_CASE("hog-v1: vertical step edge puts all mass in the 0 degree bin") {
  GrayImage img(32, 32, 0.0);
  for (int y = 0; y < 32; ++y)
    for (int x = 16; x < 32; ++x) img.at(x, y) = 1.0;
  const auto v = hog_features(img).values;
  double total = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i % 9 != 0) CHECK(v[i] == 0.0);
    total += v[i];
  }
  CHECK(total > 0.0);
  // the cells touching the edge (columns 1 and 2) carry it; block (bx=0) sees cell column 1 only
  for (int by = 0; by < 3; ++by)
    for (int bx = 0; bx < 3; ++bx) {
      const std::size_t base = static_cast<std::size_t>(by * 3 + bx) * 36;
      double block = 0.0;
      for (std::size_t j = 0; j < 36; ++j) block += v[base + j];
      CHECK(block > 0.0);
    }
}

TEST_CASE("hog-v1: 45 degree gradients split between the 40 and 60 degree bins") {
  GrayImage img(16, 16);
  for (int y = 0; y < 16; ++y)
    for (int x = 0; x < 16; ++x) img.at(x, y) = 0.01 * (x + y);
  const auto v = hog_features(img).values;
  // image borders see a one-sided gradient: 0 degrees on top/bottom rows, 90 on the sides
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::size_t bin = i % 9;
    if (bin == 1 || bin >= 6) CHECK(v[i] == 0.0);
  }
  for (std::size_t cell = 0; cell < 4; ++cell) CHECK(v[cell * 9 + 2] >= v[cell * 9 + 3]);
}

TEST_CASE("pca on collinear and tiny data") {
  const PcaModel line = pca_fit({{0, 0}, {1, 1}, {2, 2}, {-1, -1}}, 0.95, 64);
  REQUIRE(line.retained() == 1);
  CHECK(line.components[0][0] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK(line.components[0][1] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK(line.explained_variance_ratio()[0] == doctest::Approx(1.0).epsilon(1e-12));

  const PcaModel three = pca_fit({{0, 0}, {1, 1}, {2, 2}}, 1.0, 2);
  CHECK(three.explained_variance[0] == doctest::Approx(2.0).epsilon(1e-12));
  Vector values;
  Samples vectors;
  symmetric_eigen({1, 1, 1, 1}, 2, values, vectors);
  CHECK(values[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(values[1]) < 1e-12);

  const PcaModel degenerate = pca_fit({{1, 2, 3}, {1, 2, 3}}, 0.95, 64);
  CHECK(degenerate.retained() == 0);
  CHECK(error_code_of([&] { pca_transform(line, Vector{1, 2, 3}); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("pca properties on random data") {
  Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    Samples X(20, Vector(8));
    for (auto& x : X)
      for (std::size_t j = 0; j < 8; ++j) x[j] = rng.normal() * double(j + 1) + (j > 0 ? 0.5 * x[j - 1] : 0.0);
    const PcaModel m = pca_fit(X, 1.0, 8);
    REQUIRE(m.retained() >= 1);
    for (std::size_t a = 0; a < m.retained(); ++a) {
      for (std::size_t b = 0; b < m.retained(); ++b) {
        double dot = 0.0;
        for (std::size_t j = 0; j < 8; ++j) dot += m.components[a][j] * m.components[b][j];
        CHECK(std::abs(dot - (a == b ? 1.0 : 0.0)) < 1e-8);
      }
      const auto& c = m.components[a];
      const auto big = std::max_element(c.begin(), c.end(), [](double p, double q) { return std::abs(p) < std::abs(q); });
      CHECK(*big > 0.0);
      if (a > 0) CHECK(m.explained_variance[a] <= m.explained_variance[a - 1] + 1e-12);
    }
    double sum = 0.0;
    for (double v : m.explained_variance) sum += v;
    CHECK(sum <= m.total_variance + 1e-8);

    const Samples cov = covariance(pca_transform(m, X));
    for (std::size_t a = 0; a < cov.size(); ++a)
      for (std::size_t b = 0; b < cov.size(); ++b) {
        if (a != b) CHECK(std::abs(cov[a][b]) < 1e-8);
        else CHECK(cov[a][a] == doctest::Approx(m.explained_variance[a]).epsilon(1e-8));
      }
    for (double v : pca_transform(m, m.mean)) CHECK(std::abs(v) < 1e-12);
  }
}

TEST_CASE("pca reconstruction error shrinks with more components") {
  Rng rng(22);
  Samples X(30, Vector(6));
  for (auto& x : X)
    for (double& v : x) v = rng.normal();
  double previous = 1e300;
  for (std::size_t keep = 1; keep <= 6; ++keep) {
    const PcaModel m = pca_fit(X, 1.0, keep);
    CHECK(m.retained() == keep);
    CHECK(pca_transform(m, X[0]).size() == keep);
    double err = 0.0;
    for (const auto& x : X) {
      const Vector z = pca_transform(m, x);
      Vector r = m.mean;
      for (std::size_t c = 0; c < keep; ++c)
        for (std::size_t j = 0; j < 6; ++j) r[j] += z[c] * m.components[c][j];
      err += squared_distance(r, x);
    }
    CHECK(err <= previous + 1e-9);
    previous = err;
  }
  CHECK(previous < 1e-18 * 30 + 1e-12);
}

TEST_CASE("smote: balanced input is unchanged") {
  const Samples X = {{0, 0}, {1, 0}, {5, 5}, {6, 5}};
  const Labels y = {0, 0, 1, 1};
  const SmoteResult r = smote_resample(X, y, 5, 1);
  CHECK(r.X == X);
  CHECK(r.y == y);
  CHECK(r.origins.empty());
}

TEST_CASE("smote: synthetic samples follow s = a + lambda (b - a)") {
  const Samples X = {{0, 0}, {1, 0}, {5, 5}, {6, 5}, {5, 6}, {6, 6}};
  const Labels y = {0, 0, 1, 1, 1, 1};
  const SmoteResult r = smote_resample(X, y, 1, 3);
  REQUIRE(r.X.size() == 8);
  REQUIRE(r.origins.size() == 2);
  for (std::size_t s = 0; s < 2; ++s) {
    const auto& o = r.origins[s];
    CHECK(r.y[6 + s] == 0);
    CHECK(o.parent != o.neighbor);
    CHECK(o.parent < 2);
    CHECK(o.neighbor < 2);
    CHECK(o.lambda >= 0.0);
    CHECK(o.lambda < 1.0);
    for (std::size_t j = 0; j < 2; ++j) {
      const double expected = X[o.parent][j] + o.lambda * (X[o.neighbor][j] - X[o.parent][j]);
      CHECK(r.X[6 + s][j] == doctest::Approx(expected).epsilon(1e-15));
    }
  }
  CHECK(error_code_of([] { smote_resample({{0.0}, {1.0}, {2.0}}, {0, 0, 1}, 5, 1); }) == ErrorCode::ClassTooSmall);
}

TEST_CASE("smote: counts equalize and synthetics lie on k-NN segments") {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 1 + rng.index(5);
    const std::size_t k = 1 + rng.index(6);
    Samples X;
    Labels y;
    std::array<std::size_t, 4> counts{};
    for (int c = 0; c < 4; ++c) {
      counts[c] = 2 + rng.index(25);
      for (std::size_t i = 0; i < counts[c]; ++i) {
        Vector x(d);
        for (double& v : x) v = rng.normal(double(c), 1.0);
        X.push_back(x);
        y.push_back(c);
      }
    }
    const SmoteResult r = smote_resample(X, y, k, rng.next_u64());
    const std::size_t majority = *std::max_element(counts.begin(), counts.end());
    std::array<std::size_t, 4> after{};
    for (int label : r.y) ++after[label];
    for (int c = 0; c < 4; ++c) CHECK(after[c] == majority);
    REQUIRE(r.origins.size() == r.X.size() - X.size());

    for (std::size_t s = 0; s < r.origins.size(); ++s) {
      const auto& o = r.origins[s];
      const int label = y[o.parent];
      CHECK(r.y[X.size() + s] == label);
      CHECK(y[o.neighbor] == label);
      // brute-force k nearest same-class neighbours of the parent, ties by index
      std::vector<std::pair<double, std::size_t>> dist;
      for (std::size_t i = 0; i < X.size(); ++i)
        if (i != o.parent && y[i] == label) dist.emplace_back(squared_distance(X[i], X[o.parent]), i);
      std::sort(dist.begin(), dist.end());
      const std::size_t kk = std::min(k, dist.size());
      bool is_neighbor = false;
      for (std::size_t i = 0; i < kk; ++i) is_neighbor |= dist[i].second == o.neighbor;
      CHECK(is_neighbor);
      // residual from the segment parent..neighbour
      const Vector& a = X[o.parent];
      const Vector& b = X[o.neighbor];
      const Vector& p = r.X[X.size() + s];
      double ab = 0.0, ap = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        ab += (b[j] - a[j]) * (b[j] - a[j]);
        ap += (p[j] - a[j]) * (b[j] - a[j]);
      }
      const double t = ab > 0 ? std::clamp(ap / ab, 0.0, 1.0) : 0.0;
      double residual = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double q = a[j] + t * (b[j] - a[j]);
        residual += (p[j] - q) * (p[j] - q);
      }
      CHECK(std::sqrt(residual) < 1e-9);
    }
  }
}
