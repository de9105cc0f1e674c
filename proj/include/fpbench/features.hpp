#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fpbench/imaging.hpp"
#include "fpbench/types.hpp"

namespace fpbench {

struct GaborParams {
  double theta = 0.0;   // radians
  double sigma = 2.0;   // envelope, pixels
  double lambda = 4.0;  // wavelength, pixels per cycle
  double gamma = 0.5;   // aspect ratio
  double psi = 0.0;     // phase, radians
  int ksize = 9;

  void validate() const;
};

/// Square kernel, row-major.
struct Kernel2D {
  int size = 0;
  std::vector<double> values;

  double at(int x, int y) const { return values[static_cast<std::size_t>(y) * size + x]; }
};

struct GaborBank {
  std::vector<GaborParams> kernels;

  /// 2 scales x 4 orientations, scale-major: (sigma, lambda) in {(2,4), (4,8)},
  /// theta in {0, pi/4, pi/2, 3pi/4}.
  static GaborBank standard(int ksize);
  /// ksize 9 for 32 px inputs, 7 for 16 px inputs.
  static GaborBank for_input_size(int size);
};

struct FeatureVector {
  std::vector<double> values;
  std::string descriptor_id;
};

inline constexpr const char* kGaborDescriptor = "gabor-v1";
inline constexpr const char* kHogDescriptor = "hog-v1";
inline constexpr const char* kPixelDescriptor = "pixels-v1";

/// Even/odd Gabor carrier under a Gaussian envelope, without mean correction.
Kernel2D gabor_kernel_raw(const GaborParams& p);
/// gabor_kernel_raw minus its mean, so flat regions give zero response.
Kernel2D gabor_kernel(const GaborParams& p);

/// "Same"-size correlation with reflect-101 borders.
GrayImage correlate(const GrayImage& img, const Kernel2D& kernel);

std::vector<GrayImage> apply_gabor_bank(const GrayImage& img, const GaborBank& bank);

/// Per response map: mean, standard deviation and 4x4 block means of |response|.
FeatureVector gabor_features(const GrayImage& img, const GaborBank& bank);

struct HogParams {
  int cell = 8;
  int bins = 9;
  int block = 2;
  double clip = 0.2;
};

FeatureVector hog_features(const GrayImage& img, const HogParams& params = {});

/// Flattened pixels.
FeatureVector pixel_features(const GrayImage& img);

struct PcaModel {
  Vector mean;
  Samples components;
  Vector explained_variance;
  double total_variance = 0.0;

  std::size_t dimension() const { return mean.size(); }
  std::size_t retained() const { return components.size(); }
  Vector explained_variance_ratio() const;
};

/// Symmetric eigendecomposition (cyclic Jacobi). Eigenvalues descending; eigenvectors
/// returned as rows.
void symmetric_eigen(std::vector<double> matrix, std::size_t n, Vector& eigenvalues, Samples& eigenvectors);

PcaModel pca_fit(const Samples& X, double variance_target = 0.95, std::size_t max_components = 64);
Vector pca_transform(const PcaModel& model, const Vector& x);
Samples pca_transform(const PcaModel& model, const Samples& X);

struct SmoteOrigin {
  std::size_t parent = 0;    // index into the input samples
  std::size_t neighbor = 0;  // index into the input samples
  double lambda = 0.0;
};

struct SmoteResult {
  Samples X;
  Labels y;
  /// One entry per appended synthetic sample, in order.
  std::vector<SmoteOrigin> origins;
};

SmoteResult smote_resample(const Samples& X, const Labels& y, std::size_t k, std::uint64_t seed);

}  // namespace fpbench
