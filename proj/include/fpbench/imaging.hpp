#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace fpbench {

/// Decoded 8-bit raster, interleaved channels.
struct RawImage {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<std::uint8_t> bytes;
};

/// Row-major grayscale raster. Values are in [0,255] straight out of to_gray and
/// in [0,1] after normalize.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<double> pixels;

  GrayImage() = default;
  GrayImage(int w, int h, double fill = 0.0);

  double& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
  double at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
  std::size_t size() const { return pixels.size(); }
};

/// Luminance collapse (0.299, 0.587, 0.114) for 3-channel input, pass-through for 1.
GrayImage to_gray(const RawImage& raw);

/// Bilinear resampling with half-pixel-centred sample positions.
GrayImage resize(const GrayImage& img, int width, int height);

/// Divides by 255.
GrayImage normalize(const GrayImage& img);

/// Decodes BMP or PNG. Throws IoFailure when the file cannot be read or decoded.
RawImage decode_image(const std::filesystem::path& path);

/// Encodes an 8-bit grayscale raster; the format follows the extension.
void write_gray_image(const std::filesystem::path& path, const GrayImage& img, double scale = 1.0);

/// decode_image + to_gray + normalize + resize, the common preprocessing chain.
GrayImage load_normalized(const std::filesystem::path& path, int size);

}  // namespace fpbench
