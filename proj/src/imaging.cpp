#include "fpbench/imaging.hpp"

#include <algorithm>
#include <cmath>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "fpbench/error.hpp"

namespace fpbench {

GrayImage::GrayImage(int w, int h, double fill)
    : width(w), height(h), pixels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

GrayImage to_gray(const RawImage& raw) {
  if (raw.channels != 1 && raw.channels != 3) {
    throw Error(ErrorCode::UnsupportedChannelCount,
                "expected 1 or 3 channels, got " + std::to_string(raw.channels));
  }
  GrayImage out(raw.width, raw.height);
  const std::size_t n = out.size();
  if (raw.bytes.size() != n * static_cast<std::size_t>(raw.channels)) {
    throw Error(ErrorCode::InvalidArgument, "raster byte count does not match its shape");
  }
  if (raw.channels == 1) {
    for (std::size_t i = 0; i < n; ++i) out.pixels[i] = raw.bytes[i];
  } else {
    // channel order is R, G, B
    for (std::size_t i = 0; i < n; ++i) {
      const auto* p = &raw.bytes[3 * i];
      out.pixels[i] = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
    }
  }
  return out;
}

GrayImage resize(const GrayImage& img, int width, int height) {
  if (width < 1 || height < 1) throw Error(ErrorCode::InvalidArgument, "resize target must be at least 1x1");
  if (img.width < 1 || img.height < 1) throw Error(ErrorCode::InvalidArgument, "cannot resize an empty image");
  if (width == img.width && height == img.height) return img;

  const double sx = static_cast<double>(img.width) / width;
  const double sy = static_cast<double>(img.height) / height;
  GrayImage out(width, height);
  for (int y = 0; y < height; ++y) {
    double fy = (y + 0.5) * sy - 0.5;
    fy = std::clamp(fy, 0.0, static_cast<double>(img.height - 1));
    const int y0 = static_cast<int>(std::floor(fy));
    const int y1 = std::min(y0 + 1, img.height - 1);
    const double wy = fy - y0;
    for (int x = 0; x < width; ++x) {
      double fx = (x + 0.5) * sx - 0.5;
      fx = std::clamp(fx, 0.0, static_cast<double>(img.width - 1));
      const int x0 = static_cast<int>(std::floor(fx));
      const int x1 = std::min(x0 + 1, img.width - 1);
      const double wx = fx - x0;
      const double top = (1.0 - wx) * img.at(x0, y0) + wx * img.at(x1, y0);
      const double bottom = (1.0 - wx) * img.at(x0, y1) + wx * img.at(x1, y1);
      out.at(x, y) = (1.0 - wy) * top + wy * bottom;
    }
  }
  return out;
}

GrayImage normalize(const GrayImage& img) {
  GrayImage out = img;
  for (double& v : out.pixels) v /= 255.0;
  return out;
}

RawImage decode_image(const std::filesystem::path& path) {
  cv::Mat mat = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (mat.empty()) throw Error(ErrorCode::IoFailure, "cannot decode image " + path.string());
  if (mat.depth() != CV_8U) throw Error(ErrorCode::UnsupportedChannelCount, "only 8-bit images are supported");
  if (mat.channels() == 4) {
    cv::Mat bgr;
    cv::Mat channels[4];
    cv::split(mat, channels);
    cv::merge(channels, 3, bgr);
    mat = bgr;
  }
  RawImage raw;
  raw.width = mat.cols;
  raw.height = mat.rows;
  raw.channels = mat.channels();
  raw.bytes.resize(static_cast<std::size_t>(raw.width) * raw.height * raw.channels);
  for (int y = 0; y < mat.rows; ++y) {
    const std::uint8_t* row = mat.ptr<std::uint8_t>(y);
    auto* dst = raw.bytes.data() + static_cast<std::size_t>(y) * raw.width * raw.channels;
    if (raw.channels == 3) {
      for (int x = 0; x < raw.width; ++x) {
        dst[3 * x + 0] = row[3 * x + 2];
        dst[3 * x + 1] = row[3 * x + 1];
        dst[3 * x + 2] = row[3 * x + 0];
      }
    } else {
      std::copy(row, row + static_cast<std::size_t>(raw.width) * raw.channels, dst);
    }
  }
  return raw;
}

void write_gray_image(const std::filesystem::path& path, const GrayImage& img, double scale) {
  cv::Mat mat(img.height, img.width, CV_8UC1);
  for (int y = 0; y < img.height; ++y) {
    auto* row = mat.ptr<std::uint8_t>(y);
    for (int x = 0; x < img.width; ++x) {
      row[x] = static_cast<std::uint8_t>(std::clamp(std::lround(img.at(x, y) * scale), 0L, 255L));
    }
  }
  bool ok = false;
  try {
    ok = cv::imwrite(path.string(), mat);
  } catch (const cv::Exception&) {
    ok = false;
  }
  if (!ok) throw Error(ErrorCode::IoFailure, "cannot write image " + path.string());
}

GrayImage load_normalized(const std::filesystem::path& path, int size) {
  return resize(normalize(to_gray(decode_image(path))), size, size);
}

}  // namespace fpbench
