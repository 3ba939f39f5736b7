// 8-bit PNG / JPEG file I/O. Values map to the unit interval as v / 255 on
// read and to round(255 v), clamped to [0, 255], on write.
#pragma once

#include "sena/image.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <vector>

namespace sena {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Decodes any 8-bit image OpenCV understands; grayscale is replicated to RGB.
template <typename Scalar>
RgbImage<Scalar> read_rgb(const std::filesystem::path& path);

template <typename Scalar>
void write_rgb(const std::filesystem::path& path, const RgbImage<Scalar>& img);

template <typename Scalar>
void write_plane(const std::filesystem::path& path, const ImagePlane<Scalar>& plane);

/// Writes a bilevel (1-bit) PNG, white = shadow.
void write_mask(const std::filesystem::path& path, const ShadowMask& mask);

/// Interleaved RGB bytes, row-major.
template <typename Scalar>
std::vector<std::uint8_t> to_rgb8(const RgbImage<Scalar>& img);

template <typename Scalar>
RgbImage<Scalar> from_rgb8(const std::uint8_t* rgb, Index width, Index height);

inline std::uint8_t quantize8(double v) {
  const double s = v * 255.0;
  if (!(s > 0.0)) return 0;
  if (s >= 255.0) return 255;
  return static_cast<std::uint8_t>(s + 0.5);
}

/// True for extensions the batch tools treat as images.
bool is_image_path(const std::filesystem::path& path);

}  // namespace sena
