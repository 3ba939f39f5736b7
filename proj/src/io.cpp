#include "sena/io.hpp"

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <string>

namespace sena {

namespace {

void ensure_parent(const std::filesystem::path& path) {
  const auto parent = path.parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
    if (ec) throw IoError("cannot create directory " + parent.string() + ": " + ec.message());
  }
}

void write_mat(const std::filesystem::path& path, const cv::Mat& m,
               const std::vector<int>& params = {}) {
  ensure_parent(path);
  bool ok = false;
  try {
    ok = cv::imwrite(path.string(), m, params);
  } catch (const cv::Exception& e) {
    throw IoError("cannot write " + path.string() + ": " + e.what());
  }
  if (!ok) throw IoError("cannot write " + path.string());
}

}  // namespace

template <typename Scalar>
std::vector<std::uint8_t> to_rgb8(const RgbImage<Scalar>& img) {
  const Index w = img.width();
  const Index h = img.height();
  std::vector<std::uint8_t> out(static_cast<std::size_t>(w * h * 3));
  std::size_t k = 0;
  for (Index y = 0; y < h; ++y) {
    for (Index x = 0; x < w; ++x) {
      out[k++] = quantize8(static_cast<double>(img.r(x, y)));
      out[k++] = quantize8(static_cast<double>(img.g(x, y)));
      out[k++] = quantize8(static_cast<double>(img.b(x, y)));
    }
  }
  return out;
}

template <typename Scalar>
RgbImage<Scalar> from_rgb8(const std::uint8_t* rgb, Index width, Index height) {
  RgbImage<Scalar> img(width, height);
  // k / 255 rounded once, so 8-bit values land on the nearest representable level
  std::array<Scalar, 256> level;
  for (int k = 0; k < 256; ++k) level[static_cast<std::size_t>(k)] = static_cast<Scalar>(k / 255.0);
  for (Index y = 0; y < height; ++y) {
    for (Index x = 0; x < width; ++x) {
      const std::uint8_t* p = rgb + 3 * (y * width + x);
      img.r(x, y) = level[p[0]];
      img.g(x, y) = level[p[1]];
      img.b(x, y) = level[p[2]];
    }
  }
  return img;
}

template <typename Scalar>
RgbImage<Scalar> read_rgb(const std::filesystem::path& path) {
  cv::Mat bgr;
  try {
    bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
  } catch (const cv::Exception& e) {
    throw IoError("cannot decode " + path.string() + ": " + e.what());
  }
  if (bgr.empty()) throw IoError("cannot decode " + path.string());
  if (bgr.depth() != CV_8U) throw IoError("only 8-bit images are supported: " + path.string());
  const Index w = bgr.cols;
  const Index h = bgr.rows;
  std::vector<std::uint8_t> rgb(static_cast<std::size_t>(w * h * 3));
  for (Index y = 0; y < h; ++y) {
    const auto* row = bgr.ptr<cv::Vec3b>(static_cast<int>(y));
    for (Index x = 0; x < w; ++x) {
      const auto k = static_cast<std::size_t>(3 * (y * w + x));
      rgb[k] = row[x][2];
      rgb[k + 1] = row[x][1];
      rgb[k + 2] = row[x][0];
    }
  }
  return from_rgb8<Scalar>(rgb.data(), w, h);
}

template <typename Scalar>
void write_rgb(const std::filesystem::path& path, const RgbImage<Scalar>& img) {
  const auto rgb = to_rgb8(img);
  cv::Mat bgr(static_cast<int>(img.height()), static_cast<int>(img.width()), CV_8UC3);
  for (int y = 0; y < bgr.rows; ++y) {
    auto* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < bgr.cols; ++x) {
      const auto k = static_cast<std::size_t>(3 * (y * bgr.cols + x));
      row[x] = cv::Vec3b(rgb[k + 2], rgb[k + 1], rgb[k]);
    }
  }
  write_mat(path, bgr);
}

template <typename Scalar>
void write_plane(const std::filesystem::path& path, const ImagePlane<Scalar>& plane) {
  cv::Mat gray(static_cast<int>(plane.height()), static_cast<int>(plane.width()), CV_8UC1);
  for (int y = 0; y < gray.rows; ++y) {
    for (int x = 0; x < gray.cols; ++x) gray.at<std::uint8_t>(y, x) = quantize8(plane(x, y));
  }
  write_mat(path, gray);
}

void write_mask(const std::filesystem::path& path, const ShadowMask& mask) {
  cv::Mat gray(static_cast<int>(mask.height()), static_cast<int>(mask.width()), CV_8UC1);
  for (int y = 0; y < gray.rows; ++y) {
    for (int x = 0; x < gray.cols; ++x) gray.at<std::uint8_t>(y, x) = mask(x, y) ? 255 : 0;
  }
  write_mat(path, gray, {cv::IMWRITE_PNG_BILEVEL, 1});
}

bool is_image_path(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

template RgbImage<float> read_rgb<float>(const std::filesystem::path&);
template RgbImage<double> read_rgb<double>(const std::filesystem::path&);
template void write_rgb<float>(const std::filesystem::path&, const RgbImage<float>&);
template void write_rgb<double>(const std::filesystem::path&, const RgbImage<double>&);
template void write_plane<float>(const std::filesystem::path&, const ImagePlane<float>&);
template void write_plane<double>(const std::filesystem::path&, const ImagePlane<double>&);
template std::vector<std::uint8_t> to_rgb8<float>(const RgbImage<float>&);
template std::vector<std::uint8_t> to_rgb8<double>(const RgbImage<double>&);
template RgbImage<float> from_rgb8<float>(const std::uint8_t*, Index, Index);
template RgbImage<double> from_rgb8<double>(const std::uint8_t*, Index, Index);

}  // namespace sena
