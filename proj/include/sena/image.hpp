// Image containers shared by every stage of the enhancement pipeline.
//
// Pixels are stored as unit-interval reals in row-major Eigen arrays
// (rows = height, cols = width). Quantization to 8 bits only happens at
// file I/O (see io.hpp).
#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace sena {

using Index = Eigen::Index;

/// Raised when a caller passes an out-of-contract parameter or mismatched
/// image geometry.
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Raised when an external model or configuration file is missing or malformed.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <typename Scalar>
using PlaneArray = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using MaskArray = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Single-channel raster. Always at least 1x1.
template <typename Scalar_>
class ImagePlane {
 public:
  using Scalar = Scalar_;
  using Array = PlaneArray<Scalar>;

  ImagePlane(Index width, Index height, Scalar fill = Scalar(0)) {
    check_dims(width, height);
    data_.setConstant(height, width, fill);
  }

  explicit ImagePlane(Array data) : data_(std::move(data)) {
    check_dims(data_.cols(), data_.rows());
  }

  template <typename Derived>
  static ImagePlane from_expr(const Eigen::ArrayBase<Derived>& expr) {
    return ImagePlane(Array(expr));
  }

  Index width() const { return data_.cols(); }
  Index height() const { return data_.rows(); }
  Index size() const { return data_.size(); }

  const Array& array() const { return data_; }
  Array& array() { return data_; }

  Scalar operator()(Index x, Index y) const { return data_(y, x); }
  Scalar& operator()(Index x, Index y) { return data_(y, x); }

  bool same_shape(const ImagePlane& o) const {
    return width() == o.width() && height() == o.height();
  }

  template <typename Other>
  ImagePlane<Other> cast() const {
    return ImagePlane<Other>(data_.template cast<Other>());
  }

  bool operator==(const ImagePlane& o) const {
    return same_shape(o) && (data_ == o.data_).all();
  }

 private:
  static void check_dims(Index width, Index height) {
    if (width < 1 || height < 1) {
      throw ParameterError("image plane must be at least 1x1, got " + std::to_string(width) +
                           "x" + std::to_string(height));
    }
  }

  Array data_;
};

template <typename Scalar>
class RgbImage {
 public:
  using Plane = ImagePlane<Scalar>;

  RgbImage(Plane r, Plane g, Plane b) : r(std::move(r)), g(std::move(g)), b(std::move(b)) {
    if (!this->r.same_shape(this->g) || !this->r.same_shape(this->b)) {
      throw ParameterError("RGB planes must share dimensions");
    }
  }
  RgbImage(Index width, Index height, Scalar fill = Scalar(0))
      : r(width, height, fill), g(width, height, fill), b(width, height, fill) {}

  Index width() const { return r.width(); }
  Index height() const { return r.height(); }

  template <typename Other>
  RgbImage<Other> cast() const {
    return {r.template cast<Other>(), g.template cast<Other>(), b.template cast<Other>()};
  }

  bool operator==(const RgbImage& o) const { return r == o.r && g == o.g && b == o.b; }

  Plane r, g, b;
};

template <typename Scalar>
class YcbcrImage {
 public:
  using Plane = ImagePlane<Scalar>;

  YcbcrImage(Plane y, Plane cb, Plane cr) : y(std::move(y)), cb(std::move(cb)), cr(std::move(cr)) {
    if (!this->y.same_shape(this->cb) || !this->y.same_shape(this->cr)) {
      throw ParameterError("YCbCr planes must share dimensions");
    }
  }

  Index width() const { return y.width(); }
  Index height() const { return y.height(); }

  Plane y, cb, cr;
};

/// Boolean raster, true marks a shadow pixel.
class ShadowMask {
 public:
  ShadowMask(Index width, Index height, bool fill = false) {
    if (width < 1 || height < 1) throw ParameterError("mask must be at least 1x1");
    bits_.setConstant(height, width, fill);
  }
  explicit ShadowMask(MaskArray bits) : bits_(std::move(bits)) {
    if (bits_.size() == 0) throw ParameterError("mask must be at least 1x1");
  }

  Index width() const { return bits_.cols(); }
  Index height() const { return bits_.rows(); }
  Index count() const { return bits_.count(); }

  const MaskArray& bits() const { return bits_; }
  MaskArray& bits() { return bits_; }

  bool operator()(Index x, Index y) const { return bits_(y, x); }

  template <typename Scalar>
  bool matches(const ImagePlane<Scalar>& p) const {
    return width() == p.width() && height() == p.height();
  }

  /// True when every set pixel of this mask is also set in `other`.
  bool subset_of(const ShadowMask& other) const {
    return width() == other.width() && height() == other.height() &&
           !(bits_ && !other.bits_).any();
  }

  bool operator==(const ShadowMask& o) const {
    return width() == o.width() && height() == o.height() && (bits_ == o.bits_).all();
  }

 private:
  MaskArray bits_;
};

template <typename Scalar>
void require_same_shape(const ImagePlane<Scalar>& a, const ImagePlane<Scalar>& b,
                        const char* what) {
  if (!a.same_shape(b)) throw ParameterError(std::string(what) + ": dimension mismatch");
}

}  // namespace sena
