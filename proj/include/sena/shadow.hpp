// Shadow detection: intersection of a mean-thresholded HSV value mask and a
// fixed-threshold luminance mask.
#pragma once

#include "sena/color.hpp"

namespace sena {

/// Default luminance threshold, 165 on the 8-bit scale.
inline constexpr double kDefaultShadowLumaThreshold = 165.0 / 255.0;

/// Pixels with v in [0, mean(v)].
template <typename Scalar>
ShadowMask shadow_mask_v(const ImagePlane<Scalar>& v) {
  // shift by the minimum so a constant plane compares 0 <= 0 exactly
  const Scalar lo = v.array().minCoeff();
  const auto shifted = (v.array() - lo).template cast<double>().eval();
  return ShadowMask(MaskArray(shifted <= shifted.mean()));
}

/// Pixels with y <= threshold (inclusive).
template <typename Scalar>
ShadowMask shadow_mask_y(const ImagePlane<Scalar>& y,
                         double threshold = kDefaultShadowLumaThreshold) {
  return ShadowMask(MaskArray(y.array() <= static_cast<Scalar>(threshold)));
}

/// Combined mask on an already preprocessed image, reusing its V and Y planes.
template <typename Scalar>
ShadowMask shadow_mask(const ImagePlane<Scalar>& v, const ImagePlane<Scalar>& y,
                       double y_threshold = kDefaultShadowLumaThreshold) {
  require_same_shape(v, y, "shadow_mask");
  return ShadowMask(MaskArray(shadow_mask_v(v).bits() && shadow_mask_y(y, y_threshold).bits()));
}

template <typename Scalar>
ShadowMask shadow_mask(const RgbImage<Scalar>& img,
                       double y_threshold = kDefaultShadowLumaThreshold) {
  return shadow_mask(rgb_value_channel(img), luminance(img), y_threshold);
}

}  // namespace sena
