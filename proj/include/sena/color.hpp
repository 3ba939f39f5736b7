// Color-space conversions, gamma transfer and range normalization.
#pragma once

#include "sena/image.hpp"

#include <algorithm>
#include <cmath>

namespace sena {

namespace detail {

inline void require_positive_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw ParameterError("gamma must be a positive finite number");
  }
}

/// dst = x^e for x >= 0, computed as exp(e log x) in two vectorized passes
/// (0 maps to 0). Negative round-off in x is clamped to 0.
template <typename Derived, typename Dst>
void pow_nonneg_into(const Eigen::ArrayBase<Derived>& x, typename Derived::Scalar e,
                     Dst& dst) {
  using Scalar = typename Derived::Scalar;
  dst = x.derived().max(Scalar(0)).log();
  dst = (dst * e).exp();
}

template <typename Scalar>
ImagePlane<Scalar> power(const ImagePlane<Scalar>& p, Scalar exponent) {
  if (exponent == Scalar(1)) return p;
  PlaneArray<Scalar> out;
  pow_nonneg_into(p.array(), exponent, out);
  return ImagePlane<Scalar>(std::move(out));
}

/// cond ? a : b for a 0/1-valued `cond` as m*a + (1-m)*b, which is exact
/// for finite a and b and vectorizes where Eigen's select() does not.
template <typename Cond, typename A, typename B>
auto blend(const Cond& cond, const A& a, const B& b) {
  using Scalar = typename A::Scalar;
  return cond * a + (Scalar(1) - cond) * b;
}

/// Calls fn(offset, length) over consecutive cache-sized runs of [0, n).
template <typename Fn>
void for_each_chunk(Index n, Fn&& fn) {
  constexpr Index kChunk = 4096;
  for (Index off = 0; off < n; off += kChunk) fn(off, std::min(kChunk, n - off));
}

}  // namespace detail

/// v -> v^gamma on every channel.
template <typename Scalar>
RgbImage<Scalar> gamma_decompress(const RgbImage<Scalar>& img, double gamma) {
  detail::require_positive_gamma(gamma);
  const auto e = static_cast<Scalar>(gamma);
  return {detail::power(img.r, e), detail::power(img.g, e), detail::power(img.b, e)};
}

/// v -> v^(1/gamma) on every channel.
template <typename Scalar>
RgbImage<Scalar> gamma_compress(const RgbImage<Scalar>& img, double gamma) {
  detail::require_positive_gamma(gamma);
  const auto e = static_cast<Scalar>(1.0 / gamma);
  return {detail::power(img.r, e), detail::power(img.g, e), detail::power(img.b, e)};
}

/// Affine map of [min(p), max(p)] onto [lo, hi]. Unlike normalize_minmax this
/// accepts lo == hi, and a constant plane maps to lo.
template <typename Scalar>
ImagePlane<Scalar> rescale_to_range(const ImagePlane<Scalar>& p, Scalar lo, Scalar hi) {
  const Scalar mn = p.array().minCoeff();
  const Scalar mx = p.array().maxCoeff();
  if (!(mx > mn) || lo == hi) return ImagePlane<Scalar>(p.width(), p.height(), lo);
  const Scalar scale = (hi - lo) / (mx - mn);
  const Scalar floor_v = std::min(lo, hi);
  const Scalar ceil_v = std::max(lo, hi);
  // the extremes map to lo / hi exactly; rounding elsewhere stays inside the range
  return ImagePlane<Scalar>::from_expr(
      (p.array() == mx)
          .select(hi, (p.array() == mn).select(lo, ((p.array() - mn) * scale + lo).max(floor_v).min(ceil_v))));
}

/// Min-max normalization onto [lo, hi] (defaults to the unit interval).
template <typename Scalar>
ImagePlane<Scalar> normalize_minmax(const ImagePlane<Scalar>& p, Scalar lo = Scalar(0),
                                    Scalar hi = Scalar(1)) {
  if (!(lo < hi)) throw ParameterError("normalize_minmax requires lo < hi");
  return rescale_to_range(p, lo, hi);
}

/// Full-range BT.601 luma weights.
template <typename Scalar>
struct Bt601 {
  static constexpr Scalar kr = Scalar(0.299);
  static constexpr Scalar kg = Scalar(0.587);
  static constexpr Scalar kb = Scalar(0.114);
};

template <typename Scalar>
ImagePlane<Scalar> luminance(const RgbImage<Scalar>& img) {
  using W = Bt601<Scalar>;
  return ImagePlane<Scalar>::from_expr(
      (W::kr * img.r.array() + W::kg * img.g.array() + W::kb * img.b.array())
          .max(Scalar(0))
          .min(Scalar(1)));
}

/// Full-range BT.601 RGB -> YCbCr, chroma centered at 0.5, all planes
/// clamped to [0, 1].
template <typename Scalar>
YcbcrImage<Scalar> rgb_to_ycbcr(const RgbImage<Scalar>& img) {
  const auto& r = img.r.array();
  const auto& g = img.g.array();
  const auto& b = img.b.array();
  const Scalar half(0.5);
  auto clamp01 = [](const auto& e) { return e.max(Scalar(0)).min(Scalar(1)); };
  return {luminance(img),
          ImagePlane<Scalar>::from_expr(clamp01(
              half - Scalar(0.168735891647856) * r - Scalar(0.331264108352144) * g + half * b)),
          ImagePlane<Scalar>::from_expr(clamp01(
              half + half * r - Scalar(0.418687589158345) * g - Scalar(0.081312410841655) * b))};
}

/// Inverse of rgb_to_ycbcr, clamped to [0, 1].
template <typename Scalar>
RgbImage<Scalar> ycbcr_to_rgb(const YcbcrImage<Scalar>& img) {
  const auto& y = img.y.array();
  const auto cb = (img.cb.array() - Scalar(0.5)).eval();
  const auto cr = (img.cr.array() - Scalar(0.5)).eval();
  auto clamp01 = [](const auto& e) { return e.max(Scalar(0)).min(Scalar(1)); };
  return {ImagePlane<Scalar>::from_expr(clamp01(y + Scalar(1.402) * cr)),
          ImagePlane<Scalar>::from_expr(
              clamp01(y - Scalar(0.344136286201022) * cb - Scalar(0.714136286201022) * cr)),
          ImagePlane<Scalar>::from_expr(clamp01(y + Scalar(1.772) * cb))};
}

/// HSV value channel: per-pixel max(r, g, b).
template <typename Scalar>
ImagePlane<Scalar> rgb_value_channel(const RgbImage<Scalar>& img) {
  return ImagePlane<Scalar>::from_expr(img.r.array().max(img.g.array()).max(img.b.array()));
}

/// CIELAB a* (green-magenta axis) treating the input as sRGB with a D65 white,
/// mapped onto [0, 1] through the fixed window a* in [-128, 127].
template <typename Scalar>
ImagePlane<Scalar> rgb_to_lab_a(const RgbImage<Scalar>& img) {
  using Vec = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
  using CMap = Eigen::Map<const Vec>;

  constexpr double delta = 6.0 / 29.0;
  const auto t0 = static_cast<Scalar>(delta * delta * delta);
  const auto slope = static_cast<Scalar>(1.0 / (3.0 * delta * delta));
  const auto offset = static_cast<Scalar>(4.0 / 29.0);

  // sRGB transfer inverse, written into dst
  auto linearize = [](const CMap& c, Vec& dst) {
    const Vec cl = c.max(Scalar(0)).min(Scalar(1));
    detail::pow_nonneg_into((cl + Scalar(0.055)) / Scalar(1.055), Scalar(2.4), dst);
    const Vec low = (cl <= Scalar(0.04045)).template cast<Scalar>();
    dst = detail::blend(low, cl / Scalar(12.92), dst);
  };
  auto lab_f = [&](const Vec& t, Vec& dst) {
    detail::pow_nonneg_into(t, Scalar(1.0 / 3.0), dst);
    const Vec high = (t > t0).template cast<Scalar>();
    dst = detail::blend(high, dst, t * slope + offset);
  };

  PlaneArray<Scalar> out(img.height(), img.width());
  Vec r, g, b, xr, yr, fx, fy;
  detail::for_each_chunk(out.size(), [&](Index off, Index len) {
    linearize(CMap(img.r.array().data() + off, len), r);
    linearize(CMap(img.g.array().data() + off, len), g);
    linearize(CMap(img.b.array().data() + off, len), b);
    // X / Xn and Y / Yn for the D65 reference white (Xn = 0.95047, Yn = 1)
    xr = (Scalar(0.4124564) * r + Scalar(0.3575761) * g + Scalar(0.1804375) * b) /
         Scalar(0.95047);
    yr = Scalar(0.2126729) * r + Scalar(0.7151522) * g + Scalar(0.0721750) * b;
    lab_f(xr, fx);
    lab_f(yr, fy);
    Eigen::Map<Vec>(out.data() + off, len) =
        ((Scalar(500) * (fx - fy) + Scalar(128)) / Scalar(255)).max(Scalar(0)).min(Scalar(1));
  });
  return ImagePlane<Scalar>(std::move(out));
}

}  // namespace sena
