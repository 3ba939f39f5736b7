// Shadow-erosion / night-adaptation correction of luminance and chroma, and
// the end-to-end enhancement pipeline built on top of them.
#pragma once

#include "sena/color.hpp"
#include "sena/invariant.hpp"
#include "sena/shadow.hpp"

#include <cassert>
#include <cmath>

namespace sena {

/// How the non-shadow mean luminance scales the inverted luminance channel.
enum class LuminanceScaling {
  multiply,  ///< (max(Y) - Y) * mean
  divide     ///< (max(Y) - Y) / mean
};

enum class ChromaKind { red, blue };

struct SenaConfig {
  double gamma = 2.2;
  double y_shadow_threshold = kDefaultShadowLumaThreshold;
  double stretch_lo = 1.25;
  double stretch_hi = 98.75;
  double chroma_constant_c = 1.0;
  double epsilon = 1e-6;
  LaplacianKernel kernel_choice = LaplacianKernel::sobel_sum;
  LuminanceScaling luminance_scaling = LuminanceScaling::multiply;

  void validate() const {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ParameterError("gamma must be > 0");
    if (!(y_shadow_threshold >= 0.0 && y_shadow_threshold <= 1.0)) {
      throw ParameterError("y_shadow_threshold must lie in [0, 1]");
    }
    if (!(stretch_lo >= 0.0 && stretch_lo < stretch_hi && stretch_hi <= 100.0)) {
      throw ParameterError("stretch percentiles must satisfy 0 <= lo < hi <= 100");
    }
    if (!std::isfinite(chroma_constant_c)) throw ParameterError("chroma constant must be finite");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ParameterError("epsilon must be > 0");
  }

  bool operator==(const SenaConfig&) const = default;
};

template <typename Scalar>
struct LuminanceCorrection {
  ImagePlane<Scalar> y_norm_inv;  ///< scaled inverse luminance
  ImagePlane<Scalar> i_y_map;     ///< illumination map, y_norm_inv * L
  ImagePlane<Scalar> y_raw;       ///< y with the map added on shadow pixels, before normalization
  ImagePlane<Scalar> y_out;       ///< y_raw normalized onto [0, 1]
  double non_shadow_mean = 0.0;
};

template <typename Scalar>
struct ChromaCorrection {
  ImagePlane<Scalar> ch_inv;      ///< max(ch) - ch, normalized onto [0, 1]
  ImagePlane<Scalar> ch_map;      ///< m_c * ch_inv
  ImagePlane<Scalar> ch_inv_map;  ///< ch_map / ch
  ImagePlane<Scalar> ch_max_inv;  ///< ch - ch_inv_map
  ImagePlane<Scalar> candidate;   ///< red or blue combination
  ImagePlane<Scalar> out;         ///< ratio-adjusted and range-restored channel
};

namespace detail {

template <typename Scalar>
using ChunkVec = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
auto chunk(const ImagePlane<Scalar>& p, Index off, Index len) {
  return Eigen::Map<const ChunkVec<Scalar>>(p.array().data() + off, len);
}

template <typename Scalar>
auto chunk(ImagePlane<Scalar>& p, Index off, Index len) {
  return Eigen::Map<ChunkVec<Scalar>>(p.array().data() + off, len);
}

template <typename Scalar>
ChunkVec<Scalar> mask_chunk(const ShadowMask& m, Index off, Index len) {
  return Eigen::Map<const Eigen::Array<bool, Eigen::Dynamic, 1>>(m.bits().data() + off, len)
      .template cast<Scalar>();
}

/// Shared by the plain and the detailed entry points so both produce
/// bit-identical planes. `detail` may be null.
template <typename Scalar>
ImagePlane<Scalar> correct_luminance_impl(const ImagePlane<Scalar>& y, const ImagePlane<Scalar>& l,
                                          const ShadowMask& mask, const SenaConfig& cfg,
                                          LuminanceCorrection<Scalar>* detail) {
  require_same_shape(y, l, "correct_luminance");
  if (!mask.matches(y)) throw ParameterError("correct_luminance: mask dimension mismatch");

  const Index n = y.size();
  const Index shadow_count = mask.count();
  double mean = 0.0;
  if (shadow_count == n) {
    mean = y.array().template cast<double>().mean();
  } else {
    const auto off_mask = (!mask.bits()).template cast<double>();
    mean = (y.array().template cast<double>() * off_mask).sum() / static_cast<double>(n - shadow_count);
  }

  const Scalar y_max = y.array().maxCoeff();
  const auto scale = static_cast<Scalar>(
      cfg.luminance_scaling == LuminanceScaling::multiply ? mean
                                                          : 1.0 / std::max(mean, cfg.epsilon));
  ImagePlane<Scalar> raw(y.width(), y.height());
  ChunkVec<Scalar> inv, map;
  for_each_chunk(n, [&](Index off, Index len) {
    const auto yc = chunk(y, off, len);
    inv = (y_max - yc) * scale;
    map = inv * chunk(l, off, len);
    // off-mask pixels get y + 0 * map, i.e. exactly y
    chunk(raw, off, len) = yc + mask_chunk<Scalar>(mask, off, len) * map;
    if (detail != nullptr) {
      chunk(detail->y_norm_inv, off, len) = inv;
      chunk(detail->i_y_map, off, len) = map;
    }
  });
  auto out = normalize_minmax(raw);
  if (detail != nullptr) {
    detail->y_raw = std::move(raw);
    detail->y_out = out;
    detail->non_shadow_mean = mean;
  }
  return out;
}

template <typename Scalar>
ImagePlane<Scalar> correct_chroma_impl(const ImagePlane<Scalar>& ch, const ImagePlane<Scalar>& m_c,
                                       const ShadowMask& mask, ChromaKind kind,
                                       const SenaConfig& cfg, ChromaCorrection<Scalar>* detail) {
  require_same_shape(ch, m_c, "correct_chroma");
  if (!mask.matches(ch)) throw ParameterError("correct_chroma: mask dimension mismatch");

  const auto eps = static_cast<Scalar>(cfg.epsilon);
  const auto k = static_cast<Scalar>(cfg.chroma_constant_c);
  const Scalar c_min = ch.array().minCoeff();
  const Scalar c_max = ch.array().maxCoeff();
  // max(ch) - ch normalized onto [0, 1]; a constant channel inverts to 0
  const Scalar inv_scale = c_max > c_min ? Scalar(1) / (c_max - c_min) : Scalar(0);

  ImagePlane<Scalar> adjusted(ch.width(), ch.height());
  ChunkVec<Scalar> inv, map, inv_map, max_inv, cand, neg, denom;
  for_each_chunk(ch.size(), [&](Index off, Index len) {
    const auto c = chunk(ch, off, len);
    const auto m = chunk(m_c, off, len);
    inv = ((c_max - c) * inv_scale).max(Scalar(0)).min(Scalar(1));
    map = m * inv;
    inv_map = map / c.max(eps);
    max_inv = c - inv_map;
    if (kind == ChromaKind::red) {
      cand = (map + max_inv * k + m) / Scalar(3);
    } else {
      cand = (m + inv_map) * Scalar(0.5);
    }
    // shadow pixels are rescaled by original / candidate; the denominator
    // keeps its sign and is at least eps in magnitude
    neg = (cand < Scalar(0)).template cast<Scalar>();
    denom = cand.abs().max(eps) * (Scalar(1) - Scalar(2) * neg);
    chunk(adjusted, off, len) = blend(mask_chunk<Scalar>(mask, off, len), cand * (c / denom), cand);
    if (detail != nullptr) {
      chunk(detail->ch_inv, off, len) = inv;
      chunk(detail->ch_map, off, len) = map;
      chunk(detail->ch_inv_map, off, len) = inv_map;
      chunk(detail->ch_max_inv, off, len) = max_inv;
      chunk(detail->candidate, off, len) = cand;
    }
  });
  auto out = rescale_to_range(adjusted, c_min, c_max);
  if (detail != nullptr) detail->out = out;
  return out;
}

template <typename Scalar>
LuminanceCorrection<Scalar> blank_luminance_detail(const ImagePlane<Scalar>& like) {
  const ImagePlane<Scalar> z(like.width(), like.height());
  return {z, z, z, z, 0.0};
}

template <typename Scalar>
ChromaCorrection<Scalar> blank_chroma_detail(const ImagePlane<Scalar>& like) {
  const ImagePlane<Scalar> z(like.width(), like.height());
  return {z, z, z, z, z, z};
}

}  // namespace detail

template <typename Scalar>
LuminanceCorrection<Scalar> correct_luminance_detailed(const ImagePlane<Scalar>& y,
                                                       const ImagePlane<Scalar>& l,
                                                       const ShadowMask& mask,
                                                       const SenaConfig& cfg) {
  auto d = detail::blank_luminance_detail(y);
  detail::correct_luminance_impl(y, l, mask, cfg, &d);
  return d;
}

/// Adds the scaled inverse-luminance illumination map to shadow pixels and
/// renormalizes the whole plane onto [0, 1].
template <typename Scalar>
ImagePlane<Scalar> correct_luminance(const ImagePlane<Scalar>& y, const ImagePlane<Scalar>& l,
                                     const ShadowMask& mask, const SenaConfig& cfg = {}) {
  return detail::correct_luminance_impl(y, l, mask, cfg, static_cast<LuminanceCorrection<Scalar>*>(nullptr));
}

template <typename Scalar>
ChromaCorrection<Scalar> correct_chroma_detailed(const ImagePlane<Scalar>& ch,
                                                 const ImagePlane<Scalar>& m_c,
                                                 const ShadowMask& mask, ChromaKind kind,
                                                 const SenaConfig& cfg) {
  auto d = detail::blank_chroma_detail(ch);
  detail::correct_chroma_impl(ch, m_c, mask, kind, cfg, &d);
  return d;
}

/// Inverse-chromaticity correction of a Cr (red) or Cb (blue) plane. The
/// result spans exactly [min(ch), max(ch)].
template <typename Scalar>
ImagePlane<Scalar> correct_chroma(const ImagePlane<Scalar>& ch, const ImagePlane<Scalar>& m_c,
                                  const ShadowMask& mask, ChromaKind kind,
                                  const SenaConfig& cfg = {}) {
  return detail::correct_chroma_impl(ch, m_c, mask, kind, cfg, static_cast<ChromaCorrection<Scalar>*>(nullptr));
}

/// Every intermediate of one pipeline run, for debugging dumps and tests.
template <typename Scalar>
struct SenaTrace {
  RgbImage<Scalar> preprocessed;
  YcbcrImage<Scalar> ycbcr;
  ImagePlane<Scalar> value;
  ImagePlane<Scalar> lab_a;
  ShadowMask mask;
  ImagePlane<Scalar> m_c;
  ImagePlane<Scalar> laplacian;
  ImagePlane<Scalar> laplacian_stretched;
  LuminanceCorrection<Scalar> luma;
  ChromaCorrection<Scalar> cr;
  ChromaCorrection<Scalar> cb;
  RgbImage<Scalar> output;
};

/// Gamma decompression followed by per-channel min-max normalization.
template <typename Scalar>
RgbImage<Scalar> sena_preprocess(const RgbImage<Scalar>& img, double gamma) {
  const auto lin = gamma_decompress(img, gamma);
  return {normalize_minmax(lin.r), normalize_minmax(lin.g), normalize_minmax(lin.b)};
}

template <typename Scalar>
SenaTrace<Scalar> sena_enhance_traced(const RgbImage<Scalar>& img, const SenaConfig& cfg = {}) {
  cfg.validate();
  if (img.width() < 3 || img.height() < 3) {
    throw ParameterError("sena_enhance needs an image of at least 3x3");
  }
  auto pre = sena_preprocess(img, cfg.gamma);
  auto ycc = rgb_to_ycbcr(pre);
  auto value = rgb_value_channel(pre);
  auto lab_a = rgb_to_lab_a(pre);
  auto mask = shadow_mask(value, ycc.y, cfg.y_shadow_threshold);

  auto m_c = mean_chroma(lab_a, ycc.cb, ycc.cr);
  auto lap = laplacian_invariant(ycc.y, cfg.kernel_choice);
  auto lap_s = contrast_stretch(lap, cfg.stretch_lo, cfg.stretch_hi);

  auto luma = correct_luminance_detailed(ycc.y, lap_s, mask, cfg);
  auto cr = correct_chroma_detailed(ycc.cr, m_c, mask, ChromaKind::red, cfg);
  auto cb = correct_chroma_detailed(ycc.cb, m_c, mask, ChromaKind::blue, cfg);

  auto out = ycbcr_to_rgb(YcbcrImage<Scalar>(luma.y_out, cb.out, cr.out));
  assert(out.r.array().isFinite().all() && out.g.array().isFinite().all() &&
         out.b.array().isFinite().all());
  return {std::move(pre),   std::move(ycc),  std::move(value), std::move(lab_a),
          std::move(mask),  std::move(m_c),  std::move(lap),   std::move(lap_s),
          std::move(luma),  std::move(cr),   std::move(cb),    std::move(out)};
}

/// Full enhancement: preprocess, detect shadows, build invariant channels,
/// correct luminance and both chroma planes, convert back to RGB.
template <typename Scalar>
RgbImage<Scalar> sena_enhance(const RgbImage<Scalar>& img, const SenaConfig& cfg = {}) {
  cfg.validate();
  if (img.width() < 3 || img.height() < 3) {
    throw ParameterError("sena_enhance needs an image of at least 3x3");
  }
  const auto pre = sena_preprocess(img, cfg.gamma);
  const auto ycc = rgb_to_ycbcr(pre);
  const auto mask = shadow_mask(rgb_value_channel(pre), ycc.y, cfg.y_shadow_threshold);
  const auto m_c = mean_chroma(rgb_to_lab_a(pre), ycc.cb, ycc.cr);
  const auto lap = contrast_stretch(laplacian_invariant(ycc.y, cfg.kernel_choice),
                                    cfg.stretch_lo, cfg.stretch_hi);
  auto out = ycbcr_to_rgb(YcbcrImage<Scalar>(correct_luminance(ycc.y, lap, mask, cfg),
                                             correct_chroma(ycc.cb, m_c, mask, ChromaKind::blue, cfg),
                                             correct_chroma(ycc.cr, m_c, mask, ChromaKind::red, cfg)));
  assert(out.r.array().isFinite().all() && out.g.array().isFinite().all() &&
         out.b.array().isFinite().all());
  return out;
}

}  // namespace sena
