// Contrast Limited Adaptive Histogram Equalization, the comparison baseline.
#pragma once

#include "sena/color.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace sena {

struct ClaheConfig {
  /// Multiple of the uniform bin height; +infinity disables clipping.
  double clip_limit = 2.0;
  int tiles_x = 8;
  int tiles_y = 8;
  int bins = 256;

  void validate() const {
    if (!(clip_limit > 0.0)) throw ParameterError("clahe clip_limit must be > 0");
    if (tiles_x < 1 || tiles_y < 1) throw ParameterError("clahe tile grid must be at least 1x1");
    if (bins < 2) throw ParameterError("clahe needs at least 2 bins");
  }

  bool operator==(const ClaheConfig&) const = default;
};

namespace detail {

/// Tile boundaries: tile i spans [edge[i], edge[i+1]).
inline std::vector<Index> tile_edges(Index extent, int tiles) {
  std::vector<Index> e(static_cast<std::size_t>(tiles) + 1);
  for (int i = 0; i <= tiles; ++i) e[static_cast<std::size_t>(i)] = extent * i / tiles;
  return e;
}

struct AxisBlend {
  std::vector<int> lo, hi;
  std::vector<double> w;  ///< weight of `hi`
};

inline AxisBlend axis_blend(Index extent, const std::vector<Index>& edges) {
  const auto tiles = static_cast<int>(edges.size()) - 1;
  std::vector<double> centers(static_cast<std::size_t>(tiles));
  for (int i = 0; i < tiles; ++i) {
    centers[static_cast<std::size_t>(i)] =
        0.5 * static_cast<double>(edges[static_cast<std::size_t>(i)] +
                                  edges[static_cast<std::size_t>(i) + 1] - 1);
  }
  AxisBlend b;
  b.lo.resize(static_cast<std::size_t>(extent));
  b.hi.resize(static_cast<std::size_t>(extent));
  b.w.resize(static_cast<std::size_t>(extent));
  int t = 0;
  for (Index x = 0; x < extent; ++x) {
    const auto xd = static_cast<double>(x);
    const auto k = static_cast<std::size_t>(x);
    while (t + 1 < tiles && centers[static_cast<std::size_t>(t) + 1] <= xd) ++t;
    if (xd <= centers.front()) {
      b.lo[k] = b.hi[k] = 0;
      b.w[k] = 0.0;
    } else if (t + 1 >= tiles) {
      b.lo[k] = b.hi[k] = tiles - 1;
      b.w[k] = 0.0;
    } else {
      const double c0 = centers[static_cast<std::size_t>(t)];
      const double c1 = centers[static_cast<std::size_t>(t) + 1];
      b.lo[k] = t;
      b.hi[k] = t + 1;
      b.w[k] = (xd - c0) / (c1 - c0);
    }
  }
  return b;
}

}  // namespace detail

/// Histogram bin of a unit-interval value: round(v * (bins - 1)), clamped.
inline int clahe_bin(double v, int bins) {
  const double s = std::round(std::clamp(v, 0.0, 1.0) * (bins - 1));
  return static_cast<int>(s);
}

/// Equalization transfer of one histogram: clip at clip_limit * N / bins
/// (at least 1 count), spread the excess uniformly over all bins once, and
/// map bin k to cdf(k) / N.
inline std::vector<double> clahe_transfer(std::vector<double> hist, double clip_limit) {
  const auto bins = hist.size();
  double total = 0.0;
  for (double h : hist) total += h;
  if (std::isfinite(clip_limit)) {
    const double clip = std::max(1.0, clip_limit * total / static_cast<double>(bins));
    double excess = 0.0;
    for (double& h : hist) {
      if (h > clip) {
        excess += h - clip;
        h = clip;
      }
    }
    const double spread = excess / static_cast<double>(bins);
    for (double& h : hist) h += spread;
  }
  std::vector<double> lut(bins);
  double acc = 0.0;
  for (std::size_t k = 0; k < bins; ++k) {
    acc += hist[k];
    lut[k] = acc / total;
  }
  return lut;
}

template <typename Scalar>
ImagePlane<Scalar> clahe(const ImagePlane<Scalar>& plane, const ClaheConfig& cfg = {}) {
  cfg.validate();
  const Index w = plane.width();
  const Index h = plane.height();
  if (cfg.tiles_x > w || cfg.tiles_y > h) {
    throw ParameterError("clahe tile grid is larger than the image");
  }

  const auto bins = static_cast<std::size_t>(cfg.bins);
  Eigen::Array<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> bin(h, w);
  for (Index y = 0; y < h; ++y) {
    for (Index x = 0; x < w; ++x) bin(y, x) = clahe_bin(static_cast<double>(plane(x, y)), cfg.bins);
  }

  const auto ex = detail::tile_edges(w, cfg.tiles_x);
  const auto ey = detail::tile_edges(h, cfg.tiles_y);
  const auto ntx = static_cast<std::size_t>(cfg.tiles_x);
  std::vector<std::vector<double>> luts(ntx * static_cast<std::size_t>(cfg.tiles_y));
  for (std::size_t ty = 0; ty < static_cast<std::size_t>(cfg.tiles_y); ++ty) {
    for (std::size_t tx = 0; tx < ntx; ++tx) {
      std::vector<double> hist(bins, 0.0);
      for (Index y = ey[ty]; y < ey[ty + 1]; ++y) {
        for (Index x = ex[tx]; x < ex[tx + 1]; ++x) hist[static_cast<std::size_t>(bin(y, x))] += 1.0;
      }
      luts[ty * ntx + tx] = clahe_transfer(std::move(hist), cfg.clip_limit);
    }
  }

  const auto bx = detail::axis_blend(w, ex);
  const auto by = detail::axis_blend(h, ey);
  PlaneArray<Scalar> out(h, w);
  for (Index y = 0; y < h; ++y) {
    const auto ky = static_cast<std::size_t>(y);
    const auto r0 = static_cast<std::size_t>(by.lo[ky]) * ntx;
    const auto r1 = static_cast<std::size_t>(by.hi[ky]) * ntx;
    const double wy = by.w[ky];
    for (Index x = 0; x < w; ++x) {
      const auto kx = static_cast<std::size_t>(x);
      const auto c0 = static_cast<std::size_t>(bx.lo[kx]);
      const auto c1 = static_cast<std::size_t>(bx.hi[kx]);
      const double wx = bx.w[kx];
      const auto k = static_cast<std::size_t>(bin(y, x));
      const double top = (1.0 - wx) * luts[r0 + c0][k] + wx * luts[r0 + c1][k];
      const double bottom = (1.0 - wx) * luts[r1 + c0][k] + wx * luts[r1 + c1][k];
      out(y, x) = static_cast<Scalar>(std::clamp((1.0 - wy) * top + wy * bottom, 0.0, 1.0));
    }
  }
  return ImagePlane<Scalar>(std::move(out));
}

/// CLAHE on the luminance plane only; chroma passes through untouched.
template <typename Scalar>
YcbcrImage<Scalar> clahe_ycbcr(const RgbImage<Scalar>& img, const ClaheConfig& cfg = {}) {
  auto ycc = rgb_to_ycbcr(img);
  ycc.y = clahe(ycc.y, cfg);
  return ycc;
}

template <typename Scalar>
RgbImage<Scalar> clahe_rgb(const RgbImage<Scalar>& img, const ClaheConfig& cfg = {}) {
  return ycbcr_to_rgb(clahe_ycbcr(img, cfg));
}

}  // namespace sena
