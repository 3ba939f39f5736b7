// Illumination-invariant channels: the mean chroma channel and the
// normalized second-derivative (Laplacian) response of luminance, plus the
// percentile contrast stretch applied to the latter.
#pragma once

#include "sena/color.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <vector>

namespace sena {

enum class LaplacianKernel {
  sobel_sum,     ///< d2/dx2 + d2/dy2 of the 3x3 Sobel operator: [[2,0,2],[0,-8,0],[2,0,2]]
  four_neighbor  ///< classic [[0,1,0],[1,-4,1],[0,1,0]]
};

inline Eigen::Matrix3d laplacian_kernel(LaplacianKernel k) {
  Eigen::Matrix3d m;
  if (k == LaplacianKernel::sobel_sum) {
    m << 2, 0, 2, 0, -8, 0, 2, 0, 2;
  } else {
    m << 0, 1, 0, 1, -4, 1, 0, 1, 0;
  }
  return m;
}

template <typename Scalar>
struct InvariantChannels {
  ImagePlane<Scalar> m_c;
  ImagePlane<Scalar> laplacian;
};

/// (2a + cb + cr) / 4 per pixel.
template <typename Scalar>
ImagePlane<Scalar> mean_chroma(const ImagePlane<Scalar>& a, const ImagePlane<Scalar>& cb,
                               const ImagePlane<Scalar>& cr) {
  require_same_shape(a, cb, "mean_chroma");
  require_same_shape(a, cr, "mean_chroma");
  return ImagePlane<Scalar>::from_expr((Scalar(2) * a.array() + cb.array() + cr.array()) *
                                       Scalar(0.25));
}

/// Raw 3x3 kernel response with replicate-padded borders.
template <typename Scalar>
ImagePlane<Scalar> laplacian_response(const ImagePlane<Scalar>& y,
                                      LaplacianKernel kernel = LaplacianKernel::sobel_sum) {
  const Index w = y.width();
  const Index h = y.height();
  if (w < 3 || h < 3) throw ParameterError("laplacian needs an image of at least 3x3");

  PlaneArray<Scalar> padded(h + 2, w + 2);
  padded.block(1, 1, h, w) = y.array();
  padded.block(0, 1, 1, w) = y.array().row(0);
  padded.block(h + 1, 1, 1, w) = y.array().row(h - 1);
  padded.col(0) = padded.col(1);
  padded.col(w + 1) = padded.col(w);

  const Eigen::Matrix3d k = laplacian_kernel(kernel);
  PlaneArray<Scalar> out = PlaneArray<Scalar>::Zero(h, w);
  // fixed (row, col) order per pixel keeps the summation deterministic
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (k(i, j) == 0.0) continue;
      out += static_cast<Scalar>(k(i, j)) * padded.block(i, j, h, w);
    }
  }
  return ImagePlane<Scalar>(std::move(out));
}

/// Kernel response min-max normalized onto [0, 1].
template <typename Scalar>
ImagePlane<Scalar> laplacian_invariant(const ImagePlane<Scalar>& y,
                                       LaplacianKernel kernel = LaplacianKernel::sobel_sum) {
  return normalize_minmax(laplacian_response(y, kernel));
}

/// Nearest-rank percentiles: for each p, the ceil(p/100 * N)-th smallest value
/// (1-based, clamped to [1, N]). Exact; selection runs through a value
/// histogram so the cost is linear in the pixel count.
template <typename Scalar>
std::vector<Scalar> percentiles_nearest_rank(const ImagePlane<Scalar>& p,
                                             const std::vector<double>& percents) {
  const Index n = p.size();
  const Scalar* v = p.array().data();
  std::vector<Index> ranks;
  for (double q : percents) {
    if (!(q >= 0.0 && q <= 100.0)) throw ParameterError("percentile must lie in [0, 100]");
    const auto r = static_cast<Index>(std::ceil(q * static_cast<double>(n) / 100.0));
    ranks.push_back(std::clamp<Index>(r, 1, n));
  }

  const Scalar lo = p.array().minCoeff();
  const Scalar hi = p.array().maxCoeff();
  if (!(hi > lo)) return std::vector<Scalar>(percents.size(), lo);

  // (v - lo) * scale is monotone in v, so bins preserve order
  const Index bins = std::clamp<Index>(n / 4, 16, Index(1) << 16);
  const double scale = static_cast<double>(bins) / (static_cast<double>(hi) - static_cast<double>(lo));
  auto bin_of = [&](Scalar x) {
    const auto b = static_cast<Index>((static_cast<double>(x) - static_cast<double>(lo)) * scale);
    return std::min(b, bins - 1);
  };
  std::vector<Index> count(static_cast<std::size_t>(bins), 0);
  for (Index i = 0; i < n; ++i) ++count[static_cast<std::size_t>(bin_of(v[i]))];

  std::vector<Scalar> out;
  for (Index rank : ranks) {
    Index before = 0;
    Index b = 0;
    while (before + count[static_cast<std::size_t>(b)] < rank) before += count[static_cast<std::size_t>(b++)];
    std::vector<Scalar> members;
    members.reserve(static_cast<std::size_t>(count[static_cast<std::size_t>(b)]));
    for (Index i = 0; i < n; ++i) {
      if (bin_of(v[i]) == b) members.push_back(v[i]);
    }
    const auto k = static_cast<std::ptrdiff_t>(rank - before - 1);
    std::nth_element(members.begin(), members.begin() + k, members.end());
    out.push_back(members[static_cast<std::size_t>(k)]);
  }
  return out;
}

template <typename Scalar>
Scalar percentile_nearest_rank(const ImagePlane<Scalar>& p, double percent) {
  return percentiles_nearest_rank(p, {percent}).front();
}

/// Linear remap of [lo_cut, hi_cut] onto [0, 1], clamping outside. A
/// degenerate window thresholds at lo_cut.
template <typename Scalar>
ImagePlane<Scalar> stretch_between(const ImagePlane<Scalar>& p, Scalar lo_cut, Scalar hi_cut) {
  if (!(hi_cut > lo_cut)) {
    return ImagePlane<Scalar>::from_expr((p.array() > lo_cut).template cast<Scalar>());
  }
  const Scalar scale = Scalar(1) / (hi_cut - lo_cut);
  return ImagePlane<Scalar>::from_expr(
      ((p.array() - lo_cut) * scale).max(Scalar(0)).min(Scalar(1)));
}

template <typename Scalar>
ImagePlane<Scalar> contrast_stretch(const ImagePlane<Scalar>& p, double p_lo = 1.25,
                                    double p_hi = 98.75) {
  if (!(p_lo >= 0.0 && p_lo < p_hi && p_hi <= 100.0)) {
    throw ParameterError("contrast_stretch requires 0 <= p_lo < p_hi <= 100");
  }
  const auto cuts = percentiles_nearest_rank(p, {p_lo, p_hi});
  return stretch_between(p, cuts[0], cuts[1]);
}

template <typename Scalar>
InvariantChannels<Scalar> invariant_channels(const RgbImage<Scalar>& img,
                                             LaplacianKernel kernel = LaplacianKernel::sobel_sum) {
  const auto ycc = rgb_to_ycbcr(img);
  return {mean_chroma(rgb_to_lab_a(img), ycc.cb, ycc.cr), laplacian_invariant(ycc.y, kernel)};
}

}  // namespace sena
