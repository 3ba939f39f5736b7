// No-reference image quality measures: brightness statistics, histogram
// entropy, PIQE, NIQE and BRISQUE natural-scene-statistics features.
//
// All measures operate on the BT.601 luminance plane. Scores that are
// conventionally defined on 8-bit data (PIQE, NIQE, BRISQUE, mean, SD) use
// the 0-255 scale internally.
#pragma once

#include "sena/color.hpp"

#include <Eigen/Dense>

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sena {

using LumaArray = PlaneArray<double>;

template <typename Scalar>
LumaArray luma_of(const RgbImage<Scalar>& img) {
  return luminance(img).array().template cast<double>();
}

// ---------------------------------------------------------------------------
// Natural scene statistics building blocks

/// Mean-subtracted contrast-normalized coefficients of a 0-255 plane, using a
/// 7x7 Gaussian window (sigma 7/6) with replicated borders and C = 1.
/// `local_sigma`, when given, receives the local standard deviation map.
LumaArray mscn(const LumaArray& gray255, LumaArray* local_sigma = nullptr);

/// Half-size bicubic resampling with antialiasing (output ceil(n / 2) per axis).
LumaArray downscale_half(const LumaArray& img);

struct GgdFit {
  double shape = 0.0;     ///< alpha
  double variance = 0.0;  ///< mean(x^2)
};

struct AggdFit {
  double shape = 0.0;
  double mean = 0.0;
  double left_variance = 0.0;
  double right_variance = 0.0;
};

/// Moment-matching GGD fit over the shape grid 0.2:0.001:10.
GgdFit fit_ggd(std::span<const double> x);
/// Moment-matching asymmetric GGD fit over the shape grid 0.2:0.001:10.
AggdFit fit_aggd(std::span<const double> x);

/// The 18 per-scale NSS features of an MSCN field: GGD (shape, variance)
/// followed by AGGD (shape, mean, left var, right var) of the products with
/// the four circularly shifted neighbours (0,1), (1,0), (1,1), (1,-1).
std::array<double, 18> nss_features(const LumaArray& mscn_field);

// ---------------------------------------------------------------------------
// BRISQUE

using BrisqueFeatures = std::array<double, 36>;

BrisqueFeatures brisque_features_luma(const LumaArray& y);

template <typename Scalar>
BrisqueFeatures brisque_features(const RgbImage<Scalar>& img) {
  return brisque_features_luma(luma_of(img));
}

/// Optional linear scorer over BRISQUE features, loaded from a text file.
/// The canonical BRISQUE regressor is not shipped.
struct BrisqueLinearModel {
  Eigen::VectorXd weights = Eigen::VectorXd::Zero(36);
  double bias = 0.0;

  double score(const BrisqueFeatures& f) const;
  static BrisqueLinearModel load(const std::filesystem::path& path);
};

// ---------------------------------------------------------------------------
// NIQE

inline constexpr int kNssDimension = 36;
inline constexpr int kNiqePatchSize = 96;

/// Multivariate Gaussian fit of natural-scene patch features.
struct NssModel {
  std::string kind = "niqe";
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(kNssDimension);
  Eigen::MatrixXd covariance = Eigen::MatrixXd::Zero(kNssDimension, kNssDimension);

  /// Throws ConfigError unless dimensions agree, values are finite and the
  /// covariance is symmetric positive semi-definite.
  void validate() const;

  static NssModel load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
  static NssModel parse(const std::string& text);
  std::string serialize() const;
};

/// Per-patch 36-d features (rows) on a 96x96 grid at two scales. When
/// `sharpness` is given it receives the mean local sigma of each scale-1 patch.
Eigen::MatrixXd niqe_patch_features(const LumaArray& y, std::vector<double>* sharpness = nullptr);

/// sqrt(d' pinv((C_model + C_image) / 2) d), d = mu_model - mu_image.
double niqe_distance(const NssModel& model, const Eigen::VectorXd& image_mean,
                     const Eigen::MatrixXd& image_cov);

double niqe_luma(const LumaArray& y, const NssModel& model);

template <typename Scalar>
double niqe(const RgbImage<Scalar>& img, const NssModel& model) {
  return niqe_luma(luma_of(img), model);
}

/// Fits a model from pristine images, keeping patches whose sharpness
/// exceeds 0.75 of the sharpest patch of their image.
NssModel fit_niqe_model(const std::vector<LumaArray>& pristine);

// ---------------------------------------------------------------------------
// PIQE

struct PiqeResult {
  double score = 100.0;
  int active_blocks = 0;
  int distorted_blocks = 0;
  /// True when no block is spatially active; the score is then 100.
  bool degenerate = true;
};

PiqeResult piqe_luma(const LumaArray& y);

template <typename Scalar>
double piqe(const RgbImage<Scalar>& img) {
  return piqe_luma(luma_of(img)).score;
}

// ---------------------------------------------------------------------------
// Plain statistics (8-bit scale)

double mean_brightness_luma(const LumaArray& y);
double std_dev_luma(const LumaArray& y);
/// Base-2 Shannon entropy of the 256-bin histogram of round(255 y).
double entropy_luma(const LumaArray& y);

template <typename Scalar>
double mean_brightness(const RgbImage<Scalar>& img) {
  return mean_brightness_luma(luma_of(img));
}
template <typename Scalar>
double std_dev(const RgbImage<Scalar>& img) {
  return std_dev_luma(luma_of(img));
}
template <typename Scalar>
double entropy(const RgbImage<Scalar>& img) {
  return entropy_luma(luma_of(img));
}

// ---------------------------------------------------------------------------

struct QualityReport {
  std::optional<double> brisque;
  std::optional<double> niqe;
  double piqe = 100.0;
  bool piqe_degenerate = false;
  double mean_brightness = 0.0;
  double std_dev = 0.0;
  double entropy = 0.0;
  std::optional<double> enhance_millis;
};

struct QualityModels {
  const NssModel* niqe = nullptr;
  const BrisqueLinearModel* brisque = nullptr;
};

/// Every measure that the image size and supplied models allow. NIQE needs a
/// model and a 96x96 image; BRISQUE needs a model and a 32x32 image. PIQE
/// needs 16x16 and throws ParameterError below that.
QualityReport evaluate_quality_luma(const LumaArray& y, const QualityModels& models = {});

template <typename Scalar>
QualityReport evaluate_quality(const RgbImage<Scalar>& img, const QualityModels& models = {}) {
  return evaluate_quality_luma(luma_of(img), models);
}

}  // namespace sena
