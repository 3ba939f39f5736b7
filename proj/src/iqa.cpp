#include "sena/iqa.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>

namespace sena {

namespace {

constexpr int kWindow = 7;
constexpr double kWindowSigma = 7.0 / 6.0;

std::array<double, kWindow> gaussian_taps() {
  std::array<double, kWindow> t{};
  double sum = 0.0;
  for (int i = 0; i < kWindow; ++i) {
    const double d = i - kWindow / 2;
    t[static_cast<std::size_t>(i)] = std::exp(-d * d / (2.0 * kWindowSigma * kWindowSigma));
    sum += t[static_cast<std::size_t>(i)];
  }
  for (double& v : t) v /= sum;
  return t;
}

/// Separable 7-tap Gaussian with replicated borders.
LumaArray gaussian_filter(const LumaArray& in) {
  static const auto taps = gaussian_taps();
  const Index h = in.rows();
  const Index w = in.cols();
  constexpr Index r = kWindow / 2;

  LumaArray tmp(h, w);
  for (Index y = 0; y < h; ++y) {
    for (Index x = 0; x < w; ++x) {
      double acc = 0.0;
      for (Index k = -r; k <= r; ++k) {
        acc += taps[static_cast<std::size_t>(k + r)] * in(y, std::clamp<Index>(x + k, 0, w - 1));
      }
      tmp(y, x) = acc;
    }
  }
  LumaArray out(h, w);
  for (Index y = 0; y < h; ++y) {
    for (Index x = 0; x < w; ++x) {
      double acc = 0.0;
      for (Index k = -r; k <= r; ++k) {
        acc += taps[static_cast<std::size_t>(k + r)] * tmp(std::clamp<Index>(y + k, 0, h - 1), x);
      }
      out(y, x) = acc;
    }
  }
  return out;
}

double cubic(double x) {
  const double a = std::abs(x);
  const double a2 = a * a;
  const double a3 = a2 * a;
  if (a <= 1.0) return 1.5 * a3 - 2.5 * a2 + 1.0;
  if (a <= 2.0) return -0.5 * a3 + 2.5 * a2 - 4.0 * a + 2.0;
  return 0.0;
}

/// Resampling weights for a 0.5 antialiased bicubic resize along one axis,
/// with symmetric boundary reflection.
struct ResizeAxis {
  std::vector<std::vector<std::pair<Index, double>>> taps;
};

ResizeAxis resize_axis(Index in_len) {
  constexpr double scale = 0.5;
  constexpr double kernel_width = 4.0 / scale;
  const Index out_len = (in_len + 1) / 2;
  ResizeAxis ax;
  ax.taps.resize(static_cast<std::size_t>(out_len));
  for (Index o = 0; o < out_len; ++o) {
    // 1-based coordinates
    const double u = static_cast<double>(o + 1) / scale + 0.5 * (1.0 - 1.0 / scale);
    const auto left = static_cast<Index>(std::floor(u - kernel_width / 2.0));
    const int count = static_cast<int>(std::ceil(kernel_width)) + 2;
    double sum = 0.0;
    std::vector<std::pair<Index, double>> t;
    for (int k = 0; k < count; ++k) {
      const Index idx = left + k;
      const double wgt = scale * cubic(scale * (u - static_cast<double>(idx)));
      if (wgt == 0.0) continue;
      // symmetric reflection of the 1-based index into [1, in_len]
      Index m = (idx - 1) % (2 * in_len);
      if (m < 0) m += 2 * in_len;
      const Index src = m < in_len ? m : 2 * in_len - 1 - m;
      t.emplace_back(src, wgt);
      sum += wgt;
    }
    for (auto& p : t) p.second /= sum;
    ax.taps[static_cast<std::size_t>(o)] = std::move(t);
  }
  return ax;
}

const std::vector<double>& shape_grid() {
  static const std::vector<double> grid = [] {
    std::vector<double> g;
    for (int i = 200; i <= 10000; ++i) g.push_back(i / 1000.0);
    return g;
  }();
  return grid;
}

// Gamma(1/a) Gamma(3/a) / Gamma(2/a)^2
const std::vector<double>& ggd_ratio_table() {
  static const std::vector<double> t = [] {
    std::vector<double> r;
    for (double a : shape_grid()) {
      r.push_back(std::tgamma(1.0 / a) * std::tgamma(3.0 / a) / std::pow(std::tgamma(2.0 / a), 2));
    }
    return r;
  }();
  return t;
}

// Gamma(2/a)^2 / (Gamma(1/a) Gamma(3/a))
const std::vector<double>& aggd_ratio_table() {
  static const std::vector<double> t = [] {
    std::vector<double> r;
    for (double a : shape_grid()) {
      r.push_back(std::pow(std::tgamma(2.0 / a), 2) / (std::tgamma(1.0 / a) * std::tgamma(3.0 / a)));
    }
    return r;
  }();
  return t;
}

double grid_argmin(const std::vector<double>& table, double target) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < table.size(); ++i) {
    const double d = std::abs(table[i] - target);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return shape_grid()[best];
}

/// Circular shift by (dy, dx): out(y, x) = in((y - dy) mod h, (x - dx) mod w).
LumaArray circshift(const LumaArray& in, Index dy, Index dx) {
  const Index h = in.rows();
  const Index w = in.cols();
  LumaArray out(h, w);
  for (Index y = 0; y < h; ++y) {
    const Index sy = ((y - dy) % h + h) % h;
    for (Index x = 0; x < w; ++x) out(y, x) = in(sy, ((x - dx) % w + w) % w);
  }
  return out;
}

Eigen::MatrixXd pseudo_inverse_symmetric(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double tol = static_cast<double>(m.rows()) * std::numeric_limits<double>::epsilon() *
                     ev.cwiseAbs().maxCoeff();
  Eigen::VectorXd inv = ev;
  for (Index i = 0; i < inv.size(); ++i) inv(i) = std::abs(ev(i)) > tol ? 1.0 / ev(i) : 0.0;
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

void require_min_size(const LumaArray& y, Index n, const char* what) {
  if (y.rows() < n || y.cols() < n) {
    throw ParameterError(std::string(what) + " needs an image of at least " + std::to_string(n) +
                         "x" + std::to_string(n));
  }
}

Eigen::VectorXd column_mean(const Eigen::MatrixXd& rows) { return rows.colwise().mean().transpose(); }

Eigen::MatrixXd column_cov(const Eigen::MatrixXd& rows) {
  const Eigen::MatrixXd centered = rows.rowwise() - rows.colwise().mean();
  const double denom = std::max<double>(1.0, static_cast<double>(rows.rows()) - 1.0);
  return centered.transpose() * centered / denom;
}

}  // namespace

LumaArray mscn(const LumaArray& gray255, LumaArray* local_sigma) {
  const LumaArray mu = gaussian_filter(gray255);
  const LumaArray sq = gaussian_filter(gray255.square());
  LumaArray sigma = (sq - mu.square()).abs().sqrt();
  LumaArray out = (gray255 - mu) / (sigma + 1.0);
  if (local_sigma != nullptr) *local_sigma = std::move(sigma);
  return out;
}

LumaArray downscale_half(const LumaArray& img) {
  const ResizeAxis ry = resize_axis(img.rows());
  const ResizeAxis rx = resize_axis(img.cols());
  const auto oh = static_cast<Index>(ry.taps.size());
  const auto ow = static_cast<Index>(rx.taps.size());

  LumaArray rows(oh, img.cols());
  for (Index o = 0; o < oh; ++o) {
    rows.row(o).setZero();
    for (const auto& [src, wgt] : ry.taps[static_cast<std::size_t>(o)]) rows.row(o) += wgt * img.row(src);
  }
  LumaArray out(oh, ow);
  for (Index o = 0; o < ow; ++o) {
    out.col(o).setZero();
    for (const auto& [src, wgt] : rx.taps[static_cast<std::size_t>(o)]) out.col(o) += wgt * rows.col(src);
  }
  return out;
}

GgdFit fit_ggd(std::span<const double> x) {
  double sq = 0.0;
  double ab = 0.0;
  for (double v : x) {
    sq += v * v;
    ab += std::abs(v);
  }
  const auto n = static_cast<double>(std::max<std::size_t>(x.size(), 1));
  sq /= n;
  ab /= n;
  if (!(sq > 0.0)) return {2.0, 0.0};
  return {grid_argmin(ggd_ratio_table(), sq / (ab * ab)), sq};
}

AggdFit fit_aggd(std::span<const double> x) {
  double left_sq = 0.0;
  double right_sq = 0.0;
  std::size_t left_n = 0;
  std::size_t right_n = 0;
  double ab = 0.0;
  double sq = 0.0;
  for (double v : x) {
    if (v < 0.0) {
      left_sq += v * v;
      ++left_n;
    } else if (v > 0.0) {
      right_sq += v * v;
      ++right_n;
    }
    ab += std::abs(v);
    sq += v * v;
  }
  const auto n = static_cast<double>(std::max<std::size_t>(x.size(), 1));
  const double left_std = left_n > 0 ? std::sqrt(left_sq / static_cast<double>(left_n)) : 0.0;
  const double right_std = right_n > 0 ? std::sqrt(right_sq / static_cast<double>(right_n)) : 0.0;
  if (!(sq > 0.0)) return {2.0, 0.0, 0.0, 0.0};

  constexpr double tiny = 1e-12;
  const double gamma_hat = std::max(left_std, tiny) / std::max(right_std, tiny);
  const double r_hat = (ab / n) * (ab / n) / (sq / n);
  const double g2 = gamma_hat * gamma_hat;
  const double r_norm = r_hat * (g2 * gamma_hat + 1.0) * (gamma_hat + 1.0) / ((g2 + 1.0) * (g2 + 1.0));
  const double alpha = grid_argmin(aggd_ratio_table(), r_norm);

  const double c = std::sqrt(std::tgamma(1.0 / alpha) / std::tgamma(3.0 / alpha));
  const double mean =
      (right_std - left_std) * (std::tgamma(2.0 / alpha) / std::tgamma(1.0 / alpha)) * c;
  return {alpha, mean, left_std * left_std, right_std * right_std};
}

std::array<double, 18> nss_features(const LumaArray& field) {
  std::array<double, 18> f{};
  const std::span<const double> all(field.data(), static_cast<std::size_t>(field.size()));
  const GgdFit g = fit_ggd(all);
  f[0] = g.shape;
  f[1] = g.variance;
  static constexpr std::array<std::array<Index, 2>, 4> shifts{{{0, 1}, {1, 0}, {1, 1}, {-1, 1}}};
  std::size_t k = 2;
  for (const auto& s : shifts) {
    const LumaArray pair = field * circshift(field, s[0], s[1]);
    const AggdFit a = fit_aggd(std::span<const double>(pair.data(), static_cast<std::size_t>(pair.size())));
    f[k++] = a.shape;
    f[k++] = a.mean;
    f[k++] = a.left_variance;
    f[k++] = a.right_variance;
  }
  return f;
}

BrisqueFeatures brisque_features_luma(const LumaArray& y) {
  require_min_size(y, 32, "BRISQUE");
  BrisqueFeatures out{};
  LumaArray img = y * 255.0;
  for (int scale = 0; scale < 2; ++scale) {
    const auto f = nss_features(mscn(img));
    std::copy(f.begin(), f.end(), out.begin() + 18 * scale);
    if (scale == 0) img = downscale_half(img);
  }
  return out;
}

double BrisqueLinearModel::score(const BrisqueFeatures& f) const {
  return weights.dot(Eigen::Map<const Eigen::VectorXd>(f.data(), 36)) + bias;
}

BrisqueLinearModel BrisqueLinearModel::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open BRISQUE model " + path.string());
  BrisqueLinearModel m;
  std::string word;
  std::string kind;
  int dim = 0;
  bool have_weights = false;
  bool have_bias = false;
  while (in >> word) {
    if (!word.empty() && word[0] == '#') {
      std::getline(in, word);
    } else if (word == "kind") {
      in >> kind;
    } else if (word == "dimension") {
      in >> dim;
    } else if (word == "weights") {
      for (int i = 0; i < 36; ++i) in >> m.weights(i);
      have_weights = static_cast<bool>(in);
    } else if (word == "bias") {
      in >> m.bias;
      have_bias = static_cast<bool>(in);
    } else {
      throw ConfigError("unexpected token '" + word + "' in BRISQUE model");
    }
  }
  if (kind != "brisque_linear" || dim != 36 || !have_weights || !have_bias ||
      !m.weights.allFinite() || !std::isfinite(m.bias)) {
    throw ConfigError("malformed BRISQUE model " + path.string());
  }
  return m;
}

// ---------------------------------------------------------------------------
// NssModel

void NssModel::validate() const {
  if (kind != "niqe") throw ConfigError("unsupported NSS model kind '" + kind + "'");
  if (mean.size() != kNssDimension || covariance.rows() != kNssDimension ||
      covariance.cols() != kNssDimension) {
    throw ConfigError("NSS model must be 36-dimensional");
  }
  if (!mean.allFinite() || !covariance.allFinite()) throw ConfigError("NSS model has non-finite values");
  const double scale = std::max(1.0, covariance.cwiseAbs().maxCoeff());
  if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw ConfigError("NSS model covariance is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(covariance, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-8 * scale) {
    throw ConfigError("NSS model covariance is not positive semi-definite");
  }
}

std::string NssModel::serialize() const {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "# natural scene statistics model\n";
  os << "kind " << kind << "\n";
  os << "dimension " << mean.size() << "\n";
  os << "mean\n";
  for (Index i = 0; i < mean.size(); ++i) os << (i ? " " : "") << mean(i);
  os << "\ncovariance\n";
  for (Index r = 0; r < covariance.rows(); ++r) {
    for (Index c = 0; c < covariance.cols(); ++c) os << (c ? " " : "") << covariance(r, c);
    os << "\n";
  }
  return os.str();
}

NssModel NssModel::parse(const std::string& text) {
  std::istringstream in(text);
  NssModel m;
  m.kind.clear();
  std::string word;
  long dim = -1;
  bool have_mean = false;
  bool have_cov = false;
  while (in >> word) {
    if (word[0] == '#') {
      std::getline(in, word);
    } else if (word == "kind") {
      in >> m.kind;
    } else if (word == "dimension") {
      in >> dim;
      if (!in || dim != kNssDimension) throw ConfigError("NSS model dimension must be 36");
    } else if (word == "mean") {
      if (dim < 0) throw ConfigError("NSS model: dimension must precede mean");
      for (long i = 0; i < dim; ++i) in >> m.mean(i);
      have_mean = static_cast<bool>(in);
    } else if (word == "covariance") {
      if (dim < 0) throw ConfigError("NSS model: dimension must precede covariance");
      for (long r = 0; r < dim; ++r) {
        for (long c = 0; c < dim; ++c) in >> m.covariance(r, c);
      }
      have_cov = static_cast<bool>(in);
    } else {
      throw ConfigError("NSS model: unexpected token '" + word + "'");
    }
  }
  if (!have_mean || !have_cov) throw ConfigError("NSS model is truncated");
  m.validate();
  return m;
}

NssModel NssModel::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open NSS model " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void NssModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write NSS model " + path.string());
  out << serialize();
}

// ---------------------------------------------------------------------------
// NIQE

Eigen::MatrixXd niqe_patch_features(const LumaArray& y, std::vector<double>* sharpness) {
  require_min_size(y, kNiqePatchSize, "NIQE");
  const Index rows = y.rows() / kNiqePatchSize * kNiqePatchSize;
  const Index cols = y.cols() / kNiqePatchSize * kNiqePatchSize;
  const Index pr = rows / kNiqePatchSize;
  const Index pc = cols / kNiqePatchSize;

  Eigen::MatrixXd feats(pr * pc, kNssDimension);
  if (sharpness != nullptr) sharpness->assign(static_cast<std::size_t>(pr * pc), 0.0);

  LumaArray img = y.topLeftCorner(rows, cols) * 255.0;
  for (int scale = 0; scale < 2; ++scale) {
    const Index block = kNiqePatchSize >> scale;
    LumaArray sigma;
    const LumaArray field = mscn(img, &sigma);
    for (Index by = 0; by < pr; ++by) {
      for (Index bx = 0; bx < pc; ++bx) {
        const Index patch = by * pc + bx;
        const LumaArray blk = field.block(by * block, bx * block, block, block);
        const auto f = nss_features(blk);
        for (int k = 0; k < 18; ++k) feats(patch, 18 * scale + k) = f[static_cast<std::size_t>(k)];
        if (scale == 0 && sharpness != nullptr) {
          (*sharpness)[static_cast<std::size_t>(patch)] =
              sigma.block(by * block, bx * block, block, block).mean();
        }
      }
    }
    if (scale == 0) img = downscale_half(img);
  }
  return feats;
}

double niqe_distance(const NssModel& model, const Eigen::VectorXd& image_mean,
                     const Eigen::MatrixXd& image_cov) {
  const Eigen::VectorXd d = model.mean - image_mean;
  const Eigen::MatrixXd pinv = pseudo_inverse_symmetric(0.5 * (model.covariance + image_cov));
  return std::sqrt(std::max(0.0, d.dot(pinv * d)));
}

double niqe_luma(const LumaArray& y, const NssModel& model) {
  const Eigen::MatrixXd f = niqe_patch_features(y);
  return niqe_distance(model, column_mean(f), column_cov(f));
}

NssModel fit_niqe_model(const std::vector<LumaArray>& pristine) {
  constexpr double kSharpnessFraction = 0.75;
  // local deviation (8-bit scale) below which a patch counts as flat
  constexpr double kMinSharpness = 1e-3;
  std::vector<Eigen::RowVectorXd> kept;
  for (const auto& img : pristine) {
    std::vector<double> sharp;
    const Eigen::MatrixXd f = niqe_patch_features(img, &sharp);
    const double mx = *std::max_element(sharp.begin(), sharp.end());
    for (Index i = 0; i < f.rows(); ++i) {
      if (sharp[static_cast<std::size_t>(i)] > std::max(kSharpnessFraction * mx, kMinSharpness)) kept.push_back(f.row(i));
    }
  }
  if (kept.size() < 2) throw ConfigError("too few sharp pristine patches to fit an NSS model");
  Eigen::MatrixXd rows(static_cast<Index>(kept.size()), kNssDimension);
  for (std::size_t i = 0; i < kept.size(); ++i) rows.row(static_cast<Index>(i)) = kept[i];
  NssModel m;
  m.mean = column_mean(rows);
  m.covariance = column_cov(rows);
  m.covariance = 0.5 * (m.covariance + m.covariance.transpose()).eval();
  return m;
}

// ---------------------------------------------------------------------------
// PIQE

namespace {

constexpr Index kPiqeBlock = 16;
constexpr double kActivityThreshold = 0.1;
constexpr double kImpairedThreshold = 0.1;
constexpr Index kSegmentWindow = 6;

double population_std(const double* v, Index n, Index stride) {
  double mean = 0.0;
  for (Index i = 0; i < n; ++i) mean += v[i * stride];
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (Index i = 0; i < n; ++i) var += (v[i * stride] - mean) * (v[i * stride] - mean);
  return std::sqrt(var / static_cast<double>(n));
}

/// A block shows a noticeable artifact when any 6-pixel segment of one of its
/// four edges is nearly flat.
bool noticeable_distortion(const LumaArray& blk) {
  const Index n = blk.rows();
  const Index segments = n - kSegmentWindow + 1;
  for (Index s = 0; s < segments; ++s) {
    const double top = population_std(&blk(0, s), kSegmentWindow, 1);
    const double right = population_std(&blk(s, n - 1), kSegmentWindow, blk.cols());
    const double bottom = population_std(&blk(n - 1, s), kSegmentWindow, 1);
    const double left = population_std(&blk(s, 0), kSegmentWindow, blk.cols());
    if (top < kImpairedThreshold || right < kImpairedThreshold || bottom < kImpairedThreshold ||
        left < kImpairedThreshold) {
      return true;
    }
  }
  return false;
}

/// Ratio of the two center columns' spread to the surround's spread.
double center_surround_deviation(const LumaArray& blk) {
  const Index n = blk.cols();
  const Index c1 = n / 2 - 1;
  std::vector<double> center;
  std::vector<double> surround;
  for (Index y = 0; y < blk.rows(); ++y) {
    for (Index x = 0; x < n; ++x) {
      (x == c1 || x == c1 + 1 ? center : surround).push_back(blk(y, x));
    }
  }
  const double cs = population_std(center.data(), static_cast<Index>(center.size()), 1);
  const double ss = population_std(surround.data(), static_cast<Index>(surround.size()), 1);
  const double r = cs / ss;
  return std::isfinite(r) ? r : 0.0;
}

}  // namespace

PiqeResult piqe_luma(const LumaArray& y) {
  require_min_size(y, kPiqeBlock, "PIQE");
  const LumaArray field = mscn(y * 255.0);
  const Index rows = y.rows() / kPiqeBlock * kPiqeBlock;
  const Index cols = y.cols() / kPiqeBlock * kPiqeBlock;

  PiqeResult res;
  double distortion = 0.0;
  for (Index by = 0; by < rows; by += kPiqeBlock) {
    for (Index bx = 0; bx < cols; bx += kPiqeBlock) {
      const LumaArray blk = field.block(by, bx, kPiqeBlock, kPiqeBlock);
      const double var = (blk - blk.mean()).square().mean();
      if (!(var > kActivityThreshold)) continue;
      ++res.active_blocks;
      const bool artifact = noticeable_distortion(blk);
      const double sigma = std::sqrt(var);
      const double csd = center_surround_deviation(blk);
      const double beta = std::abs(sigma - csd) / std::max(sigma, csd);
      const bool noise = sigma > 2.0 * beta;
      if (artifact) distortion += (1.0 - var) * (1.0 - var);
      if (noise) distortion += var * var;
      if (artifact || noise) ++res.distorted_blocks;
    }
  }
  constexpr double c = 1.0;
  res.degenerate = res.active_blocks == 0;
  res.score = std::clamp((distortion + c) / (c + res.active_blocks) * 100.0, 0.0, 100.0);
  return res;
}

// ---------------------------------------------------------------------------
// Plain statistics

double mean_brightness_luma(const LumaArray& y) { return y.mean() * 255.0; }

double std_dev_luma(const LumaArray& y) {
  const double m = y.mean();
  return std::sqrt((y - m).square().mean()) * 255.0;
}

double entropy_luma(const LumaArray& y) {
  std::array<double, 256> hist{};
  for (Index i = 0; i < y.size(); ++i) {
    const auto k = static_cast<std::size_t>(std::lround(std::clamp(y.data()[i], 0.0, 1.0) * 255.0));
    hist[k] += 1.0;
  }
  const auto n = static_cast<double>(y.size());
  double h = 0.0;
  for (double c : hist) {
    if (c > 0.0) {
      const double p = c / n;
      h -= p * std::log2(p);
    }
  }
  return std::max(0.0, h);
}

QualityReport evaluate_quality_luma(const LumaArray& y, const QualityModels& models) {
  QualityReport r;
  const auto pq = piqe_luma(y);
  r.piqe = pq.score;
  r.piqe_degenerate = pq.degenerate;
  r.mean_brightness = mean_brightness_luma(y);
  r.std_dev = std_dev_luma(y);
  r.entropy = entropy_luma(y);
  if (models.niqe != nullptr && y.rows() >= kNiqePatchSize && y.cols() >= kNiqePatchSize) {
    r.niqe = niqe_luma(y, *models.niqe);
  }
  if (models.brisque != nullptr && y.rows() >= 32 && y.cols() >= 32) {
    r.brisque = models.brisque->score(brisque_features_luma(y));
  }
  return r;
}

}  // namespace sena
