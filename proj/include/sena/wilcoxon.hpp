// Paired Wilcoxon signed-rank test.
#pragma once

#include <span>
#include <stdexcept>
#include <vector>

namespace sena {

struct InsufficientDataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WilcoxonResult {
  double statistic = 0.0;  ///< W+, sum of ranks of positive differences
  double p_two_sided = 1.0;
  int n = 0;               ///< non-zero differences used
  bool exact = false;
};

/// Largest n (non-zero differences) for which the exact null distribution is
/// enumerated; beyond it the tie- and continuity-corrected normal
/// approximation is used.
inline constexpr int kWilcoxonExactLimit = 15;

/// Average ranks (1-based) of |d| for the given non-zero differences.
std::vector<double> signed_rank_abs_ranks(std::span<const double> diffs);

/// Test of a - b. Zero differences are dropped; fewer than 5 remaining throws
/// InsufficientDataError. Throws std::invalid_argument on length mismatch.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

/// Exact two-sided p for a given set of (possibly tied, averaged) ranks and
/// observed W+.
double wilcoxon_exact_p(std::span<const double> ranks, double w_plus);

/// Normal approximation with tie and continuity correction.
double wilcoxon_normal_p(std::span<const double> ranks, double w_plus);

}  // namespace sena
