#include "sena/wilcoxon.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sena {

std::vector<double> signed_rank_abs_ranks(std::span<const double> diffs) {
  const std::size_t n = diffs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return std::abs(diffs[i]) < std::abs(diffs[j]);
  });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && std::abs(diffs[order[j + 1]]) == std::abs(diffs[order[i]])) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

double wilcoxon_exact_p(std::span<const double> ranks, double w_plus) {
  // Averaged ranks are multiples of 1/2, so doubled ranks are integers.
  std::vector<int> twice;
  twice.reserve(ranks.size());
  int total = 0;
  for (double r : ranks) {
    twice.push_back(static_cast<int>(std::lround(2.0 * r)));
    total += twice.back();
  }
  std::vector<double> count(static_cast<std::size_t>(total) + 1, 0.0);
  count[0] = 1.0;
  int reach = 0;
  for (int r : twice) {
    for (int s = reach; s >= 0; --s) count[static_cast<std::size_t>(s + r)] += count[static_cast<std::size_t>(s)];
    reach += r;
  }
  const auto observed = static_cast<int>(std::lround(2.0 * w_plus));
  double lower = 0.0;
  double upper = 0.0;
  for (int s = 0; s <= total; ++s) {
    if (s <= observed) lower += count[static_cast<std::size_t>(s)];
    if (s >= observed) upper += count[static_cast<std::size_t>(s)];
  }
  const double all = std::ldexp(1.0, static_cast<int>(ranks.size()));
  return std::min(1.0, 2.0 * std::min(lower, upper) / all);
}

double wilcoxon_normal_p(std::span<const double> ranks, double w_plus) {
  const auto n = static_cast<double>(ranks.size());
  const double mean = n * (n + 1.0) / 4.0;
  double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0;

  std::vector<double> sorted(ranks.begin(), ranks.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const auto t = static_cast<double>(j - i);
    var -= (t * t * t - t) / 48.0;
    i = j;
  }
  if (!(var > 0.0)) return 1.0;
  const double z = std::max(0.0, std::abs(w_plus - mean) - 0.5) / std::sqrt(var);
  return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("wilcoxon: samples differ in length");
  std::vector<double> d;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    if (diff != 0.0) d.push_back(diff);
  }
  if (d.size() < 5) {
    throw InsufficientDataError("wilcoxon: fewer than 5 non-zero paired differences");
  }
  const auto ranks = signed_rank_abs_ranks(d);
  WilcoxonResult res;
  res.n = static_cast<int>(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] > 0.0) res.statistic += ranks[i];
  }
  res.exact = res.n <= kWilcoxonExactLimit;
  res.p_two_sided = res.exact ? wilcoxon_exact_p(ranks, res.statistic)
                              : wilcoxon_normal_p(ranks, res.statistic);
  return res;
}

}  // namespace sena
