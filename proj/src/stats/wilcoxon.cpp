#include "vqc/stats/wilcoxon.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "vqc/stats/correlation.hpp"

namespace vqc::stats {

namespace {

/// Null distribution of 2*W+ over all 2^n sign patterns, given doubled ranks.
std::vector<double> exact_counts(const std::vector<int>& doubled_ranks) {
  int total = 0;
  for (int r : doubled_ranks) total += r;
  std::vector<double> ways(static_cast<std::size_t>(total) + 1, 0.0);
  ways[0] = 1.0;
  int reach = 0;
  for (int r : doubled_ranks) {
    for (int s = reach; s >= 0; --s) {
      if (ways[static_cast<std::size_t>(s)] != 0.0) {
        ways[static_cast<std::size_t>(s + r)] += ways[static_cast<std::size_t>(s)];
      }
    }
    reach += r;
  }
  return ways;
}

}  // namespace

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                    WilcoxonMethod method) {
  if (a.size() != b.size()) throw std::invalid_argument("wilcoxon inputs differ in length");
  std::vector<double> diff;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    if (d != 0.0) diff.push_back(d);
  }
  WilcoxonResult res;
  res.n_used = static_cast<int>(diff.size());
  if (diff.empty()) return res;

  std::vector<double> mag(diff.size());
  std::transform(diff.begin(), diff.end(), mag.begin(), [](double d) { return std::fabs(d); });
  const auto ranks = average_ranks(mag);
  for (std::size_t i = 0; i < diff.size(); ++i) {
    if (diff[i] > 0.0) res.w_plus += ranks[i];
  }
  const double n = static_cast<double>(diff.size());

  const bool exact = method == WilcoxonMethod::exact ||
                     (method == WilcoxonMethod::automatic && diff.size() <= 25);
  res.exact = exact;
  if (exact) {
    std::vector<int> doubled(ranks.size());
    std::transform(ranks.begin(), ranks.end(), doubled.begin(),
                   [](double r) { return static_cast<int>(std::lround(2.0 * r)); });
    const auto ways = exact_counts(doubled);
    const auto w2 = static_cast<std::size_t>(std::lround(2.0 * res.w_plus));
    double total = 0.0, lower = 0.0, upper = 0.0;
    for (std::size_t s = 0; s < ways.size(); ++s) {
      total += ways[s];
      if (s <= w2) lower += ways[s];
      if (s >= w2) upper += ways[s];
    }
    res.p_value = std::min(1.0, 2.0 * std::min(lower, upper) / total);
    return res;
  }

  std::map<double, int> ties;
  for (double r : ranks) ++ties[r];
  double tie_term = 0.0;
  for (const auto& [r, t] : ties) tie_term += static_cast<double>(t) * t * t - t;
  const double mu = n * (n + 1.0) / 4.0;
  const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
  if (var <= 0.0) return res;
  const double z = std::max(0.0, std::fabs(res.w_plus - mu) - 0.5) / std::sqrt(var);
  res.p_value = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  return res;
}

}  // namespace vqc::stats
