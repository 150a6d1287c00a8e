#pragma once

#include <optional>
#include <span>
#include <vector>

namespace vqc::stats {

/// 1-based ranks; tied values share the average of their positions.
std::vector<double> average_ranks(std::span<const double> x);

/// Spearman rank correlation. Empty when either input is constant.
/// Throws std::invalid_argument on length mismatch or fewer than two points.
std::optional<double> srocc(std::span<const double> x, std::span<const double> y);

/// Pearson correlation. Empty when either input is constant.
std::optional<double> plcc(std::span<const double> x, std::span<const double> y);

double rmse(std::span<const double> x, std::span<const double> y);

struct MetricTriple {
  double plcc = 0.0;
  double srocc = 0.0;
  double rmse = 0.0;
};

}  // namespace vqc::stats
