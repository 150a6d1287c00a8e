#pragma once

#include <optional>
#include <span>

namespace vqc::stats {

double mean(std::span<const double> x);
/// n-1 denominator; 0 for fewer than two samples.
double sample_std(std::span<const double> x);
double median(std::span<const double> x);

/// m4 / m2^2 with population moments about the mean. Empty for n < 2 or zero variance.
std::optional<double> kurtosis_beta2(std::span<const double> x);

}  // namespace vqc::stats
