#pragma once

#include <span>
#include <vector>

namespace vqc::stats {

/// Q' = beta2 + (beta1 - beta2) / (1 + exp(-(Q - beta3) / |beta4|))
struct Logistic4Params {
  double beta1 = 0.0;
  double beta2 = 0.0;
  double beta3 = 0.0;
  double beta4 = 1.0;

  [[nodiscard]] double operator()(double q) const;
  [[nodiscard]] std::vector<double> apply(std::span<const double> q) const;
};

struct LogisticFit {
  Logistic4Params params;
  double sse = 0.0;
  double initial_sse = 0.0;
  int iterations = 0;
  bool converged = false;
  bool degenerate = false;  // constant mos or constant predictor
};

struct LogisticOptions {
  int max_iterations = 2000;
  int multistarts = 5;
  double tolerance = 1e-14;
};

/// Least-squares fit by Nelder-Mead with several starts. Throws std::invalid_argument
/// for fewer than five points.
LogisticFit fit_logistic4(std::span<const double> pred, std::span<const double> mos,
                          const LogisticOptions& options = {});

}  // namespace vqc::stats
