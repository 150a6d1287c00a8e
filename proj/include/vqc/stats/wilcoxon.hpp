#pragma once

#include <span>

namespace vqc::stats {

enum class WilcoxonMethod { automatic, exact, normal };

struct WilcoxonResult {
  double p_value = 1.0;
  double w_plus = 0.0;
  int n_used = 0;  // pairs left after dropping zero differences
  bool exact = false;
};

/// Two-sided paired signed-rank test. Automatic mode is exact up to 25 non-zero
/// differences and uses the tie-corrected normal approximation with continuity
/// correction beyond that.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                    WilcoxonMethod method = WilcoxonMethod::automatic);

}  // namespace vqc::stats
