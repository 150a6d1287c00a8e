// Grid search for the per-class CPU stall constants that reproduce the
// playback stall statistics (77% of videos without stalls, 92% under 1 s).
// The winning constants are the CpuSpec defaults.
#include <cmath>
#include <cstdio>
#include <vector>

#include "vqc/subject/subject_model.hpp"

int main(int argc, char** argv) {
  const std::size_t draws = argc > 1 ? std::stoul(argv[1]) : 200000;
  constexpr double kZeroTarget = 0.77;
  constexpr double kUnderTarget = 0.92;

  vqc::subject::CpuSpec spec;
  // Slow machines stall on most videos; that class is what the stall-heavy
  // screening stage removes, so its rate is held fixed.
  const double slow = spec.stall_prob[2];

  double best_err = 1e9;
  vqc::subject::CpuSpec best = spec;
  for (double fast = 0.0; fast <= 0.15 + 1e-9; fast += 0.005) {
    for (double medium = 0.10; medium <= 0.50 + 1e-9; medium += 0.01) {
      const double stalled = spec.class_shares[0] * fast + spec.class_shares[1] * medium +
                             spec.class_shares[2] * slow;
      // Coarse screen on the zero-stall share, which does not depend on durations.
      if (std::fabs(1.0 - stalled - kZeroTarget) > 0.004) continue;
      for (double mu = 5.5; mu <= 7.5 + 1e-9; mu += 0.05) {
        vqc::subject::CpuSpec c = spec;
        c.stall_prob = {fast, medium, slow};
        c.stall_log_mu = {mu, mu, mu};
        const auto s = vqc::subject::stall_statistics(c, draws / 10, vqc::Rng(17));
        const double err = std::pow(s.zero_share - kZeroTarget, 2) +
                           std::pow(s.under_1s_share - kUnderTarget, 2);
        if (err < best_err) {
          best_err = err;
          best = c;
        }
      }
    }
  }
  const auto check = vqc::subject::stall_statistics(best, draws, vqc::Rng(2018));
  std::printf("stall_prob   = %.3f, %.3f, %.3f\n", best.stall_prob[0], best.stall_prob[1],
              best.stall_prob[2]);
  std::printf("stall_log_mu = %.2f\n", best.stall_log_mu[0]);
  std::printf("zero-stall share %.4f, under-1s share %.4f over %zu draws\n", check.zero_share,
              check.under_1s_share, check.draws);
  return 0;
}
