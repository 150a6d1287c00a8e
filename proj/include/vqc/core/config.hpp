#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace vqc::core {

/// Session protocol constants. Defaults are the values the crowdsourced study ran with.
struct StudyConfig {
  int n_training = 7;
  int n_test = 43;
  int n_golden = 4;
  int n_random = 31;
  int n_fhd_if_highres = 18;
  int n_repeats = 4;
  int n_common = 4;

  double prefetch_lead_s = 30.0;
  double retry_gap_s = 10.0;
  int max_retries = 2;
  int reload_on_halt_max = 1;
  double halt_window_s = 10.0;
  double tick_s = 0.1;

  double session_cap_min = 30.0;
  double checkpoint1_min = 10.0;
  double checkpoint2_min = 20.0;
  double overview_s = 30.0;
  double instructions_s = 60.0;

  double training_fail_single_s = 15.0;
  double training_fail_multi_s = 12.0;
  int training_fail_multi_count = 3;

  double stall_session_reject_fraction = 0.75;
  double bt500_reject_fraction = 0.05;
  double bt500_balance_ratio = 0.3;

  int repeat_min_separation = 8;
  std::uint64_t rng_seed = 0x5EED2018ULL;
};

/// Every violated invariant as a human-readable message; empty means valid.
std::vector<std::string> validate_config(const StudyConfig& cfg);

}  // namespace vqc::core
