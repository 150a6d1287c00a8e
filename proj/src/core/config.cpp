#include "vqc/core/config.hpp"

#include <sstream>

namespace vqc::core {

namespace {

template <class T>
void require_positive(std::vector<std::string>& out, const char* name, T value) {
  if (!(value > T{0})) {
    std::ostringstream msg;
    msg << name << " must be positive (got " << value << ")";
    out.push_back(msg.str());
  }
}

}  // namespace

std::vector<std::string> validate_config(const StudyConfig& cfg) {
  std::vector<std::string> out;
  const int sum = cfg.n_golden + cfg.n_random + cfg.n_repeats + cfg.n_common;
  if (sum != cfg.n_test) {
    std::ostringstream msg;
    msg << "composition sum " << sum << " ≠ " << cfg.n_test;
    out.push_back(msg.str());
  }
  if (cfg.n_fhd_if_highres > cfg.n_random) {
    out.push_back("n_fhd_if_highres exceeds n_random");
  }
  if (cfg.n_repeats > cfg.n_random) out.push_back("n_repeats exceeds n_random");
  for (auto [name, v] : {std::pair{"n_golden", cfg.n_golden}, std::pair{"n_common", cfg.n_common},
                         std::pair{"n_repeats", cfg.n_repeats},
                         std::pair{"n_fhd_if_highres", cfg.n_fhd_if_highres}}) {
    if (v < 0) out.push_back(std::string(name) + " must be non-negative");
  }
  require_positive(out, "n_training", cfg.n_training);
  require_positive(out, "n_test", cfg.n_test);
  require_positive(out, "n_random", cfg.n_random);
  require_positive(out, "prefetch_lead_s", cfg.prefetch_lead_s);
  require_positive(out, "retry_gap_s", cfg.retry_gap_s);
  require_positive(out, "halt_window_s", cfg.halt_window_s);
  require_positive(out, "tick_s", cfg.tick_s);
  require_positive(out, "session_cap_min", cfg.session_cap_min);
  require_positive(out, "checkpoint1_min", cfg.checkpoint1_min);
  require_positive(out, "checkpoint2_min", cfg.checkpoint2_min);
  require_positive(out, "overview_s", cfg.overview_s);
  require_positive(out, "instructions_s", cfg.instructions_s);
  require_positive(out, "training_fail_single_s", cfg.training_fail_single_s);
  require_positive(out, "training_fail_multi_s", cfg.training_fail_multi_s);
  require_positive(out, "training_fail_multi_count", cfg.training_fail_multi_count);
  require_positive(out, "stall_session_reject_fraction", cfg.stall_session_reject_fraction);
  require_positive(out, "bt500_reject_fraction", cfg.bt500_reject_fraction);
  require_positive(out, "bt500_balance_ratio", cfg.bt500_balance_ratio);
  require_positive(out, "repeat_min_separation", cfg.repeat_min_separation);
  if (cfg.max_retries < 0) out.push_back("max_retries must be non-negative");
  if (cfg.reload_on_halt_max < 0) out.push_back("reload_on_halt_max must be non-negative");
  if (cfg.stall_session_reject_fraction > 1.0) {
    out.push_back("stall_session_reject_fraction must be at most 1");
  }
  if (cfg.checkpoint1_min >= cfg.checkpoint2_min ||
      cfg.checkpoint2_min >= cfg.session_cap_min) {
    out.push_back("checkpoints must satisfy checkpoint1 < checkpoint2 < session cap");
  }
  if (cfg.repeat_min_separation >= cfg.n_test) {
    out.push_back("repeat_min_separation must be smaller than n_test");
  }
  return out;
}

}  // namespace vqc::core
