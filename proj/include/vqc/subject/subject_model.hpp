#pragma once

#include <array>
#include <vector>

#include "vqc/core/types.hpp"
#include "vqc/netsim/netsim.hpp"
#include "vqc/rng.hpp"

namespace vqc::subject {

/// Psychometric parameters for one rater on one presentation.
struct RaterParams {
  double gain = 1.0;
  double bias = 0.0;
  double noise_sigma = 0.0;
  double stall_penalty_coeff = 10.0;  // score units per log-second
  double context_shift = 8.5;         // applied to golden videos
  bool uniform_random = false;
};

/// Clamped, rounded opinion score in [0,100].
int rate(const RaterParams& params, double latent_quality, std::int64_t stall_total_ms,
         bool is_golden, Rng& rng);

/// Distribution of download conditions across sessions.
struct NetworkSpec {
  double base_rate_median_bps = 25e6;
  double base_rate_log_sigma = 0.9;
  double drops_per_session = 0.5;
  double drop_duration_mean_s = 15.0;
  double drop_factor_max = 0.4;
  double outage_share = 0.2;  // fraction of drops that are full outages
  double jitter_sigma = 0.15;
  double connect_fail_prob = 0.01;
  double horizon_s = 1800.0;
};

/// CPU classes and their stall behaviour. Defaults come from the stall calibration
/// (tools/calibrate_stalls).
struct CpuSpec {
  std::array<double, 3> class_shares{0.62, 0.26, 0.12};
  std::array<double, 3> stall_prob{0.025, 0.43, 0.85};
  std::array<double, 3> stall_log_mu{6.30, 6.30, 6.30};
  double stall_log_sigma = 0.9;
  double load_gain = 1.0;
  double background_load_max = 0.5;

  [[nodiscard]] std::vector<netsim::CpuModel> models() const;
};

struct StallStats {
  double zero_share = 0.0;      // playbacks without any stall
  double under_1s_share = 0.0;  // playbacks with less than 1 s of stalling in total
  std::size_t draws = 0;
};

/// Monte Carlo over the CPU population: class by share, background load
/// uniform on [0, background_load_max], one 10 s video per draw.
StallStats stall_statistics(const CpuSpec& cpu, std::size_t draws, Rng rng, double tick_s = 0.1);

struct PopulationSpec {
  int n_subjects = 4776;

  double share_random_raters = 0.0;
  double share_skippers = 0.02;
  double share_uncorrected_vision = 0.025;
  double share_corrected_worn = 0.35;

  // Eligibility-relevant attributes.
  double share_low_reliability = 0.02;
  double share_returning = 0.01;
  double share_mobile = 0.02;
  double share_tablet = 0.01;
  double share_below_min_resolution = 0.02;
  double share_unsupported_browser = 0.03;
  double share_highres = 0.3115;

  // Demographics.
  double share_female = 0.536;
  std::array<double, 4> age_shares{0.08, 0.47, 0.27, 0.18};
  std::array<double, 3> distance_shares{0.12, 0.70, 0.18};

  // Rater parameter distributions.
  double gain_sigma = 0.08;
  double bias_sigma = 17.0;
  double noise_min = 3.0;
  double noise_max = 9.0;
  // Compliant but careless raters: much noisier, otherwise ordinary.
  double share_erratic = 0.02;
  double erratic_noise_sigma = 35.0;
  std::array<double, 4> age_offsets{-4.0, -1.0, 1.0, 4.0};
  double female_offset = -2.0;
  double stall_penalty_coeff = 14.0;
  double context_shift = 8.5;

  // Pacing.
  double rating_time_median_s = 7.0;
  double rating_time_log_sigma = 0.35;
  double presentation_time_log_sigma = 0.3;
  double skip_rate = 0.25;
  double misreport_rate = 0.0;

  NetworkSpec network;
  CpuSpec cpu;
};

/// Throws ConfigError when a share is outside [0,1] or the behaviour shares exceed 1.
void validate(const PopulationSpec& spec);

struct Population {
  std::vector<core::SubjectProfile> subjects;
  std::vector<netsim::BandwidthModel> bandwidth_models;  // indexed by bandwidth_model_id
  std::vector<netsim::CpuModel> cpu_models;              // indexed by cpu_model_id
};

/// Deterministic in (spec, seed). Categorical attributes are apportioned exactly
/// and assigned by shuffle, so realized shares are within one subject of the spec.
Population spawn_population(const PopulationSpec& spec, Rng rng);

RaterParams rater_params(const core::SubjectProfile& subject, const PopulationSpec& spec);

netsim::BandwidthModel draw_bandwidth_model(const NetworkSpec& spec, Rng& rng);

}  // namespace vqc::subject
