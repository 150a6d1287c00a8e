#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "vqc/core/config.hpp"
#include "vqc/core/types.hpp"
#include "vqc/rng.hpp"

namespace vqc::netsim {

struct DropEvent {
  double start_s = 0.0;
  double duration_s = 0.0;
  double rate_factor = 0.0;  // in [0,1]; 0 is a full outage
};

/// Download bandwidth seen by one session. Time is session time in seconds.
struct BandwidthModel {
  double base_rate_bps = 20e6;
  std::vector<DropEvent> drop_events;
  double jitter_sigma = 0.0;
  double connect_fail_prob = 0.0;
  /// Optional piecewise-constant trace (t_s, rate_bps); overrides base_rate when set.
  std::vector<std::pair<double, double>> trace;

  /// Deterministic rate at time t, before jitter.
  [[nodiscard]] double rate_at(double t_s) const;
  [[nodiscard]] bool in_outage(double t_s) const { return rate_at(t_s) <= 0.0; }
};

/// Validates base_rate > 0 and rate factors in [0,1]; throws ConfigError.
void validate(const BandwidthModel& bw);

/// Reads a `t_s,rate_bps` trace; rows must be time-ordered.
BandwidthModel load_bandwidth_trace(const std::filesystem::path& path);

enum class CpuClass { fast, medium, slow };

struct CpuModel {
  CpuClass cpu_class = CpuClass::fast;
  double stall_prob_per_video = 0.0;
  double stall_log_mu = 6.0;     // log-ms
  double stall_log_sigma = 1.0;  // log-ms
  /// Stall duration multiplier is (1 + load_gain * background_load).
  double load_gain = 1.0;
};

void validate(const CpuModel& cpu);

enum class LoadFailure { connect_failed, halted_twice, session_timeout };

struct LoadOutcome {
  bool connected = false;
  int attempts = 0;
  int reloads = 0;
  std::optional<double> ready_at_s;
  std::optional<LoadFailure> terminated_reason;

  [[nodiscard]] bool ready_by(double t_s) const { return ready_at_s && *ready_at_s <= t_s; }
};

/// Protocol timing used by the preload simulation.
struct PreloadParams {
  double prefetch_lead_s = 30.0;
  double retry_gap_s = 10.0;
  int max_retries = 2;
  int reload_on_halt_max = 1;
  double halt_window_s = 10.0;
  double tick_s = 0.1;
  /// Absolute session time after which loading is abandoned.
  double deadline_s = 1800.0;

  static PreloadParams from(const core::StudyConfig& cfg);
};

/// Connection attempts at t, t+gap, t+2*gap; then tick-integrated transfer. A
/// stretch of zero progress longer than the halt window tears the connection
/// down and restarts the transfer, at most reload_on_halt_max times.
LoadOutcome simulate_preload(const core::VideoAsset& asset, const BandwidthModel& bw,
                             double request_time_s, double needed_time_s,
                             const PreloadParams& params, Rng& rng);

struct PlaybackResult {
  std::int64_t play_duration_ms = 0;
  std::int64_t stall_total_ms = 0;
};

/// CPU-induced stalls only; the asset is fully loaded before play starts.
PlaybackResult simulate_playback(const core::VideoAsset& asset, const CpuModel& cpu,
                                 double background_load, Rng& rng, double tick_s = 0.1);

struct PlaybackPlan {
  double start_s = 60.0;  // when the first video is needed
  double slot_s = 18.0;   // nominal play + rating time per video
  int initial_batch = 3;
};

struct PrefetchRequest {
  std::size_t playlist_index = 0;
  double request_time_s = 0.0;
  double needed_time_s = 0.0;
};

/// Nominal request schedule: the first `initial_batch` at t=0, then video k is
/// requested when video k-initial_batch is needed, but never later than
/// needed_k - lead. Throws ConfigError if the plan cannot honour the lead or
/// overruns the session cap.
std::vector<PrefetchRequest> schedule_prefetch(std::span<const core::VideoAsset> playlist,
                                               const PlaybackPlan& plan,
                                               const core::StudyConfig& cfg);

}  // namespace vqc::netsim
