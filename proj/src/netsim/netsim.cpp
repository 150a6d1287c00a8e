#include "vqc/netsim/netsim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "vqc/errors.hpp"
#include "vqc/io/csv.hpp"

namespace vqc::netsim {

double BandwidthModel::rate_at(double t_s) const {
  double rate = base_rate_bps;
  if (!trace.empty()) {
    auto it = std::upper_bound(trace.begin(), trace.end(), t_s,
                               [](double t, const auto& p) { return t < p.first; });
    rate = it == trace.begin() ? trace.front().second : std::prev(it)->second;
  }
  for (const auto& d : drop_events) {
    if (t_s >= d.start_s && t_s < d.start_s + d.duration_s) rate *= d.rate_factor;
  }
  return rate;
}

void validate(const BandwidthModel& bw) {
  if (!(bw.base_rate_bps > 0.0)) throw ConfigError("bandwidth base rate must be positive");
  for (const auto& d : bw.drop_events) {
    if (d.rate_factor < 0.0 || d.rate_factor > 1.0) {
      throw ConfigError("drop-event rate factor must lie in [0,1]");
    }
    if (d.duration_s < 0.0) throw ConfigError("drop-event duration must be non-negative");
  }
  if (bw.jitter_sigma < 0.0) throw ConfigError("jitter sigma must be non-negative");
  if (bw.connect_fail_prob < 0.0 || bw.connect_fail_prob > 1.0) {
    throw ConfigError("connect failure probability must lie in [0,1]");
  }
}

void validate(const CpuModel& cpu) {
  if (cpu.stall_prob_per_video < 0.0 || cpu.stall_prob_per_video > 1.0) {
    throw ConfigError("stall probability must lie in [0,1]");
  }
  if (cpu.stall_log_sigma < 0.0) throw ConfigError("stall log-sigma must be non-negative");
  if (cpu.load_gain < 0.0) throw ConfigError("load gain must be non-negative");
}

BandwidthModel load_bandwidth_trace(const std::filesystem::path& path) {
  const auto table = io::read_csv(path);
  table.require_columns({"t_s", "rate_bps"});
  BandwidthModel bw;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const double t = table.number(r, "t_s");
    const double rate = table.number(r, "rate_bps");
    if (rate < 0.0) throw DataError(io::row_context(path, r) + "negative rate");
    if (!bw.trace.empty() && t < bw.trace.back().first) {
      throw DataError(io::row_context(path, r) + "trace times must be non-decreasing");
    }
    bw.trace.emplace_back(t, rate);
  }
  if (bw.trace.empty()) throw DataError(path.string() + ": empty bandwidth trace");
  bw.base_rate_bps = 0.0;
  for (const auto& p : bw.trace) bw.base_rate_bps = std::max(bw.base_rate_bps, p.second);
  if (!(bw.base_rate_bps > 0.0)) throw DataError(path.string() + ": trace never transfers data");
  return bw;
}

PreloadParams PreloadParams::from(const core::StudyConfig& cfg) {
  PreloadParams p;
  p.prefetch_lead_s = cfg.prefetch_lead_s;
  p.retry_gap_s = cfg.retry_gap_s;
  p.max_retries = cfg.max_retries;
  p.reload_on_halt_max = cfg.reload_on_halt_max;
  p.halt_window_s = cfg.halt_window_s;
  p.tick_s = cfg.tick_s;
  p.deadline_s = cfg.session_cap_min * 60.0;
  return p;
}

namespace {

bool try_connect(const BandwidthModel& bw, double t, Rng& rng) {
  const bool dropped = bw.connect_fail_prob > 0.0 && rng.bernoulli(bw.connect_fail_prob);
  return !dropped && !bw.in_outage(t);
}

}  // namespace

LoadOutcome simulate_preload(const core::VideoAsset& asset, const BandwidthModel& bw,
                             double request_time_s, double /*needed_time_s*/,
                             const PreloadParams& params, Rng& rng) {
  LoadOutcome out;
  double t = request_time_s;
  for (int k = 0; k <= params.max_retries; ++k) {
    if (t >= params.deadline_s) {
      out.terminated_reason = LoadFailure::session_timeout;
      return out;
    }
    ++out.attempts;
    if (try_connect(bw, t, rng)) {
      out.connected = true;
      break;
    }
    t += params.retry_gap_s;
  }
  if (!out.connected) {
    out.terminated_reason = LoadFailure::connect_failed;
    return out;
  }

  const double start = t;
  double remaining = asset.size_bits;
  double halted_for = 0.0;
  for (std::int64_t tick = 0;; ++tick) {
    const double now = start + static_cast<double>(tick) * params.tick_s;
    if (now >= params.deadline_s) {
      out.terminated_reason = LoadFailure::session_timeout;
      return out;
    }
    double rate = bw.rate_at(now);
    if (bw.jitter_sigma > 0.0) rate *= std::max(0.0, 1.0 + rng.normal(0.0, bw.jitter_sigma));
    const double bits = rate * params.tick_s;
    if (bits >= remaining) {
      out.ready_at_s = std::isinf(rate) ? now : now + remaining / rate;
      return out;
    }
    if (bits <= 0.0) {
      halted_for += params.tick_s;
      if (halted_for >= params.halt_window_s - 1e-9) {
        if (out.reloads >= params.reload_on_halt_max) {
          out.terminated_reason = LoadFailure::halted_twice;
          return out;
        }
        ++out.reloads;
        remaining = asset.size_bits;
        halted_for = 0.0;
      }
      continue;
    }
    halted_for = 0.0;
    remaining -= bits;
  }
}

PlaybackResult simulate_playback(const core::VideoAsset& asset, const CpuModel& cpu,
                                 double background_load, Rng& rng, double tick_s) {
  // Both variates are always drawn so outcomes under different loads share a stream.
  const bool stalls = rng.bernoulli(cpu.stall_prob_per_video);
  const double base_ms = rng.lognormal(cpu.stall_log_mu, cpu.stall_log_sigma);
  PlaybackResult r;
  if (stalls) {
    const double ms = base_ms * (1.0 + cpu.load_gain * std::clamp(background_load, 0.0, 1.0));
    const double tick_ms = tick_s * 1000.0;
    const auto ticks = std::max<std::int64_t>(1, std::llround(ms / tick_ms));
    r.stall_total_ms = static_cast<std::int64_t>(std::llround(ticks * tick_ms));
  }
  r.play_duration_ms = asset.duration_ms() + r.stall_total_ms;
  return r;
}

std::vector<PrefetchRequest> schedule_prefetch(std::span<const core::VideoAsset> playlist,
                                               const PlaybackPlan& plan,
                                               const core::StudyConfig& cfg) {
  if (playlist.empty()) throw ConfigError("playlist is empty");
  if (plan.initial_batch < 1) throw ConfigError("initial prefetch batch must be at least 1");
  std::vector<double> needed(playlist.size());
  double t = plan.start_s;
  for (std::size_t k = 0; k < playlist.size(); ++k) {
    needed[k] = t;
    t += std::max(plan.slot_s, playlist[k].duration_s);
  }
  if (t > cfg.session_cap_min * 60.0) {
    throw ConfigError("playlist of " + std::to_string(playlist.size()) +
                      " videos does not fit in the session cap");
  }
  const auto batch = static_cast<std::size_t>(plan.initial_batch);
  std::vector<PrefetchRequest> out;
  for (std::size_t k = 0; k < playlist.size(); ++k) {
    double request = 0.0;
    if (k >= batch) request = std::min(needed[k - batch], needed[k] - cfg.prefetch_lead_s);
    if (needed[k] - request < cfg.prefetch_lead_s - 1e-9) {
      throw ConfigError("playback plan leaves less than the prefetch lead for video " +
                        std::to_string(k));
    }
    out.push_back({k, request, needed[k]});
  }
  return out;
}

}  // namespace vqc::netsim
