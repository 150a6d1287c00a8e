#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <unordered_set>
#include <vector>

#include "vqc/core/catalog.hpp"
#include "vqc/core/config.hpp"
#include "vqc/core/types.hpp"
#include "vqc/session/session_engine.hpp"
#include "vqc/subject/subject_model.hpp"

namespace vqc::testing {

inline core::Catalog default_catalog(std::uint64_t seed = 1) {
  return core::Catalog(core::generate_catalog(core::CatalogSpec{}, Rng(seed)));
}

inline core::SubjectProfile compliant_subject(std::string id = "S1") {
  core::SubjectProfile s;
  s.id = std::move(id);
  s.reliability = 0.95;
  s.display = {1920, 1080, core::DeviceClass::desktop, true, 100};
  s.rating_time_s = 5.0;
  return s;
}

/// Owns everything a SessionEnv points at. Defaults: steady fast network, no stalls.
struct EnvHolder {
  core::StudyConfig config;
  core::Catalog catalog = default_catalog();
  subject::PopulationSpec population;
  netsim::BandwidthModel bandwidth;
  netsim::CpuModel cpu;
  std::unordered_set<std::string> history;

  EnvHolder() {
    bandwidth.base_rate_bps = 1e9;
    bandwidth.connect_fail_prob = 0.0;
    cpu.stall_prob_per_video = 0.0;
    population.presentation_time_log_sigma = 0.0;
  }

  [[nodiscard]] session::SessionEnv env() const {
    return {&config, &catalog, &population, &bandwidth, &cpu, &history};
  }
};

/// One clean (non-stalled, first-showing) rating.
inline core::RatingRecord rating(const std::string& subject, const std::string& video, int score,
                                 std::int64_t stall_ms = 0, std::uint64_t session = 0) {
  core::RatingRecord r;
  r.session_id = session;
  r.subject_id = subject;
  r.video_id = video;
  r.raw_score = score;
  r.stall_total_ms = stall_ms;
  r.play_duration_ms = 10000 + stall_ms;
  return r;
}

inline session::SessionSummary completed_session(std::uint64_t id, const std::string& subject) {
  session::SessionSummary s;
  s.session_id = id;
  s.subject_id = subject;
  s.display_w = 1920;
  s.display_h = 1080;
  s.vision = core::Vision::normal;
  s.age_group = core::AgeGroup::age_20_30;
  s.gender = core::Gender::female;
  s.viewing_distance = core::ViewingDistance::from_15_to_30in;
  return s;
}

}  // namespace vqc::testing
