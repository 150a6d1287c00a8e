#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "vqc/core/catalog.hpp"
#include "vqc/core/config.hpp"
#include "vqc/core/types.hpp"
#include "vqc/netsim/netsim.hpp"
#include "vqc/rng.hpp"
#include "vqc/subject/subject_model.hpp"

namespace vqc::session {

enum class Constraint {
  reliability,
  unique_worker,
  display_device,
  resolution,
  browser,
  connectivity,
  hardware
};

struct EligibilityResult {
  bool eligible = true;
  std::vector<Constraint> failed_constraints;
};

/// Pre-session gates only. Connectivity and hardware are enforced later by the
/// preload protocol and the training stall gate.
EligibilityResult check_eligibility(const core::SubjectProfile& subject,
                                    const std::unordered_set<std::string>& history);

enum class SlotKind { golden, random, repeat, common };

struct PlaylistSlot {
  std::size_t asset = 0;  // catalog index
  SlotKind kind = SlotKind::random;
  std::optional<int> repeat_of;  // test position of the first showing
};

struct Playlist {
  std::vector<std::size_t> training;
  std::vector<PlaylistSlot> test;
};

/// Throws ConfigError when the catalog pools are too small.
Playlist compose_playlist(const core::DisplayProfile& display, const core::Catalog& catalog,
                          const core::StudyConfig& cfg, Rng& rng);

struct TrainingOutcome {
  bool passed = true;
  std::string reason;
};

/// Applies the training stall rules to the seven play durations (seconds).
TrainingOutcome training_gate(std::span<const double> play_durations_s,
                              const core::StudyConfig& cfg);

enum class Termination {
  completed,
  ineligible,
  training_failed,
  connect_failed,
  timeout,
  skipper_flagged
};

struct Survey {
  core::Vision vision = core::Vision::normal;
  core::AgeGroup age_group = core::AgeGroup::age_20_30;
  core::Gender gender = core::Gender::female;
  core::ViewingDistance viewing_distance = core::ViewingDistance::from_15_to_30in;
  core::DisplayProfile display;
};

struct SessionRecord {
  std::uint64_t session_id = 0;
  std::string subject_id;
  Playlist playlist;
  std::vector<core::RatingRecord> ratings;
  Termination termination = Termination::completed;
  double elapsed_min = 0.0;
  bool warned_checkpoint1 = false;
  bool warned_checkpoint2 = false;
  EligibilityResult eligibility;
  std::string detail;     // training failure reason, load failure, ...
  int unready_videos = 0;  // presentations that had to wait on the network
  bool compensated = false;
  std::optional<Survey> survey;
};

/// Everything a session needs besides the subject and its RNG stream.
struct SessionEnv {
  const core::StudyConfig* config = nullptr;
  const core::Catalog* catalog = nullptr;
  const subject::PopulationSpec* population = nullptr;
  const netsim::BandwidthModel* bandwidth = nullptr;
  const netsim::CpuModel* cpu = nullptr;
  const std::unordered_set<std::string>* history = nullptr;
};

/// The per-session fields persisted to the sessions CSV and used downstream.
struct SessionSummary {
  std::uint64_t session_id = 0;
  std::string subject_id;
  Termination termination = Termination::completed;
  double elapsed_min = 0.0;
  bool warned_checkpoint1 = false;
  bool warned_checkpoint2 = false;
  int display_w = 0;
  int display_h = 0;
  core::DeviceClass device_class = core::DeviceClass::desktop;
  std::optional<core::Vision> vision;
  std::optional<core::AgeGroup> age_group;
  std::optional<core::Gender> gender;
  std::optional<core::ViewingDistance> viewing_distance;

  [[nodiscard]] bool high_resolution_display() const noexcept {
    return display_w >= core::kFullHd.width && display_h >= core::kFullHd.height;
  }
};

SessionSummary summarize(const SessionRecord& rec, const core::SubjectProfile& subject);

SessionRecord run_session(const core::SubjectProfile& subject, const SessionEnv& env,
                          std::uint64_t session_id, Rng rng);

std::string_view to_string(Constraint c);
std::string_view to_string(SlotKind k);
std::string_view to_string(Termination t);
Termination parse_termination(std::string_view s);

}  // namespace vqc::session
