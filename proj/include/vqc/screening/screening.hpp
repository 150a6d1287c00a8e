#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vqc/core/types.hpp"
#include "vqc/session/session_engine.hpp"

namespace vqc::screening {

enum class Stage { uncorrected_vision, skipper, incomplete, stall_heavy, bt500 };

struct LedgerRow {
  std::string subject_id;
  Stage stage = Stage::bt500;
  std::string detail;
};

struct ConsistencyEntry {
  std::string subject_id;
  int pairs = 0;  // repeat pairs with neither showing stalled
  int consistent = 0;
  [[nodiscard]] std::optional<double> fraction() const {
    if (pairs == 0) return std::nullopt;
    return static_cast<double>(consistent) / pairs;
  }
};

struct ScreeningOptions {
  double stall_reject_fraction = 0.75;
  double bt500_reject_fraction = 0.05;
  double bt500_balance_ratio = 0.3;
  bool apply_bt500 = true;
  bool exclude_incomplete = true;
  std::int64_t video_duration_ms = 10000;
  /// Fixed consistency threshold; by default the measured mean per-video std.
  std::optional<double> consistency_threshold;
};

struct ScreeningReport {
  std::vector<std::string> removed_uncorrected;
  std::vector<std::string> removed_skippers;
  std::vector<std::string> removed_incomplete;
  std::vector<std::string> removed_stall_heavy;
  std::vector<std::string> removed_bt500;
  std::vector<std::string> unscreened;  // no non-stalled ratings to screen on
  std::vector<LedgerRow> ledger;
  std::vector<ConsistencyEntry> consistency;
  double consistency_threshold = 0.0;
  /// Every rating of every subject that survived; stalled ones included.
  std::vector<core::RatingRecord> surviving;

  [[nodiscard]] std::size_t removed_count() const;
};

/// Vision, skipper, incomplete-session and stall-heavy stages, in that order.
/// Throws DataError for ratings whose session is missing or names another subject.
ScreeningReport stage_filters(std::span<const core::RatingRecord> records,
                              std::span<const session::SessionSummary> sessions,
                              const ScreeningOptions& options);

struct ScoreEntry {
  std::string subject_id;
  std::string video_id;
  double score = 0.0;
};

struct Bt500Result {
  std::vector<std::string> rejected;  // sorted
  std::vector<std::string> details;   // aligned with rejected: "P=.. Q=.. N=.."
};

/// Kurtosis-conditioned outlier rejection over an incomplete subject x video matrix.
Bt500Result bt500_screen(std::span<const ScoreEntry> scores, double reject_fraction = 0.05,
                         double balance_ratio = 0.3);

/// Non-stalled, first-showing ratings: the ones that feed MOS and BT.500.
bool is_clean(const core::RatingRecord& r);

/// Mean over videos (with at least two clean ratings) of the per-video sample std.
double mean_per_video_std(std::span<const core::RatingRecord> records);

std::vector<ConsistencyEntry> intra_consistency(std::span<const core::RatingRecord> records,
                                                double threshold);

/// Fraction of subjects (with any usable pair) consistent on at least half their pairs.
double share_self_consistent(std::span<const ConsistencyEntry> entries);

/// Full pipeline: stage filters, BT.500 on what is left, then consistency.
ScreeningReport screen(std::span<const core::RatingRecord> records,
                       std::span<const session::SessionSummary> sessions,
                       const ScreeningOptions& options = {});

std::string_view to_string(Stage s);
Stage parse_stage(std::string_view s);

}  // namespace vqc::screening
