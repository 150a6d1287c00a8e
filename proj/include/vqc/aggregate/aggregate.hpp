#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vqc/core/types.hpp"
#include "vqc/rng.hpp"
#include "vqc/session/session_engine.hpp"

namespace vqc::aggregate {

struct VideoMos {
  std::string video_id;
  double mos = 0.0;
  double std = 0.0;
  int n_ratings = 0;
  std::optional<double> mos_with_stalls;
  int n_stalled = 0;
  std::optional<double> dmos;  // mos - mos_with_stalls
};

struct MosTable {
  std::vector<VideoMos> videos;             // sorted by video id
  std::vector<std::string> without_clean;  // rated only with stalls
};

/// Repeat showings are ignored; stalled first showings feed mos_with_stalls.
MosTable compute_mos(std::span<const core::RatingRecord> surviving);

/// Mean over `reps` of the SROCC between MOS vectors of two random disjoint
/// equal halves of each video's clean ratings. Videos with fewer than two
/// clean ratings are skipped.
double split_half(std::span<const core::RatingRecord> records, int reps, Rng rng);

struct GoldenValidation {
  std::optional<double> srocc;      // mean per-subject SROCC against ground truth
  std::optional<double> mos_srocc;  // study golden MOS vs ground truth
  std::optional<double> mad;
  std::optional<double> wilcoxon_p;             // over the golden MOS pairs
  std::optional<double> wilcoxon_p_subjects;    // per-subject mean pairs
  int n_golden = 0;
  int n_subjects = 0;
  std::map<std::string, double> golden_mos;
};

GoldenValidation golden_validation(std::span<const core::RatingRecord> records,
                                   const std::map<std::string, double>& ground_truth);

struct CurvePoint {
  int n = 0;
  double mos = 0.0;
  double std = 0.0;
};

/// Nested random subsets: every n extends the sample used for n - step.
std::map<std::string, std::vector<CurvePoint>> sample_size_curve(
    std::span<const core::RatingRecord> common_records, int max_n, Rng rng, int step = 10);

enum class Facet {
  resolution_pool,     // whether the subject was served the 1920x1080 pool
  display_resolution,  // exact display size
  device_class,
  viewing_distance,
  gender,
  age_group
};

struct StratumPair {
  std::string a;
  std::string b;
  int shared_videos = 0;
  std::optional<double> srocc;
  double mean_diff = 0.0;  // mean over shared videos of MOS_a - MOS_b
};

struct StratifiedResult {
  Facet facet = Facet::age_group;
  std::vector<std::string> strata;  // with at least one usable pair
  std::vector<StratumPair> pairs;
  std::vector<std::string> excluded;
  std::map<std::string, int> subjects;  // per stratum
};

/// Per-stratum MOS over videos every stratum in a pair rated at least
/// `min_ratings` times; pairs with fewer than two shared videos are dropped.
StratifiedResult stratified_analysis(std::span<const core::RatingRecord> records,
                                     std::span<const session::SessionSummary> sessions,
                                     Facet facet, int min_ratings = 5);

std::string_view to_string(Facet f);
Facet parse_facet(std::string_view s);

}  // namespace vqc::aggregate
