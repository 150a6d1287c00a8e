#include "vqc/screening/screening.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "vqc/errors.hpp"
#include "vqc/stats/moments.hpp"

namespace vqc::screening {

std::size_t ScreeningReport::removed_count() const {
  return removed_uncorrected.size() + removed_skippers.size() + removed_incomplete.size() +
         removed_stall_heavy.size() + removed_bt500.size();
}

bool is_clean(const core::RatingRecord& r) { return !r.stalled() && !r.is_repeat; }

ScreeningReport stage_filters(std::span<const core::RatingRecord> records,
                              std::span<const session::SessionSummary> sessions,
                              const ScreeningOptions& options) {
  std::unordered_map<std::uint64_t, const session::SessionSummary*> by_id;
  for (const auto& s : sessions) by_id[s.session_id] = &s;

  // subject -> indices of its ratings, in first-seen order
  std::vector<std::string> subjects;
  std::unordered_map<std::string, std::vector<std::size_t>> ratings_of;
  std::unordered_map<std::string, const session::SessionSummary*> session_of;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    auto it = by_id.find(r.session_id);
    if (it == by_id.end()) {
      throw DataError("rating for video " + r.video_id + " references unknown session " +
                      std::to_string(r.session_id));
    }
    if (it->second->subject_id != r.subject_id) {
      throw DataError("rating subject " + r.subject_id + " does not match session " +
                      std::to_string(r.session_id));
    }
    auto [slot, inserted] = ratings_of.try_emplace(r.subject_id);
    if (inserted) {
      subjects.push_back(r.subject_id);
      session_of[r.subject_id] = it->second;
    }
    slot->second.push_back(i);
  }

  ScreeningReport rep;
  auto remove = [&](const std::string& id, Stage stage, std::string detail,
                    std::vector<std::string>& list) {
    list.push_back(id);
    rep.ledger.push_back({id, stage, std::move(detail)});
  };
  std::unordered_set<std::string> gone;

  for (const auto& id : subjects) {
    const auto* s = session_of[id];
    if (s->vision && *s->vision == core::Vision::corrected_not_worn) {
      remove(id, Stage::uncorrected_vision, "corrective lenses not worn", rep.removed_uncorrected);
      gone.insert(id);
    }
  }
  for (const auto& id : subjects) {
    if (gone.count(id)) continue;
    int short_plays = 0;
    for (auto i : ratings_of[id]) {
      if (records[i].play_duration_ms < options.video_duration_ms) ++short_plays;
    }
    if (short_plays > 0 || session_of[id]->termination == session::Termination::skipper_flagged) {
      remove(id, Stage::skipper, std::to_string(short_plays) + " videos not watched fully",
             rep.removed_skippers);
      gone.insert(id);
    }
  }
  if (options.exclude_incomplete) {
    for (const auto& id : subjects) {
      if (gone.count(id)) continue;
      const auto t = session_of[id]->termination;
      if (t != session::Termination::completed) {
        remove(id, Stage::incomplete, std::string(session::to_string(t)), rep.removed_incomplete);
        gone.insert(id);
      }
    }
  }
  for (const auto& id : subjects) {
    if (gone.count(id)) continue;
    const auto& idx = ratings_of[id];
    const auto stalled = std::count_if(idx.begin(), idx.end(),
                                       [&](auto i) { return records[i].stalled(); });
    const double frac = static_cast<double>(stalled) / static_cast<double>(idx.size());
    if (frac >= options.stall_reject_fraction) {
      remove(id, Stage::stall_heavy,
             std::to_string(stalled) + " of " + std::to_string(idx.size()) + " stalled",
             rep.removed_stall_heavy);
      gone.insert(id);
    }
  }
  for (const auto& r : records) {
    if (!gone.count(r.subject_id)) rep.surviving.push_back(r);
  }
  return rep;
}

Bt500Result bt500_screen(std::span<const ScoreEntry> scores, double reject_fraction,
                         double balance_ratio) {
  struct VideoStats {
    double mean = 0.0;
    double threshold = 0.0;
  };
  std::unordered_map<std::string, std::vector<double>> by_video;
  for (const auto& e : scores) by_video[e.video_id].push_back(e.score);
  std::unordered_map<std::string, VideoStats> stats;
  for (const auto& [vid, v] : by_video) {
    VideoStats s;
    s.mean = stats::mean(v);
    const double sd = stats::sample_std(v);
    const auto b2 = stats::kurtosis_beta2(v);
    const bool normal_ish = b2 && *b2 >= 2.0 && *b2 <= 4.0;
    s.threshold = (normal_ish || !b2 ? 2.0 : std::sqrt(20.0)) * sd;
    stats.emplace(vid, s);
  }

  struct Counts {
    int p = 0, q = 0, n = 0;
  };
  std::map<std::string, Counts> per_subject;
  for (const auto& e : scores) {
    auto& c = per_subject[e.subject_id];
    const auto& s = stats.at(e.video_id);
    ++c.n;
    if (e.score > s.mean + s.threshold) ++c.p;
    if (e.score < s.mean - s.threshold) ++c.q;
  }
  Bt500Result res;
  for (const auto& [id, c] : per_subject) {
    const int pq = c.p + c.q;
    if (pq == 0) continue;
    const bool many = static_cast<double>(pq) / c.n > reject_fraction;
    const bool balanced = std::abs(c.p - c.q) / static_cast<double>(pq) < balance_ratio;
    if (many && balanced) {
      res.rejected.push_back(id);
      res.details.push_back("P=" + std::to_string(c.p) + " Q=" + std::to_string(c.q) +
                            " N=" + std::to_string(c.n));
    }
  }
  return res;
}

double mean_per_video_std(std::span<const core::RatingRecord> records) {
  std::map<std::string, std::vector<double>> by_video;
  for (const auto& r : records) {
    if (is_clean(r)) by_video[r.video_id].push_back(r.raw_score);
  }
  double total = 0.0;
  int n = 0;
  for (const auto& [vid, v] : by_video) {
    if (v.size() < 2) continue;
    total += stats::sample_std(v);
    ++n;
  }
  return n > 0 ? total / n : 0.0;
}

std::vector<ConsistencyEntry> intra_consistency(std::span<const core::RatingRecord> records,
                                                double threshold) {
  // (session, video) -> first and repeat showing
  struct Pair {
    const core::RatingRecord* first = nullptr;
    const core::RatingRecord* repeat = nullptr;
  };
  std::map<std::pair<std::uint64_t, std::string>, Pair> pairs;
  std::vector<std::string> order;
  std::unordered_set<std::string> seen;
  for (const auto& r : records) {
    if (seen.insert(r.subject_id).second) order.push_back(r.subject_id);
    auto& p = pairs[{r.session_id, r.video_id}];
    (r.is_repeat ? p.repeat : p.first) = &r;
  }
  std::unordered_map<std::string, ConsistencyEntry> by_subject;
  for (const auto& [key, p] : pairs) {
    if (!p.first || !p.repeat) continue;
    if (p.first->stalled() || p.repeat->stalled()) continue;
    auto& e = by_subject[p.first->subject_id];
    ++e.pairs;
    if (std::abs(p.first->raw_score - p.repeat->raw_score) < threshold) ++e.consistent;
  }
  std::vector<ConsistencyEntry> out;
  for (const auto& id : order) {
    ConsistencyEntry e = by_subject[id];
    e.subject_id = id;
    out.push_back(e);
  }
  return out;
}

double share_self_consistent(std::span<const ConsistencyEntry> entries) {
  int with_pairs = 0, ok = 0;
  for (const auto& e : entries) {
    if (e.pairs == 0) continue;
    ++with_pairs;
    if (2 * e.consistent >= e.pairs) ++ok;
  }
  return with_pairs > 0 ? static_cast<double>(ok) / with_pairs : 1.0;
}

ScreeningReport screen(std::span<const core::RatingRecord> records,
                       std::span<const session::SessionSummary> sessions,
                       const ScreeningOptions& options) {
  auto rep = stage_filters(records, sessions, options);

  std::set<std::string> candidates;
  std::set<std::string> with_clean;
  std::vector<ScoreEntry> scores;
  for (const auto& r : rep.surviving) {
    candidates.insert(r.subject_id);
    if (r.stalled() || r.is_repeat) continue;
    with_clean.insert(r.subject_id);
    scores.push_back({r.subject_id, r.video_id, static_cast<double>(r.raw_score)});
  }
  for (const auto& id : candidates) {
    if (!with_clean.count(id)) rep.unscreened.push_back(id);
  }
  if (options.apply_bt500) {
    const auto bt = bt500_screen(scores, options.bt500_reject_fraction, options.bt500_balance_ratio);
    const std::unordered_set<std::string> rejected(bt.rejected.begin(), bt.rejected.end());
    for (std::size_t i = 0; i < bt.rejected.size(); ++i) {
      rep.removed_bt500.push_back(bt.rejected[i]);
      rep.ledger.push_back({bt.rejected[i], Stage::bt500, bt.details[i]});
    }
    std::erase_if(rep.surviving, [&](const auto& r) { return rejected.count(r.subject_id) > 0; });
  }

  rep.consistency_threshold =
      options.consistency_threshold.value_or(mean_per_video_std(rep.surviving));
  rep.consistency = intra_consistency(rep.surviving, rep.consistency_threshold);
  return rep;
}

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::uncorrected_vision: return "uncorrected_vision";
    case Stage::skipper: return "skipper";
    case Stage::incomplete: return "incomplete";
    case Stage::stall_heavy: return "stall_heavy";
    case Stage::bt500: return "bt500";
  }
  return "?";
}

Stage parse_stage(std::string_view s) {
  for (auto st : {Stage::uncorrected_vision, Stage::skipper, Stage::incomplete,
                  Stage::stall_heavy, Stage::bt500}) {
    if (to_string(st) == s) return st;
  }
  throw DataError("unknown screening stage '" + std::string(s) + "'");
}

}  // namespace vqc::screening
