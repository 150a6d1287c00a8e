#include "vqc/aggregate/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_map>

#include "vqc/errors.hpp"
#include "vqc/screening/screening.hpp"
#include "vqc/stats/correlation.hpp"
#include "vqc/stats/moments.hpp"
#include "vqc/stats/wilcoxon.hpp"

namespace vqc::aggregate {

namespace {

std::map<std::string, std::vector<double>> clean_scores(std::span<const core::RatingRecord> rs) {
  std::map<std::string, std::vector<double>> out;
  for (const auto& r : rs) {
    if (screening::is_clean(r)) out[r.video_id].push_back(r.raw_score);
  }
  return out;
}

}  // namespace

MosTable compute_mos(std::span<const core::RatingRecord> surviving) {
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_video;
  for (const auto& r : surviving) {
    if (r.is_repeat) continue;
    auto& [clean, stalled] = by_video[r.video_id];
    (r.stalled() ? stalled : clean).push_back(r.raw_score);
  }
  MosTable t;
  for (auto& [vid, groups] : by_video) {
    auto& [clean, stalled] = groups;
    if (clean.empty()) {
      t.without_clean.push_back(vid);
      continue;
    }
    // Sorting first makes the sums independent of record order.
    std::sort(clean.begin(), clean.end());
    std::sort(stalled.begin(), stalled.end());
    VideoMos m;
    m.video_id = vid;
    m.mos = stats::mean(clean);
    m.std = stats::sample_std(clean);
    m.n_ratings = static_cast<int>(clean.size());
    m.n_stalled = static_cast<int>(stalled.size());
    if (!stalled.empty()) {
      m.mos_with_stalls = stats::mean(stalled);
      m.dmos = m.mos - *m.mos_with_stalls;
    }
    t.videos.push_back(std::move(m));
  }
  return t;
}

double split_half(std::span<const core::RatingRecord> records, int reps, Rng rng) {
  auto by_video = clean_scores(records);
  std::vector<std::vector<double>> pools;
  for (auto& [vid, v] : by_video) {
    if (v.size() >= 2) pools.push_back(std::move(v));
  }
  if (pools.size() < 2 || reps < 1) throw DataError("split-half needs two videos with two ratings");
  double total = 0.0;
  std::vector<double> a(pools.size()), b(pools.size());
  for (int rep = 0; rep < reps; ++rep) {
    Rng r = rng.derive("rep", static_cast<std::uint64_t>(rep));
    for (std::size_t v = 0; v < pools.size(); ++v) {
      auto& p = pools[v];
      r.shuffle(p.begin(), p.end());
      const std::size_t half = p.size() / 2;
      a[v] = std::accumulate(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(half), 0.0) /
             static_cast<double>(half);
      b[v] = std::accumulate(p.begin() + static_cast<std::ptrdiff_t>(half),
                             p.begin() + static_cast<std::ptrdiff_t>(2 * half), 0.0) /
             static_cast<double>(half);
    }
    total += stats::srocc(a, b).value_or(0.0);
  }
  return total / reps;
}

GoldenValidation golden_validation(std::span<const core::RatingRecord> records,
                                   const std::map<std::string, double>& ground_truth) {
  GoldenValidation g;
  std::map<std::string, std::vector<double>> scores;
  std::map<std::uint64_t, std::vector<std::pair<double, double>>> per_session;
  for (const auto& r : records) {
    if (!screening::is_clean(r)) continue;
    auto it = ground_truth.find(r.video_id);
    if (it == ground_truth.end()) continue;
    scores[r.video_id].push_back(r.raw_score);
    per_session[r.session_id].emplace_back(r.raw_score, it->second);
  }
  g.n_golden = static_cast<int>(scores.size());
  if (g.n_golden < 2) return g;

  std::vector<double> study, truth;
  for (const auto& [vid, v] : scores) {
    const double m = stats::mean(v);
    g.golden_mos[vid] = m;
    study.push_back(m);
    truth.push_back(ground_truth.at(vid));
  }
  double mad = 0.0;
  for (std::size_t i = 0; i < study.size(); ++i) mad += std::fabs(study[i] - truth[i]);
  g.mad = mad / static_cast<double>(study.size());
  g.mos_srocc = stats::srocc(study, truth);
  g.wilcoxon_p = stats::wilcoxon_signed_rank(study, truth).p_value;

  double srocc_sum = 0.0;
  int srocc_n = 0;
  std::vector<double> subj_study, subj_truth;
  for (const auto& [sid, pairs] : per_session) {
    std::vector<double> s, t;
    for (const auto& [score, gt] : pairs) {
      s.push_back(score);
      t.push_back(gt);
    }
    subj_study.push_back(stats::mean(s));
    subj_truth.push_back(stats::mean(t));
    if (s.size() < 2) continue;
    if (auto rho = stats::srocc(s, t)) {
      srocc_sum += *rho;
      ++srocc_n;
    }
  }
  g.n_subjects = static_cast<int>(per_session.size());
  if (srocc_n > 0) g.srocc = srocc_sum / srocc_n;
  g.wilcoxon_p_subjects = stats::wilcoxon_signed_rank(subj_study, subj_truth).p_value;
  return g;
}

std::map<std::string, std::vector<CurvePoint>> sample_size_curve(
    std::span<const core::RatingRecord> common_records, int max_n, Rng rng, int step) {
  if (step < 1) throw std::invalid_argument("curve step must be positive");
  auto by_video = clean_scores(common_records);
  std::map<std::string, std::vector<CurvePoint>> out;
  for (auto& [vid, v] : by_video) {
    Rng r = rng.derive(vid);
    r.shuffle(v.begin(), v.end());
    const int limit = std::min<int>(max_n, static_cast<int>(v.size()));
    auto& curve = out[vid];
    for (int n = step; n <= limit; n += step) {
      std::span<const double> sub(v.data(), static_cast<std::size_t>(n));
      curve.push_back({n, stats::mean(sub), stats::sample_std(sub)});
    }
  }
  return out;
}

namespace {

std::string stratum_of(const session::SessionSummary& s, Facet f) {
  switch (f) {
    case Facet::resolution_pool: return s.high_resolution_display() ? "fhd_pool" : "sub_fhd_pool";
    case Facet::display_resolution:
      return std::to_string(s.display_w) + "x" + std::to_string(s.display_h);
    case Facet::device_class: return std::string(core::to_string(s.device_class));
    case Facet::viewing_distance:
      return s.viewing_distance ? std::string(core::to_string(*s.viewing_distance)) : "";
    case Facet::gender: return s.gender ? std::string(core::to_string(*s.gender)) : "";
    case Facet::age_group: return s.age_group ? std::string(core::to_string(*s.age_group)) : "";
  }
  return "";
}

}  // namespace

StratifiedResult stratified_analysis(std::span<const core::RatingRecord> records,
                                     std::span<const session::SessionSummary> sessions,
                                     Facet facet, int min_ratings) {
  std::unordered_map<std::uint64_t, std::string> stratum;
  for (const auto& s : sessions) stratum[s.session_id] = stratum_of(s, facet);

  // stratum -> video -> (sum, count)
  std::map<std::string, std::map<std::string, std::pair<double, int>>> acc;
  std::map<std::string, std::set<std::uint64_t>> members;
  for (const auto& r : records) {
    if (!screening::is_clean(r)) continue;
    auto it = stratum.find(r.session_id);
    if (it == stratum.end() || it->second.empty()) continue;
    auto& cell = acc[it->second][r.video_id];
    cell.first += r.raw_score;
    ++cell.second;
    members[it->second].insert(r.session_id);
  }

  StratifiedResult res;
  res.facet = facet;
  for (const auto& [name, m] : members) res.subjects[name] = static_cast<int>(m.size());
  std::set<std::string> usable;
  for (auto a = acc.begin(); a != acc.end(); ++a) {
    for (auto b = std::next(a); b != acc.end(); ++b) {
      std::vector<double> ma, mb;
      for (const auto& [vid, ca] : a->second) {
        if (ca.second < min_ratings) continue;
        auto cb = b->second.find(vid);
        if (cb == b->second.end() || cb->second.second < min_ratings) continue;
        ma.push_back(ca.first / ca.second);
        mb.push_back(cb->second.first / cb->second.second);
      }
      if (ma.size() < 2) continue;
      StratumPair p;
      p.a = a->first;
      p.b = b->first;
      p.shared_videos = static_cast<int>(ma.size());
      p.srocc = stats::srocc(ma, mb);
      double d = 0.0;
      for (std::size_t i = 0; i < ma.size(); ++i) d += ma[i] - mb[i];
      p.mean_diff = d / static_cast<double>(ma.size());
      res.pairs.push_back(std::move(p));
      usable.insert(a->first);
      usable.insert(b->first);
    }
  }
  for (const auto& [name, m] : acc) {
    (usable.count(name) ? res.strata : res.excluded).push_back(name);
  }
  return res;
}

std::string_view to_string(Facet f) {
  switch (f) {
    case Facet::resolution_pool: return "resolution_pool";
    case Facet::display_resolution: return "display_resolution";
    case Facet::device_class: return "device_class";
    case Facet::viewing_distance: return "viewing_distance";
    case Facet::gender: return "gender";
    case Facet::age_group: return "age_group";
  }
  return "?";
}

Facet parse_facet(std::string_view s) {
  for (auto f : {Facet::resolution_pool, Facet::display_resolution, Facet::device_class,
                 Facet::viewing_distance, Facet::gender, Facet::age_group}) {
    if (to_string(f) == s) return f;
  }
  throw DataError("unknown facet '" + std::string(s) + "'");
}

}  // namespace vqc::aggregate
