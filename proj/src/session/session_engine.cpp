#include "vqc/session/session_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vqc/errors.hpp"

namespace vqc::session {

EligibilityResult check_eligibility(const core::SubjectProfile& subject,
                                    const std::unordered_set<std::string>& history) {
  EligibilityResult r;
  auto fail = [&](Constraint c) { r.failed_constraints.push_back(c); };
  if (!(subject.reliability > 0.90)) fail(Constraint::reliability);
  if (subject.participated_before || history.count(subject.id) > 0) fail(Constraint::unique_worker);
  const auto& d = subject.display;
  if (d.device_class == core::DeviceClass::mobile || d.device_class == core::DeviceClass::tablet) {
    fail(Constraint::display_device);
  }
  if (d.width < core::kMinDisplay.width || d.height < core::kMinDisplay.height) {
    fail(Constraint::resolution);
  }
  if (!d.browser_supported) fail(Constraint::browser);
  r.eligible = r.failed_constraints.empty();
  return r;
}

namespace {

/// k assets spread over quality strata of `pool`, skipping anything in `used`.
std::vector<std::size_t> stratified_pick(const core::Catalog& catalog,
                                         std::vector<std::size_t> pool, std::size_t k,
                                         const std::vector<char>& used, Rng& rng) {
  std::erase_if(pool, [&](std::size_t i) { return used[i] != 0; });
  if (pool.size() < k) throw ConfigError("catalog too small to draw training videos");
  std::sort(pool.begin(), pool.end(), [&](auto a, auto b) {
    return catalog.at(a).latent_quality < catalog.at(b).latent_quality;
  });
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < k; ++s) {
    const std::size_t lo = s * pool.size() / k;
    const std::size_t hi = (s + 1) * pool.size() / k;
    out.push_back(pool[static_cast<std::size_t>(
        rng.uniform_int(static_cast<long>(lo), static_cast<long>(hi) - 1))]);
  }
  return out;
}

/// k distinct members of `pool`.
std::vector<std::size_t> sample(std::vector<std::size_t> pool, std::size_t k, Rng& rng) {
  // Partial Fisher-Yates.
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = static_cast<std::size_t>(
        rng.uniform_int(static_cast<long>(i), static_cast<long>(pool.size()) - 1));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace

Playlist compose_playlist(const core::DisplayProfile& display, const core::Catalog& catalog,
                          const core::StudyConfig& cfg, Rng& rng) {
  const auto n_golden = static_cast<std::size_t>(cfg.n_golden);
  const auto n_random = static_cast<std::size_t>(cfg.n_random);
  const auto n_common = static_cast<std::size_t>(cfg.n_common);
  const auto n_repeats = static_cast<std::size_t>(cfg.n_repeats);
  const bool highres = display.is_high_resolution();
  const std::size_t n_fhd = highres ? static_cast<std::size_t>(cfg.n_fhd_if_highres) : 0;

  if (catalog.golden().size() < n_golden) throw ConfigError("catalog has too few golden videos");
  if (catalog.common().size() != n_common) {
    throw ConfigError("catalog common set size differs from n_common");
  }
  if (catalog.fhd().size() < n_fhd) throw ConfigError("catalog has too few 1920x1080 videos");
  if (catalog.standard().size() < n_random - n_fhd) {
    throw ConfigError("catalog has too few sub-1920x1080 videos");
  }

  std::vector<PlaylistSlot> slots;
  for (auto g : sample(catalog.golden(), n_golden, rng)) slots.push_back({g, SlotKind::golden, {}});
  std::vector<std::size_t> randoms = sample(catalog.fhd(), n_fhd, rng);
  for (auto s : sample(catalog.standard(), n_random - n_fhd, rng)) randoms.push_back(s);
  for (auto r : randoms) slots.push_back({r, SlotKind::random, {}});
  for (auto r : sample(randoms, n_repeats, rng)) slots.push_back({r, SlotKind::repeat, {}});
  for (auto c : catalog.common()) slots.push_back({c, SlotKind::common, {}});

  // Uniform permutation conditioned on repeat spacing. Within a pair the earlier
  // showing is the original, which keeps the conditioning uniform.
  const int sep = cfg.repeat_min_separation;
  for (int attempt = 0;; ++attempt) {
    if (attempt > 100000) throw ConfigError("cannot place repeats with the required separation");
    rng.shuffle(slots.begin(), slots.end());
    bool ok = true;
    for (std::size_t i = 0; i < slots.size() && ok; ++i) {
      if (slots[i].kind != SlotKind::repeat) continue;
      for (std::size_t j = 0; j < slots.size(); ++j) {
        if (j != i && slots[j].kind == SlotKind::random && slots[j].asset == slots[i].asset) {
          ok = std::abs(static_cast<int>(i) - static_cast<int>(j)) >= sep;
          break;
        }
      }
    }
    if (ok) break;
  }
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].kind != SlotKind::repeat) continue;
    for (std::size_t j = 0; j < slots.size(); ++j) {
      if (j != i && slots[j].kind == SlotKind::random && slots[j].asset == slots[i].asset) {
        if (j > i) std::swap(slots[i].kind, slots[j].kind);
        break;
      }
    }
  }
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].kind != SlotKind::repeat) continue;
    for (std::size_t j = 0; j < i; ++j) {
      if (slots[j].kind == SlotKind::random && slots[j].asset == slots[i].asset) {
        slots[i].repeat_of = static_cast<int>(j);
      }
    }
  }

  std::vector<char> used(catalog.size(), 0);
  for (const auto& s : slots) used[s.asset] = 1;
  Playlist p;
  const auto n_train = static_cast<std::size_t>(cfg.n_training);
  if (highres && n_train >= 2) {
    const std::size_t train_fhd = std::min<std::size_t>(2, n_train);
    p.training = stratified_pick(catalog, catalog.fhd(), train_fhd, used, rng);
    for (auto t : p.training) used[t] = 1;
    for (auto t : stratified_pick(catalog, catalog.standard(), n_train - train_fhd, used, rng)) {
      p.training.push_back(t);
    }
  } else {
    p.training = stratified_pick(catalog, catalog.standard(), n_train, used, rng);
  }
  rng.shuffle(p.training.begin(), p.training.end());
  p.test = std::move(slots);
  return p;
}

TrainingOutcome training_gate(std::span<const double> play_durations_s,
                              const core::StudyConfig& cfg) {
  int over_multi = 0;
  for (std::size_t i = 0; i < play_durations_s.size(); ++i) {
    const double d = play_durations_s[i];
    if (d > cfg.training_fail_single_s) {
      return {false, "training video " + std::to_string(i + 1) + " took over " +
                         std::to_string(static_cast<int>(cfg.training_fail_single_s)) + " s"};
    }
    if (d > cfg.training_fail_multi_s) ++over_multi;
  }
  if (over_multi >= cfg.training_fail_multi_count) {
    return {false, std::to_string(over_multi) + " training videos took over " +
                       std::to_string(static_cast<int>(cfg.training_fail_multi_s)) + " s"};
  }
  return {};
}

namespace {

template <class E, std::size_t N>
E misreport(E truth, double rate, Rng& rng) {
  // The draw happens even when rate is 0 so the stream layout is fixed.
  const bool flip = rng.bernoulli(rate);
  const auto other = rng.uniform_int(1, static_cast<long>(N) - 1);
  if (!flip) return truth;
  return static_cast<E>((static_cast<long>(truth) + other) % static_cast<long>(N));
}

}  // namespace

SessionRecord run_session(const core::SubjectProfile& subject_in, const SessionEnv& env,
                          std::uint64_t session_id, Rng rng) {
  const auto& cfg = *env.config;
  const auto& catalog = *env.catalog;
  const auto& pop = *env.population;
  static const std::unordered_set<std::string> kNoHistory;

  SessionRecord rec;
  rec.session_id = session_id;
  rec.subject_id = subject_in.id;

  core::SubjectProfile subject = subject_in;
  subject.display.zoom_percent = 100;

  double now = cfg.overview_s;
  const double cap_s = cfg.session_cap_min * 60.0;
  auto finish = [&](Termination t) {
    rec.termination = t;
    rec.elapsed_min = now / 60.0;
    return rec;
  };

  rec.eligibility = check_eligibility(subject, env.history ? *env.history : kNoHistory);
  if (!rec.eligibility.eligible) return finish(Termination::ineligible);

  Rng playlist_rng = rng.derive("playlist");
  Rng net_rng = rng.derive("network");
  Rng cpu_rng = rng.derive("cpu");
  Rng rate_rng = rng.derive("rating");
  Rng pace_rng = rng.derive("pace");
  Rng survey_rng = rng.derive("survey");

  rec.playlist = compose_playlist(subject.display, catalog, cfg, playlist_rng);
  std::vector<std::size_t> order = rec.playlist.training;
  for (const auto& s : rec.playlist.test) order.push_back(s.asset);

  auto params = netsim::PreloadParams::from(cfg);
  std::vector<netsim::LoadOutcome> loads(order.size());
  std::vector<char> requested(order.size(), 0);
  auto request = [&](std::size_t k, double t) {
    if (k >= order.size() || requested[k]) return;
    requested[k] = 1;
    Rng r = net_rng.derive(k);
    loads[k] = netsim::simulate_preload(catalog.at(order[k]), *env.bandwidth, t,
                                        t + cfg.prefetch_lead_s, params, r);
  };

  // The first three videos load in the background during the instructions.
  const double instructions_start = now;
  for (std::size_t k = 0; k < 3; ++k) request(k, instructions_start);
  now += cfg.instructions_s;

  const auto n_train = rec.playlist.training.size();
  const auto rating_time = [&] {
    return std::max(1.0, subject.rating_time_s * pace_rng.lognormal(0.0, pop.presentation_time_log_sigma));
  };
  const auto rater = subject::rater_params(subject, pop);
  const bool skipper = subject.behavior == core::Behavior::skipper;
  const int cp1_index = static_cast<int>(std::ceil(static_cast<double>(order.size()) / 3.0));
  const int cp2_index = static_cast<int>(std::ceil(2.0 * static_cast<double>(order.size()) / 3.0));

  std::vector<double> training_durations;
  bool skipped_any = false;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& load = loads[k];
    if (load.terminated_reason) {
      rec.detail = "video " + std::to_string(k + 1) + " failed to load";
      if (*load.terminated_reason == netsim::LoadFailure::session_timeout) {
        now = std::max(now, cap_s);
        return finish(Termination::timeout);
      }
      return finish(Termination::connect_failed);
    }
    if (*load.ready_at_s > now + 1e-9) {
      ++rec.unready_videos;
      now = *load.ready_at_s;
    }
    const auto& asset = catalog.at(order[k]);
    if (now + asset.duration_s > cap_s) {
      now = cap_s;
      rec.detail = "session cap reached";
      return finish(Termination::timeout);
    }
    request(k + 3, now);

    Rng play_rng = cpu_rng.derive(k);
    auto play = netsim::simulate_playback(asset, *env.cpu, subject.background_load, play_rng,
                                          cfg.tick_s);
    const bool is_test = k >= n_train;
    if (is_test && skipper) {
      Rng skip_rng = cpu_rng.derive("skip", k);
      if (skip_rng.bernoulli(pop.skip_rate)) {
        play.stall_total_ms = 0;
        play.play_duration_ms = static_cast<std::int64_t>(
            std::llround(asset.duration_s * 1000.0 * skip_rng.uniform(0.2, 0.9)));
        skipped_any = true;
      }
    }
    now += static_cast<double>(play.play_duration_ms) / 1000.0;

    const int cursor = static_cast<int>(rate_rng.uniform_int(0, 100));
    const int score = subject::rate(rater, asset.latent_quality, play.stall_total_ms,
                                    asset.pool == core::Pool::golden, rate_rng);
    now += rating_time();

    if (!is_test) {
      training_durations.push_back(static_cast<double>(play.play_duration_ms) / 1000.0);
      if (training_durations.size() == n_train) {
        const auto gate = training_gate(training_durations, cfg);
        if (!gate.passed) {
          rec.detail = gate.reason;
          return finish(Termination::training_failed);
        }
      }
    } else {
      const auto& slot = rec.playlist.test[k - n_train];
      core::RatingRecord r;
      r.session_id = session_id;
      r.subject_id = subject.id;
      r.video_id = asset.id;
      r.position = static_cast<int>(k - n_train);
      r.raw_score = score;
      r.stall_total_ms = play.stall_total_ms;
      r.play_duration_ms = play.play_duration_ms;
      r.is_golden = slot.kind == SlotKind::golden;
      r.is_repeat = slot.kind == SlotKind::repeat;
      r.is_common = slot.kind == SlotKind::common;
      r.cursor_start = cursor;
      rec.ratings.push_back(std::move(r));
    }

    const int viewed = static_cast<int>(k) + 1;
    if (viewed == cp1_index && now > cfg.checkpoint1_min * 60.0) rec.warned_checkpoint1 = true;
    if (viewed == cp2_index && now > cfg.checkpoint2_min * 60.0) rec.warned_checkpoint2 = true;
    if (now > cap_s) {
      now = cap_s;
      rec.detail = "session cap reached";
      return finish(Termination::timeout);
    }
  }

  Survey s;
  s.vision = misreport<core::Vision, 3>(subject.vision, pop.misreport_rate, survey_rng);
  s.age_group = misreport<core::AgeGroup, 4>(subject.age_group, pop.misreport_rate, survey_rng);
  s.gender = misreport<core::Gender, 2>(subject.gender, pop.misreport_rate, survey_rng);
  s.viewing_distance = misreport<core::ViewingDistance, 3>(subject.viewing_distance,
                                                           pop.misreport_rate, survey_rng);
  s.display = subject.display;
  rec.survey = s;
  if (skipped_any) {
    rec.detail = "viewing duration below video duration";
    return finish(Termination::skipper_flagged);
  }
  rec.compensated = true;
  return finish(Termination::completed);
}

SessionSummary summarize(const SessionRecord& rec, const core::SubjectProfile& subject) {
  SessionSummary s;
  s.session_id = rec.session_id;
  s.subject_id = rec.subject_id;
  s.termination = rec.termination;
  s.elapsed_min = rec.elapsed_min;
  s.warned_checkpoint1 = rec.warned_checkpoint1;
  s.warned_checkpoint2 = rec.warned_checkpoint2;
  const auto& d = rec.survey ? rec.survey->display : subject.display;
  s.display_w = d.width;
  s.display_h = d.height;
  s.device_class = d.device_class;
  if (rec.survey) {
    s.vision = rec.survey->vision;
    s.age_group = rec.survey->age_group;
    s.gender = rec.survey->gender;
    s.viewing_distance = rec.survey->viewing_distance;
  }
  return s;
}

std::string_view to_string(Constraint c) {
  switch (c) {
    case Constraint::reliability: return "reliability";
    case Constraint::unique_worker: return "unique_worker";
    case Constraint::display_device: return "display_device";
    case Constraint::resolution: return "resolution";
    case Constraint::browser: return "browser";
    case Constraint::connectivity: return "connectivity";
    case Constraint::hardware: return "hardware";
  }
  return "?";
}

std::string_view to_string(SlotKind k) {
  switch (k) {
    case SlotKind::golden: return "golden";
    case SlotKind::random: return "random";
    case SlotKind::repeat: return "repeat";
    case SlotKind::common: return "common";
  }
  return "?";
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::completed: return "completed";
    case Termination::ineligible: return "ineligible";
    case Termination::training_failed: return "training_failed";
    case Termination::connect_failed: return "connect_failed";
    case Termination::timeout: return "timeout";
    case Termination::skipper_flagged: return "skipper_flagged";
  }
  return "?";
}

Termination parse_termination(std::string_view s) {
  for (auto t : {Termination::completed, Termination::ineligible, Termination::training_failed,
                 Termination::connect_failed, Termination::timeout,
                 Termination::skipper_flagged}) {
    if (to_string(t) == s) return t;
  }
  throw DataError("unknown termination '" + std::string(s) + "'");
}

}  // namespace vqc::session
