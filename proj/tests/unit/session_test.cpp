#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "support.hpp"
#include "vqc/errors.hpp"
#include "vqc/session/session_engine.hpp"
#include "vqc/session/study_runner.hpp"

using namespace vqc;
using namespace vqc::session;
using vqc::testing::compliant_subject;
using vqc::testing::EnvHolder;

namespace {

std::map<SlotKind, int> kind_counts(const Playlist& p) {
  std::map<SlotKind, int> out;
  for (const auto& s : p.test) ++out[s.kind];
  return out;
}

}  // namespace

TEST(Eligibility, AllGatesPass) {
  const auto s = compliant_subject();
  const auto r = check_eligibility(s, {});
  EXPECT_TRUE(r.eligible);
  EXPECT_TRUE(r.failed_constraints.empty());
}

TEST(Eligibility, ReliabilityMustBeStrictlyAboveNinety) {
  auto s = compliant_subject();
  s.reliability = 0.90;
  const auto r = check_eligibility(s, {});
  EXPECT_FALSE(r.eligible);
  EXPECT_EQ(r.failed_constraints, std::vector<Constraint>{Constraint::reliability});
  s.reliability = 0.9001;
  EXPECT_TRUE(check_eligibility(s, {}).eligible);
}

TEST(Eligibility, ResolutionBoundary) {
  auto s = compliant_subject();
  s.display.width = 1280;
  s.display.height = 719;
  EXPECT_EQ(check_eligibility(s, {}).failed_constraints,
            std::vector<Constraint>{Constraint::resolution});
  s.display.height = 720;
  EXPECT_TRUE(check_eligibility(s, {}).eligible);
}

TEST(Eligibility, DeviceBrowserAndHistory) {
  auto s = compliant_subject();
  s.display.device_class = core::DeviceClass::tablet;
  s.display.browser_supported = false;
  const auto r = check_eligibility(s, {"S1"});
  EXPECT_EQ(r.failed_constraints.size(), 3u);
  EXPECT_FALSE(r.eligible);
}

TEST(Playlist, HighResolutionComposition) {
  const auto catalog = vqc::testing::default_catalog();
  const core::StudyConfig cfg;
  Rng rng(4);
  const auto p = compose_playlist({1920, 1080}, catalog, cfg, rng);
  ASSERT_EQ(p.test.size(), 43u);
  const auto counts = kind_counts(p);
  EXPECT_EQ(counts.at(SlotKind::golden), 4);
  EXPECT_EQ(counts.at(SlotKind::random), 31);
  EXPECT_EQ(counts.at(SlotKind::repeat), 4);
  EXPECT_EQ(counts.at(SlotKind::common), 4);
  int fhd = 0, other = 0;
  for (const auto& s : p.test) {
    if (s.kind != SlotKind::random) continue;
    (catalog.at(s.asset).pool == core::Pool::fhd ? fhd : other)++;
  }
  EXPECT_EQ(fhd, 18);
  EXPECT_EQ(other, 13);
  EXPECT_EQ(p.training.size(), 7u);
}

TEST(Playlist, LowResolutionSeesNoFullHd) {
  const auto catalog = vqc::testing::default_catalog();
  Rng rng(5);
  const auto p = compose_playlist({1366, 768}, catalog, core::StudyConfig{}, rng);
  for (const auto& s : p.test) EXPECT_NE(catalog.at(s.asset).pool, core::Pool::fhd);
  for (auto t : p.training) EXPECT_NE(catalog.at(t).pool, core::Pool::fhd);
}

TEST(Playlist, DifferentStreamsShareCommonSet) {
  const auto catalog = vqc::testing::default_catalog();
  const core::StudyConfig cfg;
  Rng master(6);
  Rng a = master.derive("session", 0);
  Rng b = master.derive("session", 1);
  const auto pa = compose_playlist({1920, 1080}, catalog, cfg, a);
  const auto pb = compose_playlist({1920, 1080}, catalog, cfg, b);
  auto order = [](const Playlist& p) {
    std::vector<std::size_t> v;
    for (const auto& s : p.test) v.push_back(s.asset);
    return v;
  };
  EXPECT_NE(order(pa), order(pb));
  auto common = [](const Playlist& p) {
    std::set<std::size_t> c;
    for (const auto& s : p.test)
      if (s.kind == SlotKind::common) c.insert(s.asset);
    return c;
  };
  EXPECT_EQ(common(pa), common(pb));
  EXPECT_EQ(common(pa).size(), 4u);
}

TEST(Playlist, RepeatsFollowTheirOriginals) {
  const auto catalog = vqc::testing::default_catalog();
  const core::StudyConfig cfg;
  Rng master(7);
  for (int i = 0; i < 300; ++i) {
    Rng rng = master.derive(i);
    const auto p = compose_playlist(i % 2 ? core::DisplayProfile{1920, 1080}
                                          : core::DisplayProfile{1366, 768},
                                    catalog, cfg, rng);
    std::set<std::size_t> training(p.training.begin(), p.training.end());
    for (std::size_t k = 0; k < p.test.size(); ++k) {
      const auto& s = p.test[k];
      EXPECT_EQ(training.count(s.asset), 0u);
      if (s.kind != SlotKind::repeat) continue;
      ASSERT_TRUE(s.repeat_of.has_value());
      const auto orig = static_cast<std::size_t>(*s.repeat_of);
      EXPECT_LT(orig, k);
      EXPECT_EQ(p.test[orig].asset, s.asset);
      EXPECT_EQ(p.test[orig].kind, SlotKind::random);
      EXPECT_GE(static_cast<int>(k - orig), cfg.repeat_min_separation);
    }
  }
}

TEST(Playlist, TooSmallCatalogIsAConfigError) {
  core::CatalogSpec spec;
  spec.n_videos = 60;
  spec.n_fhd = 10;
  const core::Catalog catalog(core::generate_catalog(spec, Rng(1)));
  Rng rng(1);
  EXPECT_THROW((void)compose_playlist({1920, 1080}, catalog, core::StudyConfig{}, rng),
               ConfigError);
}

TEST(TrainingGate, Examples) {
  const core::StudyConfig cfg;
  const std::vector<double> clean(7, 10.0);
  EXPECT_TRUE(training_gate(clean, cfg).passed);
  const std::vector<double> one_long{10, 10, 15.5, 10, 10, 10, 10};
  EXPECT_FALSE(training_gate(one_long, cfg).passed);
  const std::vector<double> three_slow{12.5, 12.5, 12.5, 10, 10, 10, 10};
  EXPECT_FALSE(training_gate(three_slow, cfg).passed);
  const std::vector<double> two_slow{12.5, 12.5, 10, 10, 10, 10, 10};
  EXPECT_TRUE(training_gate(two_slow, cfg).passed);
  const std::vector<double> exactly_fifteen{15, 10, 10, 10, 10, 10, 10};
  EXPECT_TRUE(training_gate(exactly_fifteen, cfg).passed);
}

TEST(RunSession, NominalCompliantSubject) {
  const EnvHolder h;
  const auto rec = run_session(compliant_subject(), h.env(), 1, Rng(3));
  EXPECT_EQ(rec.termination, Termination::completed);
  EXPECT_EQ(rec.ratings.size(), 43u);
  EXPECT_FALSE(rec.warned_checkpoint1);
  EXPECT_FALSE(rec.warned_checkpoint2);
  EXPECT_TRUE(rec.compensated);
  EXPECT_EQ(rec.unready_videos, 0);
  ASSERT_TRUE(rec.survey.has_value());
  for (std::size_t k = 0; k < rec.ratings.size(); ++k) {
    EXPECT_EQ(rec.ratings[k].position, static_cast<int>(k));
    EXPECT_EQ(rec.ratings[k].stall_total_ms, 0);
  }
}

TEST(RunSession, SlowSubjectIsWarnedAtFirstCheckpoint) {
  const EnvHolder h;
  auto s = compliant_subject();
  s.rating_time_s = 22.0;  // 32 s per video: past 10 min after 17 videos, done within 30
  const auto rec = run_session(s, h.env(), 1, Rng(3));
  EXPECT_TRUE(rec.warned_checkpoint1);
  EXPECT_EQ(rec.termination, Termination::completed);
}

TEST(RunSession, CapReachedMidTestTimesOut) {
  const EnvHolder h;
  auto s = compliant_subject();
  s.rating_time_s = 40.0;
  const auto rec = run_session(s, h.env(), 1, Rng(3));
  EXPECT_EQ(rec.termination, Termination::timeout);
  EXPECT_FALSE(rec.ratings.empty());
  EXPECT_LT(rec.ratings.size(), 43u);
  EXPECT_TRUE(rec.warned_checkpoint1);
  EXPECT_DOUBLE_EQ(rec.elapsed_min, 30.0);
  EXPECT_FALSE(rec.compensated);
}

TEST(RunSession, IneligibleSubjectNeverStarts) {
  const EnvHolder h;
  auto s = compliant_subject();
  s.reliability = 0.5;
  const auto rec = run_session(s, h.env(), 1, Rng(3));
  EXPECT_EQ(rec.termination, Termination::ineligible);
  EXPECT_TRUE(rec.ratings.empty());
}

TEST(RunSession, ConnectionFailureTerminates) {
  EnvHolder h;
  h.bandwidth.connect_fail_prob = 1.0;
  const auto rec = run_session(compliant_subject(), h.env(), 1, Rng(3));
  EXPECT_EQ(rec.termination, Termination::connect_failed);
}

TEST(RunSession, StallingMachineFailsTraining) {
  EnvHolder h;
  h.cpu.stall_prob_per_video = 1.0;
  h.cpu.stall_log_mu = std::log(8000.0);
  h.cpu.stall_log_sigma = 0.0;
  const auto rec = run_session(compliant_subject(), h.env(), 1, Rng(3));
  EXPECT_EQ(rec.termination, Termination::training_failed);
  EXPECT_FALSE(rec.detail.empty());
}

TEST(RunSession, SkipperIsFlagged) {
  EnvHolder h;
  h.population.skip_rate = 1.0;
  auto s = compliant_subject();
  s.behavior = core::Behavior::skipper;
  const auto rec = run_session(s, h.env(), 1, Rng(3));
  EXPECT_EQ(rec.termination, Termination::skipper_flagged);
  for (const auto& r : rec.ratings) EXPECT_LT(r.play_duration_ms, 10000);
}

TEST(RunSession, SlowNetworkCausesUnreadyVideos) {
  EnvHolder h;
  h.bandwidth.base_rate_bps = 2e5;
  const auto rec = run_session(compliant_subject(), h.env(), 1, Rng(3));
  EXPECT_GT(rec.unready_videos, 0);
}

TEST(Study, ResultsDoNotDependOnJobs) {
  const auto catalog = vqc::testing::default_catalog();
  subject::PopulationSpec spec;
  spec.n_subjects = 60;
  const auto one = simulate_study(catalog, core::StudyConfig{}, spec, Rng(9), 1);
  const auto four = simulate_study(catalog, core::StudyConfig{}, spec, Rng(9), 4);
  ASSERT_EQ(one.sessions.size(), four.sessions.size());
  for (std::size_t i = 0; i < one.sessions.size(); ++i) {
    const auto& a = one.sessions[i];
    const auto& b = four.sessions[i];
    EXPECT_EQ(a.termination, b.termination);
    EXPECT_EQ(a.elapsed_min, b.elapsed_min);
    ASSERT_EQ(a.ratings.size(), b.ratings.size());
    for (std::size_t k = 0; k < a.ratings.size(); ++k) {
      EXPECT_EQ(a.ratings[k].raw_score, b.ratings[k].raw_score);
      EXPECT_EQ(a.ratings[k].stall_total_ms, b.ratings[k].stall_total_ms);
    }
  }
}

TEST(Study, CompletedSessionsHaveUniqueSubjectsAndRateCommonSet) {
  const auto catalog = vqc::testing::default_catalog();
  subject::PopulationSpec spec;
  spec.n_subjects = 400;
  const auto study = simulate_study(catalog, core::StudyConfig{}, spec, Rng(10), 2);
  std::set<std::string> subjects;
  std::map<std::string, int> common_hits;
  int completed = 0;
  for (const auto& s : study.sessions) {
    if (s.termination != Termination::completed) continue;
    ++completed;
    EXPECT_TRUE(subjects.insert(s.subject_id).second);
    for (const auto& r : s.ratings)
      if (r.is_common) ++common_hits[r.video_id];
  }
  ASSERT_EQ(common_hits.size(), 4u);
  for (const auto& [id, n] : common_hits) EXPECT_EQ(n, completed);
}

TEST(Termination, RoundTrip) {
  for (auto t : {Termination::completed, Termination::ineligible, Termination::training_failed,
                 Termination::connect_failed, Termination::timeout, Termination::skipper_flagged})
    EXPECT_EQ(parse_termination(to_string(t)), t);
}
