// Acceptance gate: one PASS/FAIL line per criterion. Exits non-zero when any
// criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bt500_oracle.hpp"
#include "commands.hpp"
#include "vqc/aggregate/aggregate.hpp"
#include "vqc/core/catalog.hpp"
#include "vqc/eval/predictor_eval.hpp"
#include "vqc/screening/screening.hpp"
#include "vqc/session/study_runner.hpp"
#include "vqc/stats/correlation.hpp"
#include "vqc/stats/logistic.hpp"
#include "vqc/stats/moments.hpp"
#include "vqc/stats/wilcoxon.hpp"
#include "vqc/subject/subject_model.hpp"

using namespace vqc;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

int failures = 0;

void criterion(int n, const char* title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0.0 && secs >= budget_s) {
    o.pass = false;
    o.detail += "; over the " + fmt("%.0f", budget_s) + " s budget";
  }
  if (!o.pass) ++failures;
  std::printf("CRITERION %d %s: %s (%s) [%.1f s]\n", n, o.pass ? "PASS" : "FAIL", title,
              o.detail.c_str(), secs);
  std::fflush(stdout);
}

/// Simulated study flattened into the shapes screening and aggregation consume.
struct Study {
  std::vector<core::RatingRecord> ratings;
  std::vector<session::SessionSummary> sessions;
  std::map<std::string, core::Behavior> behavior;
  std::vector<session::SessionRecord> records;
};

Study simulate(const subject::PopulationSpec& spec, std::uint64_t seed,
               core::StudyConfig cfg = {}) {
  cfg.rng_seed = seed;
  const Rng master(seed);
  const core::Catalog catalog(core::generate_catalog(core::CatalogSpec{}, master.derive("catalog")),
                              cfg.n_common);
  auto result = session::simulate_study(catalog, cfg, spec, master.derive("study"));
  Study s;
  for (std::size_t i = 0; i < result.sessions.size(); ++i) {
    const auto& rec = result.sessions[i];
    s.ratings.insert(s.ratings.end(), rec.ratings.begin(), rec.ratings.end());
    s.sessions.push_back(session::summarize(rec, result.population.subjects[i]));
    s.behavior[rec.subject_id] = result.population.subjects[i].behavior;
  }
  s.records = std::move(result.sessions);
  return s;
}

struct Bt500Rates {
  int random_reached = 0, random_rejected = 0;
  int compliant_reached = 0, compliant_rejected = 0;
};

Bt500Rates bt500_rates(const Study& s, const screening::ScreeningReport& rep) {
  std::set<std::string> reached;
  for (const auto& r : rep.surviving) reached.insert(r.subject_id);
  reached.insert(rep.removed_bt500.begin(), rep.removed_bt500.end());
  const std::set<std::string> rejected(rep.removed_bt500.begin(), rep.removed_bt500.end());
  Bt500Rates out;
  for (const auto& id : reached) {
    const bool random = s.behavior.at(id) == core::Behavior::random_rater;
    const bool rej = rejected.count(id) > 0;
    (random ? out.random_reached : out.compliant_reached)++;
    if (rej) (random ? out.random_rejected : out.compliant_rejected)++;
  }
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Silences the commands' progress lines on stderr.
class QuietStderr {
 public:
  QuietStderr() : old_(std::cerr.rdbuf(sink_.rdbuf())) {}
  ~QuietStderr() { std::cerr.rdbuf(old_); }

 private:
  std::ostringstream sink_;
  std::streambuf* old_;
};

eval::PredictorInput feature_input(const eval::MosMap& mos, int cols, Rng& rng, bool oracle) {
  eval::PredictorInput p;
  p.name = oracle ? "oracle" : "noise";
  p.kind = eval::PredictorKind::trainable_features;
  p.values.resize(static_cast<Eigen::Index>(mos.size()), cols);
  Eigen::Index r = 0;
  for (const auto& [id, m] : mos) {
    p.ids.push_back(id);
    for (int c = 0; c < cols; ++c) p.values(r, c) = oracle ? m : rng.normal();
    ++r;
  }
  return p;
}

}  // namespace

int main() {
  const subject::PopulationSpec defaults;

  criterion(1, "stall calibration", 30.0, [] {
    const auto s = subject::stall_statistics(subject::CpuSpec{}, 200000, Rng(2018));
    const bool ok = std::fabs(s.zero_share - 0.77) <= 0.03 && std::fabs(s.under_1s_share - 0.92) <= 0.03;
    return Outcome{ok, "zero-stall " + fmt("%.4f", s.zero_share) + ", under 1 s " +
                           fmt("%.4f", s.under_1s_share) + " over " +
                           std::to_string(s.draws) + " playbacks"};
  });

  Study base;
  screening::ScreeningReport base_rep;
  criterion(2, "split-half reliability", 60.0, [&] {
    base = simulate(defaults, 2018);
    base_rep = screening::screen(base.ratings, base.sessions);
    const double sh = aggregate::split_half(base_rep.surviving, 100, Rng(2018).derive("split-half"));
    const double sd = screening::mean_per_video_std(base_rep.surviving);
    std::vector<double> per_video;
    for (const auto& m : aggregate::compute_mos(base_rep.surviving).videos) {
      per_video.push_back(m.n_ratings);
    }
    const double raters = stats::mean(per_video);
    const bool ok = sh >= 0.97 && std::fabs(sd - 18.0) <= 2.0;
    return Outcome{ok, "mean SROCC " + fmt("%.4f", sh) + " over 100 splits, per-video std " +
                           fmt("%.2f", sd) + ", mean clean ratings/video " + fmt("%.0f", raters)};
  });

  criterion(3, "BT.500 oracle equivalence", 0.0, [] {
    int mismatches = 0, rejected = 0;
    for (int trial = 0; trial < 50; ++trial) {
      Rng rng = Rng(500).derive(trial);
      const auto m = testing::random_bt500_matrix(rng, 20, 15, trial % 4);
      auto want = testing::bt500_oracle(m);
      std::sort(want.begin(), want.end());
      const auto got = screening::bt500_screen(testing::to_entries(m)).rejected;
      if (got != want) ++mismatches;
      rejected += static_cast<int>(want.size());
    }
    return Outcome{mismatches == 0, std::to_string(mismatches) + " mismatches over 50 matrices (" +
                                        std::to_string(rejected) + " oracle rejections)"};
  });

  criterion(4, "screening power", 0.0, [&] {
    auto spec = defaults;
    spec.share_random_raters = 0.05;
    const auto adv = simulate(spec, 2019);
    const auto adv_rates = bt500_rates(adv, screening::screen(adv.ratings, adv.sessions));
    const auto clean_rates = bt500_rates(base, base_rep);
    const double recall = static_cast<double>(adv_rates.random_rejected) /
                          std::max(1, adv_rates.random_reached);
    const double false_rej = static_cast<double>(adv_rates.compliant_rejected) /
                             std::max(1, adv_rates.compliant_reached);
    const double clean_pp = 100.0 * clean_rates.compliant_rejected /
                            std::max(1, clean_rates.compliant_reached);
    const bool ok = recall >= 0.9 && false_rej <= 0.02 && std::fabs(clean_pp - 0.5) <= 0.5;
    return Outcome{ok, "recall " + fmt("%.3f", recall) + " (" +
                           std::to_string(adv_rates.random_rejected) + "/" +
                           std::to_string(adv_rates.random_reached) + "), false rejection " +
                           fmt("%.2f%%", 100.0 * false_rej) + ", no-adversary compliant rate " +
                           fmt("%.2f%%", clean_pp)};
  });

  criterion(5, "DMOS sign", 0.0, [&] {
    int both = 0, positive = 0;
    for (const auto& m : aggregate::compute_mos(base_rep.surviving).videos) {
      if (!m.dmos) continue;
      ++both;
      if (*m.dmos > 0.0) ++positive;
    }
    const double share = both > 0 ? static_cast<double>(positive) / both : 0.0;
    return Outcome{both > 0 && share >= 0.95, "DMOS > 0 for " + std::to_string(positive) + " of " +
                                                  std::to_string(both) + " videos (" +
                                                  fmt("%.1f%%", 100.0 * share) + ")"};
  });

  criterion(6, "protocol invariants", 0.0, [] {
    auto spec = subject::PopulationSpec{};
    spec.n_subjects = 12500;
    const auto assets = core::generate_catalog(core::CatalogSpec{}, Rng(2018).derive("catalog"));
    double max_bits = 0.0;
    for (const auto& a : assets) max_bits = std::max(max_bits, a.size_bits);
    spec.network.base_rate_median_bps = max_bits / 30.0;
    spec.network.base_rate_log_sigma = 0.0;
    spec.network.drops_per_session = 0.0;
    spec.network.jitter_sigma = 0.0;
    spec.network.connect_fail_prob = 0.0;
    const auto s = simulate(spec, 2018);
    int completed = 0, bad_counts = 0, bad_repeats = 0, unready = 0;
    const int min_sep = core::StudyConfig{}.repeat_min_separation;
    for (const auto& rec : s.records) {
      unready += rec.unready_videos;
      if (rec.termination != session::Termination::completed || completed >= 10000) continue;
      ++completed;
      int golden = 0, repeat = 0, common = 0, random = 0;
      for (const auto& r : rec.ratings) {
        if (r.is_golden) ++golden;
        else if (r.is_repeat) ++repeat;
        else if (r.is_common) ++common;
        else ++random;
      }
      if (rec.ratings.size() != 43 || golden != 4 || random != 31 || repeat != 4 || common != 4) {
        ++bad_counts;
      }
      const auto& test = rec.playlist.test;
      for (std::size_t k = 0; k < test.size(); ++k) {
        if (test[k].kind != session::SlotKind::repeat) continue;
        const bool ok = test[k].repeat_of && *test[k].repeat_of >= 0 &&
                        static_cast<std::size_t>(*test[k].repeat_of) < k &&
                        test[static_cast<std::size_t>(*test[k].repeat_of)].asset == test[k].asset &&
                        static_cast<int>(k) - *test[k].repeat_of >= min_sep;
        if (!ok) ++bad_repeats;
      }
    }
    const bool ok = completed == 10000 && bad_counts == 0 && bad_repeats == 0 && unready == 0;
    return Outcome{ok, std::to_string(completed) + " completed sessions checked, " +
                           std::to_string(bad_counts) + " with wrong tag counts, " +
                           std::to_string(bad_repeats) + " bad repeats, " +
                           std::to_string(unready) + " unready videos at " +
                           fmt("%.2f", spec.network.base_rate_median_bps / 1e6) + " Mbps"};
  });

  criterion(7, "golden validation fidelity", 0.0, [] {
    auto spec = subject::PopulationSpec{};
    spec.n_subjects = 1000;
    spec.share_skippers = 0.0;
    spec.share_erratic = 0.0;
    spec.gain_sigma = 0.0;
    spec.bias_sigma = 0.0;
    spec.noise_min = spec.noise_max = 0.0;
    spec.age_offsets = {0, 0, 0, 0};
    spec.female_offset = 0.0;
    spec.cpu.stall_prob = {0.0, 0.0, 0.0};
    const auto s = simulate(spec, 2020);
    const auto rep = screening::screen(s.ratings, s.sessions);
    const auto assets = core::generate_catalog(core::CatalogSpec{}, Rng(2020).derive("catalog"));
    std::map<std::string, double> truth;
    for (const auto& a : assets) {
      if (a.golden_ground_truth_mos) truth[a.id] = *a.golden_ground_truth_mos;
    }
    const auto g = aggregate::golden_validation(rep.surviving, truth);
    const bool ok = g.mad && g.srocc && std::fabs(*g.mad - 8.5) <= 0.01 && *g.srocc == 1.0;
    return Outcome{ok, "MAD " + (g.mad ? fmt("%.4f", *g.mad) : "n/a") + ", SROCC " +
                           (g.srocc ? fmt("%.4f", *g.srocc) : "n/a") + " over " +
                           std::to_string(g.n_subjects) + " subjects"};
  });

  criterion(8, "evaluation harness sanity", 120.0, [] {
    Rng rng(8);
    eval::MosMap mos;
    for (int i = 0; i < 585; ++i) mos["V" + std::to_string(1000 + i)] = 100.0 * rng.beta(4.0, 2.0);
    eval::TrainOptions opt;
    opt.reps = 100;
    const auto oracle = eval::eval_median100(feature_input(mos, 1, rng, true), mos, Rng(81), opt);
    const auto noise = eval::eval_median100(feature_input(mos, 5, rng, false), mos, Rng(82), opt);
    std::vector<double> values;
    for (const auto& [id, m] : mos) values.push_back(m);
    rng.shuffle(values.begin(), values.end());
    eval::MosMap shuffled;
    std::size_t k = 0;
    for (const auto& [id, m] : mos) shuffled[id] = values[k++];
    const auto leak = eval::eval_median100(feature_input(mos, 1, rng, true), shuffled, Rng(83), opt);
    const bool ok = oracle.metrics.srocc >= 0.99 && std::fabs(noise.metrics.srocc) <= 0.1 &&
                    std::fabs(leak.metrics.plcc) < 0.1;
    return Outcome{ok, "oracle median SROCC " + fmt("%.4f", oracle.metrics.srocc) +
                           ", noise median SROCC " + fmt("%.4f", noise.metrics.srocc) +
                           ", shuffled-target median PLCC " + fmt("%.4f", leak.metrics.plcc)};
  });

  criterion(9, "numeric kernels", 0.0, [] {
    const std::vector<double> a{1, 2, 3, 4, 5}, b{1, 3, 2, 5, 4};
    const double sr = *stats::srocc(a, b);
    const std::vector<double> z{0, 0}, e{3, 4};
    const double rm = stats::rmse(z, e);
    const std::vector<double> zeros(5, 0.0);
    const double p = stats::wilcoxon_signed_rank(a, zeros).p_value;
    const stats::Logistic4Params truth{80.0, 20.0, 0.5, 0.1};
    std::vector<double> q;
    for (int i = 0; i <= 40; ++i) q.push_back(i / 40.0);
    const auto fit = stats::fit_logistic4(q, truth.apply(q));
    const double err = std::max({std::fabs(fit.params.beta1 - 80.0), std::fabs(fit.params.beta2 - 20.0),
                                 std::fabs(fit.params.beta3 - 0.5),
                                 std::fabs(std::fabs(fit.params.beta4) - 0.1)});
    const bool ok = sr == 0.8 && std::fabs(rm - std::sqrt(12.5)) <= 1e-12 && p == 0.0625 &&
                    err <= 1e-3;
    return Outcome{ok, "SROCC " + fmt("%.16g", sr) + ", RMSE error " +
                           fmt("%.1e", std::fabs(rm - std::sqrt(12.5))) + ", Wilcoxon p " +
                           fmt("%.6g", p) + ", logistic max parameter error " + fmt("%.1e", err)};
  });

  criterion(10, "determinism", 0.0, [] {
    const auto root = fs::temp_directory_path() / "vqc_acceptance_determinism";
    fs::remove_all(root);
    auto opt = [&](const char* name) {
      cli::RunOptions o;
      o.out = root / name;
      o.seed = 7;
      return o;
    };
    int rc = 0;
    {
      QuietStderr quiet;
      rc |= cli::cmd_simulate(opt("sim_a"));
      rc |= cli::cmd_simulate(opt("sim_b"));
      rc |= cli::cmd_run({}, opt("run_a"));
      rc |= cli::cmd_run({}, opt("run_b"));
    }
    int differ = 0;
    for (const char* f : {"ratings.csv", "sessions.csv"}) {
      if (slurp(root / "sim_a" / f) != slurp(root / "sim_b" / f)) ++differ;
    }
    int manifests = 0;
    for (const auto& entry : fs::directory_iterator(root / "run_a")) {
      const auto name = entry.path().filename().string();
      if (name.find(".manifest.json") == std::string::npos) continue;
      ++manifests;
      if (slurp(entry.path()) != slurp(root / "run_b" / name)) ++differ;
    }
    fs::remove_all(root);
    const bool ok = rc == 0 && differ == 0 && manifests == 3;
    return Outcome{ok, std::to_string(differ) + " differing files; " + std::to_string(manifests) +
                           " pipeline manifests compared"};
  });

  return failures == 0 ? 0 : 1;
}
