#include "commands.hpp"

#include <chrono>
#include <ctime>
#include <iostream>
#include <set>

#include "json.hpp"
#include "vqc/aggregate/aggregate.hpp"
#include "vqc/core/catalog.hpp"
#include "vqc/errors.hpp"
#include "vqc/eval/predictor_eval.hpp"
#include "vqc/io/config_file.hpp"
#include "vqc/io/csv.hpp"
#include "vqc/io/manifest.hpp"
#include "vqc/io/records_io.hpp"
#include "vqc/screening/screening.hpp"
#include "vqc/session/study_runner.hpp"

namespace vqc::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

io::RunConfig effective_config(const RunOptions& opt) {
  io::RunConfig cfg = opt.config ? io::load_config(*opt.config) : io::RunConfig{};
  if (opt.seed) cfg.study.rng_seed = *opt.seed;
  if (opt.subjects) cfg.population.n_subjects = *opt.subjects;
  return cfg;
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class Outputs {
 public:
  Outputs(const RunOptions& opt, std::string command, const io::RunConfig& cfg)
      : opt_(opt) {
    fs::create_directories(opt.out);
    manifest_.command = std::move(command);
    manifest_.config_hash = io::sha256_hex(io::dump_config(cfg));
    manifest_.seed = cfg.study.rng_seed;
    if (opt.timestamp) manifest_.timestamp = utc_now();
  }

  void input(const fs::path& p) { manifest_.inputs.push_back(io::digest(p, opt_.out)); }

  fs::path write(const std::string& name, const std::string& contents) {
    const auto path = opt_.out / name;
    io::write_file_atomic(path, contents);
    manifest_.outputs.push_back(io::digest(path, opt_.out));
    return path;
  }

  void finish() {
    io::write_file_atomic(opt_.out / (manifest_.command + ".manifest.json"), manifest_.to_json());
  }

 private:
  const RunOptions& opt_;
  io::RunManifest manifest_;
};

template <class Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

void require_file(const fs::path& p, const char* what) {
  if (!fs::is_regular_file(p)) throw DataError(std::string("missing ") + what + " file " + p.string());
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

int cmd_simulate(const RunOptions& opt) {
  return guarded([&] {
    const auto cfg = effective_config(opt);
    const auto violations = core::validate_config(cfg.study);
    if (!violations.empty()) {
      for (const auto& v : violations) std::cerr << "config violation: " << v << '\n';
      return 2;
    }
    const Rng master(cfg.study.rng_seed);
    const core::Catalog catalog(core::generate_catalog(cfg.catalog, master.derive("catalog")),
                                cfg.study.n_common);
    const auto study = session::simulate_study(catalog, cfg.study, cfg.population,
                                               master.derive("study"), opt.jobs);

    std::vector<core::RatingRecord> ratings;
    std::vector<session::SessionSummary> sessions;
    for (std::size_t i = 0; i < study.sessions.size(); ++i) {
      const auto& s = study.sessions[i];
      ratings.insert(ratings.end(), s.ratings.begin(), s.ratings.end());
      sessions.push_back(session::summarize(s, study.population.subjects[i]));
    }
    Outputs out(opt, "simulate", cfg);
    out.write("config.ini", io::dump_config(cfg));
    out.write("catalog.csv", io::catalog_csv(catalog.assets()));
    out.write("ratings.csv", io::ratings_csv(ratings));
    out.write("sessions.csv", io::sessions_csv(sessions));
    out.finish();

    std::map<std::string, int> by_term;
    for (const auto& s : sessions) ++by_term[std::string(session::to_string(s.termination))];
    std::cerr << "simulated " << sessions.size() << " sessions, " << ratings.size() << " ratings:";
    for (const auto& [k, v] : by_term) std::cerr << ' ' << k << '=' << v;
    std::cerr << '\n';
    return 0;
  });
}

int cmd_screen(const ScreenInputs& in, const RunOptions& opt) {
  return guarded([&] {
    const auto cfg = effective_config(opt);
    require_file(in.ratings, "ratings");
    require_file(in.sessions, "sessions");
    const auto ratings = io::read_ratings(in.ratings);
    const auto sessions = io::read_sessions(in.sessions);
    const auto rep = screening::screen(ratings, sessions, cfg.screening);

    Outputs out(opt, "screen", cfg);
    out.input(in.ratings);
    out.input(in.sessions);
    out.write("ledger.csv", io::ledger_csv(rep.ledger));
    out.write("surviving.csv", io::ratings_csv(rep.surviving));

    std::set<std::string> subjects;
    for (const auto& r : ratings) subjects.insert(r.subject_id);
    json j;
    j["subjects_with_ratings"] = subjects.size();
    j["removed_uncorrected"] = rep.removed_uncorrected.size();
    j["removed_skippers"] = rep.removed_skippers.size();
    j["removed_incomplete"] = rep.removed_incomplete.size();
    j["removed_stall_heavy"] = rep.removed_stall_heavy.size();
    j["removed_bt500"] = rep.removed_bt500.size();
    j["unscreened"] = rep.unscreened;
    j["consistency_threshold"] = rep.consistency_threshold;
    j["share_self_consistent"] = screening::share_self_consistent(rep.consistency);
    out.write("screening.json", j.dump(2) + "\n");
    out.finish();
    std::cerr << "screened " << subjects.size() << " subjects, removed " << rep.removed_count()
              << '\n';
    return 0;
  });
}

int cmd_aggregate(const AggregateInputs& in, const RunOptions& opt) {
  return guarded([&] {
    const auto cfg = effective_config(opt);
    require_file(in.ratings, "surviving ratings");
    require_file(in.sessions, "sessions");
    require_file(in.catalog, "catalog");
    const auto ratings = io::read_ratings(in.ratings);
    if (ratings.empty()) throw DataError("surviving rating set is empty");
    const auto sessions = io::read_sessions(in.sessions);
    const auto assets = io::read_catalog(in.catalog);
    const Rng master(cfg.study.rng_seed);

    const auto mos = aggregate::compute_mos(ratings);
    std::map<std::string, double> truth;
    for (const auto& a : assets) {
      if (a.golden_ground_truth_mos) truth[a.id] = *a.golden_ground_truth_mos;
    }
    const auto golden = aggregate::golden_validation(ratings, truth);
    const double split = aggregate::split_half(ratings, cfg.evaluation.split_half_reps,
                                               master.derive("split-half"));
    std::vector<core::RatingRecord> common;
    for (const auto& r : ratings) {
      if (r.is_common) common.push_back(r);
    }
    const auto curves = aggregate::sample_size_curve(common, cfg.evaluation.curve_max_n,
                                                     master.derive("curve"),
                                                     cfg.evaluation.curve_step);

    json j;
    j["n_videos"] = mos.videos.size();
    j["videos_without_clean_ratings"] = mos.without_clean;
    j["mean_per_video_std"] = screening::mean_per_video_std(ratings);
    j["split_half_mean_srocc"] = split;
    j["split_half_reps"] = cfg.evaluation.split_half_reps;
    int both = 0, positive = 0;
    for (const auto& m : mos.videos) {
      if (!m.dmos) continue;
      ++both;
      if (*m.dmos > 0.0) ++positive;
    }
    j["dmos_videos"] = both;
    j["dmos_positive_share"] = both > 0 ? static_cast<double>(positive) / both : 0.0;
    json g;
    g["golden_srocc"] = optional_json(golden.srocc);
    g["golden_mos_srocc"] = optional_json(golden.mos_srocc);
    g["golden_mad"] = optional_json(golden.mad);
    g["wilcoxon_p"] = optional_json(golden.wilcoxon_p);
    g["wilcoxon_p_subjects"] = optional_json(golden.wilcoxon_p_subjects);
    g["n_golden"] = golden.n_golden;
    g["n_subjects"] = golden.n_subjects;
    json entries = json::array();
    for (const auto& [vid, m] : golden.golden_mos) {
      entries.push_back({{"video_id", vid}, {"mos", m}, {"ground_truth", truth.at(vid)},
                         {"mad", std::fabs(m - truth.at(vid))}});
    }
    g["videos"] = entries;
    j["golden"] = g;

    json strat;
    for (auto f : {aggregate::Facet::resolution_pool, aggregate::Facet::display_resolution,
                   aggregate::Facet::device_class, aggregate::Facet::viewing_distance,
                   aggregate::Facet::gender, aggregate::Facet::age_group}) {
      const auto s = aggregate::stratified_analysis(ratings, sessions, f);
      json pairs = json::array();
      for (const auto& p : s.pairs) {
        pairs.push_back({{"a", p.a}, {"b", p.b}, {"shared_videos", p.shared_videos},
                         {"srocc", optional_json(p.srocc)}, {"mean_diff", p.mean_diff}});
      }
      strat[std::string(aggregate::to_string(f))] = {
          {"strata", s.strata}, {"excluded", s.excluded}, {"subjects", s.subjects}, {"pairs", pairs}};
    }
    j["stratified"] = strat;

    json curve;
    for (const auto& [vid, pts] : curves) {
      json arr = json::array();
      for (const auto& p : pts) arr.push_back({{"n", p.n}, {"mos", p.mos}, {"std", p.std}});
      curve[vid] = arr;
    }
    j["sample_size_curve"] = curve;

    Outputs out(opt, "aggregate", cfg);
    out.input(in.ratings);
    out.input(in.sessions);
    out.input(in.catalog);
    out.write("mos.csv", io::mos_csv(mos.videos));
    out.write("validation.json", j.dump(2) + "\n");
    out.finish();
    std::cerr << "aggregated " << mos.videos.size() << " videos, split-half SROCC " << split << '\n';
    return 0;
  });
}

int cmd_evaluate(const EvaluateInputs& in, const RunOptions& opt) {
  return guarded([&] {
    const auto cfg = effective_config(opt);
    if (in.predictors.empty()) throw ConfigError("at least one predictor file is required");
    require_file(in.mos, "mos");
    eval::MosMap mos;
    for (const auto& m : io::read_mos(in.mos)) mos[m.video_id] = m.mos;
    const auto protocol =
        eval::parse_protocol(in.protocol.empty() ? cfg.evaluation.protocol : in.protocol);
    eval::TrainOptions topt;
    topt.folds = cfg.evaluation.folds;
    topt.reps = cfg.evaluation.reps;
    topt.test_fraction = cfg.evaluation.test_fraction;
    topt.jobs = opt.jobs;
    const Rng master(cfg.study.rng_seed);

    Outputs out(opt, "evaluate", cfg);
    out.input(in.mos);
    std::vector<io::EvalRow> rows;
    int failures = 0;
    for (const auto& path : in.predictors) {
      io::EvalRow row;
      row.result.name = path.stem().string();
      row.result.protocol = protocol;
      try {
        require_file(path, "predictor");
        out.input(path);
        const auto pred = eval::load_predictor(path);
        const bool distance = std::find(in.distance.begin(), in.distance.end(), pred.name) !=
                              in.distance.end();
        if (pred.kind == eval::PredictorKind::opinion_unaware_scores) {
          row.result = eval::eval_unaware(pred, mos, distance);
        } else if (protocol == eval::Protocol::cv5_aggregate) {
          row.result = eval::eval_cv5(pred, mos, master.derive(pred.name), topt);
        } else {
          row.result = eval::eval_median100(pred, mos, master.derive(pred.name), topt);
        }
        for (const auto& w : row.result.warnings) std::cerr << pred.name << ": " << w << '\n';
      } catch (const std::exception& e) {
        row.error = e.what();
        ++failures;
        std::cerr << "warning: " << row.result.name << ": " << e.what() << '\n';
      }
      rows.push_back(std::move(row));
    }
    out.write("eval.csv", io::eval_csv(rows));
    out.write("eval.json", io::eval_json(rows));
    out.finish();
    return failures == static_cast<int>(rows.size()) ? 1 : 0;
  });
}

int cmd_run(const EvaluateInputs& eval_in, const RunOptions& opt) {
  if (int rc = cmd_simulate(opt)) return rc;
  if (int rc = cmd_screen({opt.out / "ratings.csv", opt.out / "sessions.csv"}, opt)) return rc;
  if (int rc = cmd_aggregate({opt.out / "surviving.csv", opt.out / "sessions.csv",
                              opt.out / "catalog.csv"},
                             opt)) {
    return rc;
  }
  if (eval_in.predictors.empty()) return 0;
  EvaluateInputs e = eval_in;
  e.mos = opt.out / "mos.csv";
  return cmd_evaluate(e, opt);
}

int cmd_config(const RunOptions& opt) {
  return guarded([&] {
    std::cout << io::dump_config(effective_config(opt));
    return 0;
  });
}

}  // namespace vqc::cli
