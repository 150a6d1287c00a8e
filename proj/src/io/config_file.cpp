#include "vqc/io/config_file.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fstream>
#include <functional>
#include <sstream>

#include "vqc/errors.hpp"
#include "vqc/io/csv.hpp"

namespace vqc::io {

namespace {

struct Field {
  std::string section;
  std::string key;
  std::function<void(const std::string&)> set;
  std::function<std::string()> get;
};

double to_double(const std::string& s) { return parse_double(s); }

template <class T>
Field num(std::string section, std::string key, T& ref) {
  return {std::move(section), std::move(key),
          [&ref](const std::string& s) {
            if constexpr (std::is_floating_point_v<T>) {
              ref = static_cast<T>(to_double(s));
            } else {
              ref = static_cast<T>(parse_int(s));
            }
          },
          [&ref] {
            if constexpr (std::is_floating_point_v<T>) {
              return format_double(static_cast<double>(ref));
            } else {
              return std::to_string(ref);
            }
          }};
}

Field seed_field(std::uint64_t& ref) {
  return {"study", "rng_seed",
          [&ref](const std::string& s) { ref = std::stoull(s, nullptr, 0); },
          [&ref] { return std::to_string(ref); }};
}

Field flag(std::string section, std::string key, bool& ref) {
  return {std::move(section), std::move(key),
          [&ref](const std::string& s) {
            if (s == "true" || s == "1") {
              ref = true;
            } else if (s == "false" || s == "0") {
              ref = false;
            } else {
              throw std::invalid_argument("expected true or false");
            }
          },
          [&ref] { return std::string(ref ? "true" : "false"); }};
}

template <std::size_t N>
Field list(std::string section, std::string key, std::array<double, N>& ref) {
  return {std::move(section), std::move(key),
          [&ref](const std::string& s) {
            std::stringstream in(s);
            std::string item;
            std::size_t i = 0;
            while (std::getline(in, item, ',')) {
              if (i >= N) throw std::invalid_argument("too many values");
              const auto b = item.find_first_not_of(" \t");
              const auto e = item.find_last_not_of(" \t");
              ref[i++] = to_double(b == std::string::npos ? "" : item.substr(b, e - b + 1));
            }
            if (i != N) throw std::invalid_argument("expected " + std::to_string(N) + " values");
          },
          [&ref] {
            std::string out;
            for (std::size_t i = 0; i < N; ++i) out += (i ? ", " : "") + format_double(ref[i]);
            return out;
          }};
}

std::vector<Field> fields(RunConfig& c) {
  auto& s = c.study;
  auto& k = c.catalog;
  auto& p = c.population;
  auto& n = c.population.network;
  auto& u = c.population.cpu;
  auto& r = c.screening;
  auto& e = c.evaluation;
  return {
      num("study", "n_training", s.n_training),
      num("study", "n_test", s.n_test),
      num("study", "n_golden", s.n_golden),
      num("study", "n_random", s.n_random),
      num("study", "n_fhd_if_highres", s.n_fhd_if_highres),
      num("study", "n_repeats", s.n_repeats),
      num("study", "n_common", s.n_common),
      num("study", "prefetch_lead_s", s.prefetch_lead_s),
      num("study", "retry_gap_s", s.retry_gap_s),
      num("study", "max_retries", s.max_retries),
      num("study", "reload_on_halt_max", s.reload_on_halt_max),
      num("study", "halt_window_s", s.halt_window_s),
      num("study", "tick_s", s.tick_s),
      num("study", "session_cap_min", s.session_cap_min),
      num("study", "checkpoint1_min", s.checkpoint1_min),
      num("study", "checkpoint2_min", s.checkpoint2_min),
      num("study", "overview_s", s.overview_s),
      num("study", "instructions_s", s.instructions_s),
      num("study", "training_fail_single_s", s.training_fail_single_s),
      num("study", "training_fail_multi_s", s.training_fail_multi_s),
      num("study", "training_fail_multi_count", s.training_fail_multi_count),
      num("study", "stall_session_reject_fraction", s.stall_session_reject_fraction),
      num("study", "bt500_reject_fraction", s.bt500_reject_fraction),
      num("study", "bt500_balance_ratio", s.bt500_balance_ratio),
      num("study", "repeat_min_separation", s.repeat_min_separation),
      seed_field(s.rng_seed),

      num("catalog", "n_videos", k.n_videos),
      num("catalog", "n_fhd", k.n_fhd),
      num("catalog", "n_golden", k.n_golden),
      num("catalog", "beta_a", k.beta_a),
      num("catalog", "beta_b", k.beta_b),
      num("catalog", "bits_per_pixel_frame", k.bits_per_pixel_frame),
      num("catalog", "frame_rate", k.frame_rate),
      num("catalog", "size_log_sigma", k.size_log_sigma),
      {"catalog", "quality",
       [&k](const std::string& v) {
         if (v == "beta") {
           k.quality = core::QualityDistribution::beta;
         } else if (v == "uniform") {
           k.quality = core::QualityDistribution::uniform;
         } else {
           throw std::invalid_argument("expected beta or uniform");
         }
       },
       [&k] { return std::string(k.quality == core::QualityDistribution::beta ? "beta" : "uniform"); }},

      num("population", "n_subjects", p.n_subjects),
      num("population", "share_random_raters", p.share_random_raters),
      num("population", "share_skippers", p.share_skippers),
      num("population", "share_uncorrected_vision", p.share_uncorrected_vision),
      num("population", "share_corrected_worn", p.share_corrected_worn),
      num("population", "share_low_reliability", p.share_low_reliability),
      num("population", "share_returning", p.share_returning),
      num("population", "share_mobile", p.share_mobile),
      num("population", "share_tablet", p.share_tablet),
      num("population", "share_below_min_resolution", p.share_below_min_resolution),
      num("population", "share_unsupported_browser", p.share_unsupported_browser),
      num("population", "share_highres", p.share_highres),
      num("population", "share_female", p.share_female),
      list("population", "age_shares", p.age_shares),
      list("population", "distance_shares", p.distance_shares),
      num("population", "gain_sigma", p.gain_sigma),
      num("population", "bias_sigma", p.bias_sigma),
      num("population", "noise_min", p.noise_min),
      num("population", "noise_max", p.noise_max),
      num("population", "share_erratic", p.share_erratic),
      num("population", "erratic_noise_sigma", p.erratic_noise_sigma),
      list("population", "age_offsets", p.age_offsets),
      num("population", "female_offset", p.female_offset),
      num("population", "stall_penalty_coeff", p.stall_penalty_coeff),
      num("population", "context_shift", p.context_shift),
      num("population", "rating_time_median_s", p.rating_time_median_s),
      num("population", "rating_time_log_sigma", p.rating_time_log_sigma),
      num("population", "presentation_time_log_sigma", p.presentation_time_log_sigma),
      num("population", "skip_rate", p.skip_rate),
      num("population", "misreport_rate", p.misreport_rate),

      num("network", "base_rate_median_bps", n.base_rate_median_bps),
      num("network", "base_rate_log_sigma", n.base_rate_log_sigma),
      num("network", "drops_per_session", n.drops_per_session),
      num("network", "drop_duration_mean_s", n.drop_duration_mean_s),
      num("network", "drop_factor_max", n.drop_factor_max),
      num("network", "outage_share", n.outage_share),
      num("network", "jitter_sigma", n.jitter_sigma),
      num("network", "connect_fail_prob", n.connect_fail_prob),
      num("network", "horizon_s", n.horizon_s),

      list("cpu", "class_shares", u.class_shares),
      list("cpu", "stall_prob", u.stall_prob),
      list("cpu", "stall_log_mu", u.stall_log_mu),
      num("cpu", "stall_log_sigma", u.stall_log_sigma),
      num("cpu", "load_gain", u.load_gain),
      num("cpu", "background_load_max", u.background_load_max),

      flag("screening", "apply_bt500", r.apply_bt500),
      flag("screening", "exclude_incomplete", r.exclude_incomplete),
      num("screening", "video_duration_ms", r.video_duration_ms),
      {"screening", "consistency_threshold",
       [&r](const std::string& v) {
         if (v.empty() || v == "auto") {
           r.consistency_threshold.reset();
         } else {
           r.consistency_threshold = to_double(v);
         }
       },
       [&r] { return r.consistency_threshold ? format_double(*r.consistency_threshold) : "auto"; }},

      {"evaluation", "protocol", [&e](const std::string& v) { e.protocol = v; },
       [&e] { return e.protocol; }},
      num("evaluation", "folds", e.folds),
      num("evaluation", "reps", e.reps),
      num("evaluation", "test_fraction", e.test_fraction),
      num("evaluation", "split_half_reps", e.split_half_reps),
      num("evaluation", "curve_max_n", e.curve_max_n),
      num("evaluation", "curve_step", e.curve_step),
  };
}

void sync_screening(RunConfig& c) {
  // The study section owns the thresholds; screening reads them from there.
  c.screening.stall_reject_fraction = c.study.stall_session_reject_fraction;
  c.screening.bt500_reject_fraction = c.study.bt500_reject_fraction;
  c.screening.bt500_balance_ratio = c.study.bt500_balance_ratio;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  RunConfig cfg;
  const auto binds = fields(cfg);
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ConfigError("config key '" + section + "' must sit inside a section");
    }
    for (const auto& [key, value] : body) {
      auto it = std::find_if(binds.begin(), binds.end(), [&, &sec = section, &k = key](const Field& f) {
        return f.section == sec && f.key == k;
      });
      if (it == binds.end()) throw ConfigError("unknown config key [" + section + "] " + key);
      try {
        it->set(value.data());
      } catch (const std::exception& e) {
        throw ConfigError("bad value for [" + section + "] " + key + ": '" + value.data() + "' (" +
                          e.what() + ")");
      }
    }
  }
  sync_screening(cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string dump_config(const RunConfig& cfg) {
  RunConfig copy = cfg;
  std::ostringstream out;
  std::string current;
  for (const auto& f : fields(copy)) {
    if (f.section != current) {
      if (!current.empty()) out << '\n';
      out << '[' << f.section << "]\n";
      current = f.section;
    }
    out << f.key << " = " << f.get() << '\n';
  }
  return out.str();
}

}  // namespace vqc::io
