#include "vqc/subject/subject_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <iomanip>

#include "vqc/core/catalog.hpp"
#include "vqc/errors.hpp"

namespace vqc::subject {

int rate(const RaterParams& p, double latent_quality, std::int64_t stall_total_ms,
         bool is_golden, Rng& rng) {
  if (p.uniform_random) return static_cast<int>(rng.uniform_int(0, 100));
  const double stall_s = static_cast<double>(std::max<std::int64_t>(0, stall_total_ms)) / 1000.0;
  double score = p.gain * latent_quality + p.bias + (is_golden ? p.context_shift : 0.0) -
                 p.stall_penalty_coeff * std::log1p(stall_s);
  score += rng.normal(0.0, p.noise_sigma);
  return static_cast<int>(std::clamp<long>(std::lround(score), 0, 100));
}

std::vector<netsim::CpuModel> CpuSpec::models() const {
  std::vector<netsim::CpuModel> out;
  for (std::size_t c = 0; c < 3; ++c) {
    netsim::CpuModel m;
    m.cpu_class = static_cast<netsim::CpuClass>(c);
    m.stall_prob_per_video = stall_prob[c];
    m.stall_log_mu = stall_log_mu[c];
    m.stall_log_sigma = stall_log_sigma;
    m.load_gain = load_gain;
    netsim::validate(m);
    out.push_back(m);
  }
  return out;
}

StallStats stall_statistics(const CpuSpec& cpu, std::size_t draws, Rng rng, double tick_s) {
  const auto models = cpu.models();
  core::VideoAsset asset;
  asset.duration_s = 10.0;
  std::discrete_distribution<int> pick(cpu.class_shares.begin(), cpu.class_shares.end());
  StallStats out;
  out.draws = draws;
  std::size_t zero = 0, under = 0;
  for (std::size_t i = 0; i < draws; ++i) {
    const auto& m = models[static_cast<std::size_t>(pick(rng.engine()))];
    const double load = rng.uniform(0.0, cpu.background_load_max);
    const auto r = netsim::simulate_playback(asset, m, load, rng, tick_s);
    if (r.stall_total_ms == 0) ++zero;
    if (r.stall_total_ms < 1000) ++under;
  }
  if (draws > 0) {
    out.zero_share = static_cast<double>(zero) / static_cast<double>(draws);
    out.under_1s_share = static_cast<double>(under) / static_cast<double>(draws);
  }
  return out;
}

namespace {

void check_share(const char* name, double v) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ConfigError(std::string(name) + " must lie in [0,1]");
  }
}

template <std::size_t N>
void check_mix(const char* name, const std::array<double, N>& shares) {
  for (double s : shares) check_share(name, s);
  if (std::accumulate(shares.begin(), shares.end(), 0.0) <= 0.0) {
    throw ConfigError(std::string(name) + " must have positive total weight");
  }
}

/// Exactly apportioned category labels in random order.
std::vector<int> assign(int n, std::span<const double> weights, Rng& rng) {
  const auto counts = core::apportion(n, weights);
  std::vector<int> labels;
  labels.reserve(static_cast<std::size_t>(n));
  for (std::size_t c = 0; c < counts.size(); ++c) {
    labels.insert(labels.end(), static_cast<std::size_t>(counts[c]), static_cast<int>(c));
  }
  rng.shuffle(labels.begin(), labels.end());
  return labels;
}

/// Binary flag with exactly round(share*n) set.
std::vector<int> assign_flag(int n, double share, Rng& rng) {
  const std::array<double, 2> w{1.0 - share, share};
  return assign(n, w, rng);
}

struct WeightedDisplay {
  int w, h;
  double weight;
};

constexpr std::array<WeightedDisplay, 4> kHighRes{
    {{1920, 1080, 0.80}, {2560, 1440, 0.08}, {3840, 2160, 0.05}, {1920, 1200, 0.07}}};
constexpr std::array<WeightedDisplay, 5> kLowRes{{{1366, 768, 0.62},
                                                  {1280, 720, 0.06},
                                                  {1440, 900, 0.14},
                                                  {1600, 900, 0.12},
                                                  {1280, 800, 0.06}}};
constexpr std::array<WeightedDisplay, 2> kBelowMin{{{1024, 768, 0.7}, {1280, 600, 0.3}}};

template <std::size_t N>
std::pair<int, int> pick_display(const std::array<WeightedDisplay, N>& table, Rng& rng) {
  double total = 0.0;
  for (const auto& d : table) total += d.weight;
  double u = rng.uniform(0.0, total);
  for (const auto& d : table) {
    if (u < d.weight) return {d.w, d.h};
    u -= d.weight;
  }
  return {table.back().w, table.back().h};
}

}  // namespace

void validate(const PopulationSpec& spec) {
  if (spec.n_subjects < 0) throw ConfigError("n_subjects must be non-negative");
  for (auto [name, v] : {std::pair{"share_random_raters", spec.share_random_raters},
                         std::pair{"share_skippers", spec.share_skippers},
                         std::pair{"share_uncorrected_vision", spec.share_uncorrected_vision},
                         std::pair{"share_corrected_worn", spec.share_corrected_worn},
                         std::pair{"share_low_reliability", spec.share_low_reliability},
                         std::pair{"share_returning", spec.share_returning},
                         std::pair{"share_mobile", spec.share_mobile},
                         std::pair{"share_tablet", spec.share_tablet},
                         std::pair{"share_below_min_resolution", spec.share_below_min_resolution},
                         std::pair{"share_unsupported_browser", spec.share_unsupported_browser},
                         std::pair{"share_highres", spec.share_highres},
                         std::pair{"share_female", spec.share_female},
                         std::pair{"skip_rate", spec.skip_rate},
                         std::pair{"share_erratic", spec.share_erratic},
                         std::pair{"misreport_rate", spec.misreport_rate}}) {
    check_share(name, v);
  }
  if (spec.share_random_raters + spec.share_skippers > 1.0) {
    throw ConfigError("random-rater and skipper shares together exceed 1");
  }
  if (spec.share_uncorrected_vision + spec.share_corrected_worn > 1.0) {
    throw ConfigError("vision shares together exceed 1");
  }
  if (spec.share_mobile + spec.share_tablet + spec.share_below_min_resolution > 1.0) {
    throw ConfigError("display shares together exceed 1");
  }
  check_mix("age_shares", spec.age_shares);
  check_mix("distance_shares", spec.distance_shares);
  check_mix("cpu class_shares", spec.cpu.class_shares);
  if (spec.noise_min < 0.0 || spec.noise_max < spec.noise_min) {
    throw ConfigError("noise range must satisfy 0 <= noise_min <= noise_max");
  }
  if (spec.erratic_noise_sigma < 0.0) throw ConfigError("erratic noise must be non-negative");
  if (spec.gain_sigma < 0.0 || spec.bias_sigma < 0.0) {
    throw ConfigError("gain and bias spreads must be non-negative");
  }
  if (spec.stall_penalty_coeff < 0.0) throw ConfigError("stall penalty must be non-negative");
  if (spec.rating_time_median_s <= 0.0) throw ConfigError("rating time must be positive");
  if (spec.cpu.background_load_max < 0.0 || spec.cpu.background_load_max > 1.0) {
    throw ConfigError("background_load_max must lie in [0,1]");
  }
  (void)spec.cpu.models();
}

netsim::BandwidthModel draw_bandwidth_model(const NetworkSpec& spec, Rng& rng) {
  netsim::BandwidthModel bw;
  bw.base_rate_bps = spec.base_rate_median_bps * rng.lognormal(0.0, spec.base_rate_log_sigma);
  bw.jitter_sigma = spec.jitter_sigma;
  bw.connect_fail_prob = spec.connect_fail_prob;
  const long drops = rng.poisson(spec.drops_per_session);
  for (long i = 0; i < drops; ++i) {
    netsim::DropEvent d;
    d.start_s = rng.uniform(0.0, spec.horizon_s);
    d.duration_s = rng.exponential(spec.drop_duration_mean_s);
    d.rate_factor = rng.bernoulli(spec.outage_share) ? 0.0 : rng.uniform(0.0, spec.drop_factor_max);
    bw.drop_events.push_back(d);
  }
  std::sort(bw.drop_events.begin(), bw.drop_events.end(),
            [](const auto& a, const auto& b) { return a.start_s < b.start_s; });
  return bw;
}

Population spawn_population(const PopulationSpec& spec, Rng rng) {
  validate(spec);
  const int n = spec.n_subjects;
  Population pop;
  pop.cpu_models = spec.cpu.models();

  // Each attribute has its own stream so adding one never perturbs the others.
  Rng behavior_rng = rng.derive("behavior");
  Rng vision_rng = rng.derive("vision");
  Rng display_rng = rng.derive("display");
  Rng demo_rng = rng.derive("demographics");
  Rng gate_rng = rng.derive("gates");
  Rng cpu_rng = rng.derive("cpu");

  const std::array<double, 3> behavior_w{
      1.0 - spec.share_random_raters - spec.share_skippers, spec.share_random_raters,
      spec.share_skippers};
  const auto behavior = assign(n, behavior_w, behavior_rng);
  const std::array<double, 3> vision_w{
      1.0 - spec.share_uncorrected_vision - spec.share_corrected_worn, spec.share_corrected_worn,
      spec.share_uncorrected_vision};
  const auto vision = assign(n, vision_w, vision_rng);
  // 0 desktop-class adequate, 1 mobile, 2 tablet, 3 below-minimum resolution
  const std::array<double, 4> display_w{
      1.0 - spec.share_mobile - spec.share_tablet - spec.share_below_min_resolution,
      spec.share_mobile, spec.share_tablet, spec.share_below_min_resolution};
  const auto display_kind = assign(n, display_w, display_rng);
  const auto highres = assign_flag(n, spec.share_highres, display_rng);
  const auto browser_bad = assign_flag(n, spec.share_unsupported_browser, display_rng);
  const auto female = assign_flag(n, spec.share_female, demo_rng);
  const auto age = assign(n, spec.age_shares, demo_rng);
  const auto distance = assign(n, spec.distance_shares, demo_rng);
  const auto low_rel = assign_flag(n, spec.share_low_reliability, gate_rng);
  const auto returning = assign_flag(n, spec.share_returning, gate_rng);
  const auto cpu_class = assign(n, spec.cpu.class_shares, cpu_rng);
  const auto erratic = assign_flag(n, spec.share_erratic, behavior_rng);

  pop.subjects.reserve(static_cast<std::size_t>(n));
  pop.bandwidth_models.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    Rng srng = rng.derive("subject", idx);
    core::SubjectProfile s;
    std::ostringstream id;
    id << "W" << std::setw(5) << std::setfill('0') << (i + 1);
    s.id = id.str();
    s.behavior = static_cast<core::Behavior>(behavior[idx]);
    s.vision = static_cast<core::Vision>(vision[idx]);
    s.gender = female[idx] ? core::Gender::female : core::Gender::male;
    s.age_group = static_cast<core::AgeGroup>(age[idx]);
    s.viewing_distance = static_cast<core::ViewingDistance>(distance[idx]);
    s.reliability = low_rel[idx] ? srng.uniform(0.70, 0.90) : std::nextafter(0.90, 1.0) +
                                                                  srng.uniform(0.0, 0.0999);
    s.participated_before = returning[idx] != 0;

    auto& d = s.display;
    d.browser_supported = browser_bad[idx] == 0;
    d.zoom_percent = srng.bernoulli(0.85) ? 100 : static_cast<int>(srng.uniform_int(67, 150));
    switch (display_kind[idx]) {
      case 1: d.device_class = core::DeviceClass::mobile; d.width = 1080; d.height = 1920; break;
      case 2: d.device_class = core::DeviceClass::tablet; d.width = 1536; d.height = 2048; break;
      case 3: {
        auto [w, h] = pick_display(kBelowMin, srng);
        d.width = w;
        d.height = h;
        d.device_class = core::DeviceClass::laptop;
        break;
      }
      default: {
        auto [w, h] = highres[idx] ? pick_display(kHighRes, srng) : pick_display(kLowRes, srng);
        d.width = w;
        d.height = h;
        const double u = srng.uniform();
        d.device_class = u < 0.40 ? core::DeviceClass::desktop
                                  : (u < 0.97 ? core::DeviceClass::laptop : core::DeviceClass::tv);
      }
    }

    s.gain = std::clamp(srng.normal(1.0, spec.gain_sigma), 0.5, 1.5);
    s.bias = srng.normal(0.0, spec.bias_sigma) + spec.age_offsets[static_cast<std::size_t>(age[idx])] +
             (female[idx] ? spec.female_offset : 0.0);
    s.noise_sigma = srng.uniform(spec.noise_min, spec.noise_max);
    if (erratic[idx]) s.noise_sigma = spec.erratic_noise_sigma;
    if (s.behavior == core::Behavior::random_rater) {
      s.gain = 0.0;
      s.bias = 0.0;
    }
    s.rating_time_s =
        spec.rating_time_median_s * srng.lognormal(0.0, spec.rating_time_log_sigma);
    s.background_load = srng.uniform(0.0, spec.cpu.background_load_max);
    s.cpu_model_id = static_cast<std::size_t>(cpu_class[idx]);
    s.bandwidth_model_id = idx;
    pop.bandwidth_models.push_back(draw_bandwidth_model(spec.network, srng));
    pop.subjects.push_back(std::move(s));
  }
  return pop;
}

RaterParams rater_params(const core::SubjectProfile& subject, const PopulationSpec& spec) {
  RaterParams p;
  p.gain = subject.gain;
  p.bias = subject.bias;
  p.noise_sigma = subject.noise_sigma;
  p.stall_penalty_coeff = spec.stall_penalty_coeff;
  p.context_shift = spec.context_shift;
  p.uniform_random = subject.behavior == core::Behavior::random_rater;
  return p;
}

}  // namespace vqc::subject
