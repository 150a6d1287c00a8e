#include "vqc/core/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "vqc/errors.hpp"

namespace vqc::core {

std::vector<ResolutionWeight> CatalogSpec::default_standard_resolutions() {
  return {
      {{1280, 720}, 63.0}, {{404, 720}, 25.0}, {{960, 540}, 1.0},  {{800, 450}, 0.8},
      {{480, 640}, 1.0},   {{640, 480}, 1.0},  {{360, 640}, 1.2},  {{640, 360}, 1.2},
      {{352, 640}, 0.8},   {{640, 352}, 0.8},  {{320, 568}, 0.6},  {{568, 320}, 0.6},
      {{360, 480}, 0.6},   {{480, 360}, 0.6},  {{272, 480}, 0.4},  {{240, 320}, 0.2},
      {{320, 240}, 0.2},
  };
}

std::vector<int> apportion(int total, std::span<const double> weights) {
  std::vector<int> counts(weights.size(), 0);
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (weights.empty() || total <= 0 || sum <= 0.0) return counts;
  std::vector<std::pair<double, std::size_t>> remainders;
  int assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double exact = total * weights[i] / sum;
    counts[i] = static_cast<int>(std::floor(exact));
    assigned += counts[i];
    remainders.emplace_back(exact - counts[i], i);
  }
  // Ties go to the earlier entry.
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < total; ++k, ++assigned) {
    ++counts[remainders[k % remainders.size()].second];
  }
  return counts;
}

void validate_asset(const VideoAsset& a) {
  auto fail = [&](const std::string& why) { throw DataError("video " + a.id + ": " + why); };
  if (a.id.empty()) throw DataError("video with empty id");
  if (!(a.duration_s > 0.0)) fail("duration must be positive");
  if (!is_catalog_resolution(a.resolution())) {
    std::ostringstream msg;
    msg << "unknown resolution " << a.width << "x" << a.height;
    fail(msg.str());
  }
  if ((a.pool == Pool::fhd) != (a.resolution() == kFullHd)) {
    fail("pool fhd must coincide with 1920x1080");
  }
  if (a.golden_ground_truth_mos.has_value() != (a.pool == Pool::golden)) {
    fail("golden ground-truth MOS must be present exactly for golden assets");
  }
  if (a.latent_quality < 0.0 || a.latent_quality > 100.0) fail("latent quality outside [0,100]");
  if (!(a.size_bits > 0.0)) fail("size must be positive");
  const Orientation expected = a.width >= a.height ? Orientation::landscape : Orientation::portrait;
  if (a.orientation != expected) fail("orientation does not match resolution");
}

Catalog::Catalog(std::vector<VideoAsset> assets, int n_common) : assets_(std::move(assets)) {
  for (std::size_t i = 0; i < assets_.size(); ++i) {
    validate_asset(assets_[i]);
    if (!by_id_.emplace(assets_[i].id, i).second) {
      throw DataError("duplicate video id " + assets_[i].id);
    }
    switch (assets_[i].pool) {
      case Pool::golden: golden_.push_back(i); break;
      case Pool::fhd: fhd_.push_back(i); break;
      case Pool::standard:
        if (static_cast<int>(common_.size()) < n_common) {
          common_.push_back(i);
        } else {
          standard_.push_back(i);
        }
        break;
    }
  }
}

std::optional<std::size_t> Catalog::find(const std::string& id) const {
  if (auto it = by_id_.find(id); it != by_id_.end()) return it->second;
  return std::nullopt;
}

namespace {

double draw_quality(const CatalogSpec& spec, Rng& rng) {
  if (spec.quality == QualityDistribution::uniform) return rng.uniform(0.0, 100.0);
  return 100.0 * rng.beta(spec.beta_a, spec.beta_b);
}

std::vector<double> golden_truths(const CatalogSpec& spec) {
  if (!spec.golden_mos.empty()) {
    if (static_cast<int>(spec.golden_mos.size()) != spec.n_golden) {
      throw ConfigError("golden_mos lists a different number of values than n_golden");
    }
    return spec.golden_mos;
  }
  std::vector<double> out;
  for (int i = 0; i < spec.n_golden; ++i) {
    out.push_back(spec.n_golden == 1 ? 50.5 : 20.5 + 60.0 * i / (spec.n_golden - 1));
  }
  return out;
}

}  // namespace

std::vector<VideoAsset> generate_catalog(const CatalogSpec& spec, Rng rng) {
  if (spec.n_videos <= 0) throw ConfigError("catalog must contain at least one video");
  if (spec.n_fhd < 0 || spec.n_golden < 0) throw ConfigError("pool sizes must be non-negative");
  const int n_standard = spec.n_videos - spec.n_fhd - spec.n_golden;
  if (n_standard <= 0) throw ConfigError("catalog spec leaves zero standard-pool videos");
  if (spec.quality == QualityDistribution::beta && (spec.beta_a <= 0.0 || spec.beta_b <= 0.0)) {
    throw ConfigError("beta shape parameters must be positive");
  }
  std::vector<double> weights;
  for (const auto& rw : spec.standard_resolutions) {
    if (!is_catalog_resolution(rw.resolution) || rw.resolution == kFullHd) {
      throw ConfigError("standard pool resolutions must be sub-FHD catalog entries");
    }
    weights.push_back(rw.weight);
  }
  if (weights.empty()) throw ConfigError("no standard-pool resolutions given");

  std::vector<Resolution> resolutions(static_cast<std::size_t>(spec.n_fhd), kFullHd);
  const auto counts = apportion(n_standard, weights);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    resolutions.insert(resolutions.end(), static_cast<std::size_t>(counts[i]),
                       spec.standard_resolutions[i].resolution);
  }
  rng.shuffle(resolutions.begin(), resolutions.end());

  auto make_asset = [&](std::string id, Resolution r, Pool pool, double quality) {
    VideoAsset a;
    a.id = std::move(id);
    a.width = r.width;
    a.height = r.height;
    a.orientation = r.width >= r.height ? Orientation::landscape : Orientation::portrait;
    a.pool = pool;
    a.latent_quality = std::clamp(quality, 0.0, 100.0);
    const double nominal =
        double(r.width) * r.height * spec.frame_rate * a.duration_s * spec.bits_per_pixel_frame;
    a.size_bits = nominal * rng.lognormal(0.0, spec.size_log_sigma);
    return a;
  };

  std::vector<VideoAsset> out;
  out.reserve(static_cast<std::size_t>(spec.n_videos));
  const auto truths = golden_truths(spec);
  for (int i = 0; i < spec.n_golden; ++i) {
    std::ostringstream id;
    id << "G" << (i + 1);
    auto a = make_asset(id.str(), spec.golden_resolution, Pool::golden, truths[i]);
    a.golden_ground_truth_mos = truths[i];
    out.push_back(std::move(a));
  }
  for (std::size_t i = 0; i < resolutions.size(); ++i) {
    std::ostringstream id;
    id << "V" << (i + 1);
    const Pool pool = resolutions[i] == kFullHd ? Pool::fhd : Pool::standard;
    out.push_back(make_asset(id.str(), resolutions[i], pool, draw_quality(spec, rng)));
  }
  return out;
}

}  // namespace vqc::core
