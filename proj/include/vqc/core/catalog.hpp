#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "vqc/core/types.hpp"
#include "vqc/rng.hpp"

namespace vqc::core {

struct ResolutionWeight {
  Resolution resolution;
  double weight = 0.0;
};

enum class QualityDistribution { uniform, beta };

struct CatalogSpec {
  int n_videos = 585;  // includes golden assets
  int n_fhd = 110;
  int n_golden = 4;
  QualityDistribution quality = QualityDistribution::beta;
  double beta_a = 4.0;
  double beta_b = 2.0;
  /// Shares over sub-FHD resolutions for the standard pool.
  std::vector<ResolutionWeight> standard_resolutions = default_standard_resolutions();
  Resolution golden_resolution{960, 540};
  /// Ground-truth MOS of the golden assets; empty means evenly spaced over [20.5, 80.5].
  std::vector<double> golden_mos;
  double bits_per_pixel_frame = 0.1;
  double frame_rate = 30.0;
  double size_log_sigma = 0.3;

  static std::vector<ResolutionWeight> default_standard_resolutions();
};

/// Immutable video catalog with precomputed pool indices.
class Catalog {
 public:
  Catalog() = default;
  explicit Catalog(std::vector<VideoAsset> assets, int n_common = 4);

  [[nodiscard]] std::span<const VideoAsset> assets() const noexcept { return assets_; }
  [[nodiscard]] const VideoAsset& at(std::size_t i) const { return assets_.at(i); }
  [[nodiscard]] std::size_t size() const noexcept { return assets_.size(); }
  [[nodiscard]] std::optional<std::size_t> find(const std::string& id) const;

  [[nodiscard]] const std::vector<std::size_t>& golden() const noexcept { return golden_; }
  [[nodiscard]] const std::vector<std::size_t>& fhd() const noexcept { return fhd_; }
  /// Standard-pool assets that are not in the common set.
  [[nodiscard]] const std::vector<std::size_t>& standard() const noexcept { return standard_; }
  /// The fixed set every subject rates: the first n_common standard assets.
  [[nodiscard]] const std::vector<std::size_t>& common() const noexcept { return common_; }

 private:
  std::vector<VideoAsset> assets_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::vector<std::size_t> golden_, fhd_, standard_, common_;
};

/// Deterministic in (spec, rng seed). Resolution counts are apportioned exactly
/// from the weights, then the catalog order is shuffled.
std::vector<VideoAsset> generate_catalog(const CatalogSpec& spec, Rng rng);

/// Checks the VideoAsset invariants; throws DataError naming the asset.
void validate_asset(const VideoAsset& asset);

/// Largest-remainder apportionment of `total` over `weights`.
std::vector<int> apportion(int total, std::span<const double> weights);

}  // namespace vqc::core
