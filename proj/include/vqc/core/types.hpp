#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace vqc::core {

struct Resolution {
  int width = 0;
  int height = 0;
  friend bool operator==(const Resolution&, const Resolution&) = default;
};

/// The 18 video resolutions present in the database.
inline constexpr std::array<Resolution, 18> kResolutionCatalog{{
    {1920, 1080}, {1280, 720}, {960, 540}, {800, 450}, {480, 640}, {640, 480},
    {404, 720},   {360, 640},  {640, 360}, {352, 640}, {640, 352}, {320, 568},
    {568, 320},   {360, 480},  {480, 360}, {272, 480}, {240, 320}, {320, 240},
}};

inline constexpr Resolution kFullHd{1920, 1080};
inline constexpr Resolution kMinDisplay{1280, 720};

bool is_catalog_resolution(Resolution r) noexcept;

enum class Orientation { landscape, portrait };
enum class Pool { golden, fhd, standard };

struct VideoAsset {
  std::string id;
  int width = 0;
  int height = 0;
  Orientation orientation = Orientation::landscape;
  double duration_s = 10.0;
  double size_bits = 0.0;
  Pool pool = Pool::standard;
  double latent_quality = 50.0;
  std::optional<double> golden_ground_truth_mos;

  [[nodiscard]] Resolution resolution() const noexcept { return {width, height}; }
  [[nodiscard]] std::int64_t duration_ms() const noexcept;
};

enum class DeviceClass { desktop, laptop, tv, mobile, tablet };

struct DisplayProfile {
  int width = 1920;
  int height = 1080;
  DeviceClass device_class = DeviceClass::desktop;
  bool browser_supported = true;
  int zoom_percent = 100;

  [[nodiscard]] bool is_high_resolution() const noexcept {
    return width >= kFullHd.width && height >= kFullHd.height;
  }
};

enum class Vision { normal, corrected_worn, corrected_not_worn };
enum class AgeGroup { under_20, age_20_30, age_30_40, over_40 };
enum class Gender { male, female };
enum class ViewingDistance { under_15in, from_15_to_30in, over_30in };
enum class Behavior { compliant, random_rater, skipper };

struct SubjectProfile {
  std::string id;
  double reliability = 0.95;
  Vision vision = Vision::normal;
  AgeGroup age_group = AgeGroup::age_20_30;
  Gender gender = Gender::female;
  ViewingDistance viewing_distance = ViewingDistance::from_15_to_30in;
  DisplayProfile display;
  std::size_t bandwidth_model_id = 0;
  std::size_t cpu_model_id = 0;
  double gain = 1.0;
  double bias = 0.0;
  double noise_sigma = 0.0;
  Behavior behavior = Behavior::compliant;
  bool participated_before = false;
  // Session pacing and compute contention.
  double rating_time_s = 8.0;
  double background_load = 0.0;
};

/// One test-phase presentation.
struct RatingRecord {
  std::uint64_t session_id = 0;
  std::string subject_id;
  std::string video_id;
  int position = 0;
  int raw_score = 0;
  std::int64_t stall_total_ms = 0;
  std::int64_t play_duration_ms = 0;
  bool is_golden = false;
  bool is_repeat = false;
  bool is_common = false;
  int cursor_start = 0;

  [[nodiscard]] bool stalled() const noexcept { return stall_total_ms > 0; }
};

std::string_view to_string(Orientation v);
std::string_view to_string(Pool v);
std::string_view to_string(DeviceClass v);
std::string_view to_string(Vision v);
std::string_view to_string(AgeGroup v);
std::string_view to_string(Gender v);
std::string_view to_string(ViewingDistance v);
std::string_view to_string(Behavior v);

// Parsers throw DataError on unknown tokens.
Orientation parse_orientation(std::string_view s);
Pool parse_pool(std::string_view s);
DeviceClass parse_device_class(std::string_view s);
Vision parse_vision(std::string_view s);
AgeGroup parse_age_group(std::string_view s);
Gender parse_gender(std::string_view s);
ViewingDistance parse_viewing_distance(std::string_view s);

}  // namespace vqc::core
