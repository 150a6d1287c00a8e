#include "vqc/core/types.hpp"

#include <algorithm>
#include <cmath>

#include "vqc/errors.hpp"

namespace vqc::core {

bool is_catalog_resolution(Resolution r) noexcept {
  return std::find(kResolutionCatalog.begin(), kResolutionCatalog.end(), r) !=
         kResolutionCatalog.end();
}

std::int64_t VideoAsset::duration_ms() const noexcept {
  return static_cast<std::int64_t>(std::llround(duration_s * 1000.0));
}

namespace {

template <class Enum, std::size_t N>
Enum parse_token(std::string_view s, const std::array<Enum, N>& values, std::string_view what) {
  for (Enum v : values) {
    if (to_string(v) == s) return v;
  }
  throw DataError("unknown " + std::string(what) + " '" + std::string(s) + "'");
}

}  // namespace

std::string_view to_string(Orientation v) {
  return v == Orientation::landscape ? "landscape" : "portrait";
}

std::string_view to_string(Pool v) {
  switch (v) {
    case Pool::golden: return "golden";
    case Pool::fhd: return "fhd";
    case Pool::standard: return "standard";
  }
  return "?";
}

std::string_view to_string(DeviceClass v) {
  switch (v) {
    case DeviceClass::desktop: return "desktop";
    case DeviceClass::laptop: return "laptop";
    case DeviceClass::tv: return "tv";
    case DeviceClass::mobile: return "mobile";
    case DeviceClass::tablet: return "tablet";
  }
  return "?";
}

std::string_view to_string(Vision v) {
  switch (v) {
    case Vision::normal: return "normal";
    case Vision::corrected_worn: return "corrected_worn";
    case Vision::corrected_not_worn: return "corrected_not_worn";
  }
  return "?";
}

std::string_view to_string(AgeGroup v) {
  switch (v) {
    case AgeGroup::under_20: return "<20";
    case AgeGroup::age_20_30: return "20-30";
    case AgeGroup::age_30_40: return "30-40";
    case AgeGroup::over_40: return ">40";
  }
  return "?";
}

std::string_view to_string(Gender v) { return v == Gender::male ? "male" : "female"; }

std::string_view to_string(ViewingDistance v) {
  switch (v) {
    case ViewingDistance::under_15in: return "<15in";
    case ViewingDistance::from_15_to_30in: return "15-30in";
    case ViewingDistance::over_30in: return ">30in";
  }
  return "?";
}

std::string_view to_string(Behavior v) {
  switch (v) {
    case Behavior::compliant: return "compliant";
    case Behavior::random_rater: return "random_rater";
    case Behavior::skipper: return "skipper";
  }
  return "?";
}

Orientation parse_orientation(std::string_view s) {
  return parse_token(s, std::array{Orientation::landscape, Orientation::portrait}, "orientation");
}
Pool parse_pool(std::string_view s) {
  return parse_token(s, std::array{Pool::golden, Pool::fhd, Pool::standard}, "pool");
}
DeviceClass parse_device_class(std::string_view s) {
  return parse_token(s,
                     std::array{DeviceClass::desktop, DeviceClass::laptop, DeviceClass::tv,
                                DeviceClass::mobile, DeviceClass::tablet},
                     "device class");
}
Vision parse_vision(std::string_view s) {
  return parse_token(
      s, std::array{Vision::normal, Vision::corrected_worn, Vision::corrected_not_worn}, "vision");
}
AgeGroup parse_age_group(std::string_view s) {
  return parse_token(s,
                     std::array{AgeGroup::under_20, AgeGroup::age_20_30, AgeGroup::age_30_40,
                                AgeGroup::over_40},
                     "age group");
}
Gender parse_gender(std::string_view s) {
  return parse_token(s, std::array{Gender::male, Gender::female}, "gender");
}
ViewingDistance parse_viewing_distance(std::string_view s) {
  return parse_token(s,
                     std::array{ViewingDistance::under_15in, ViewingDistance::from_15_to_30in,
                                ViewingDistance::over_30in},
                     "viewing distance");
}

}  // namespace vqc::core
