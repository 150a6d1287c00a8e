#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vqc::io {

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

struct FileDigest {
  std::string path;  // as given, relative where possible
  std::string sha256;
};

struct RunManifest {
  std::string command;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::vector<FileDigest> inputs;
  std::vector<FileDigest> outputs;
  /// Left empty unless requested, so reruns produce identical manifests.
  std::optional<std::string> timestamp;

  [[nodiscard]] std::string to_json() const;
};

/// Digest entry for `path`, recorded relative to `base`.
FileDigest digest(const std::filesystem::path& path, const std::filesystem::path& base);

}  // namespace vqc::io
