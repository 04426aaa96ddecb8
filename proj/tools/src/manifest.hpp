#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace mpllab::cli {

/// What produced a report: enough to rerun it byte for byte.
struct RunManifest {
  std::string subcommand;
  nlohmann::json flags = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::string version;
  /// path -> FNV-1a 64 digest of the file bytes, hex.
  std::vector<std::pair<std::string, std::string>> inputs;
  double wall_seconds = 0.0;

  void add_input(const std::filesystem::path& path);
  nlohmann::json to_json() const;
};

std::uint64_t fnv1a64(std::string_view bytes) noexcept;

}  // namespace mpllab::cli
