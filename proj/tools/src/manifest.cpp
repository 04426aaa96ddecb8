#include "manifest.hpp"

#include <cstdio>
#include <fstream>
#include <iterator>

#include "mpllab/error.hpp"

namespace mpllab::cli {

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

void RunManifest::add_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  const std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
  inputs.emplace_back(path.string(), hex);
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json in = nlohmann::json::object();
  for (const auto& [path, digest] : inputs) in[path] = "fnv1a64:" + digest;
  return {{"subcommand", subcommand}, {"flags", flags},     {"seed", seed},
          {"version", version},       {"inputs", in},       {"wall_seconds", wall_seconds}};
}

}  // namespace mpllab::cli
