#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace clockauction {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);
/// FNV-1a of the file's bytes as 16 hex digits.
std::string file_hash(const std::filesystem::path& path);

/// Provenance of one CLI run. Its hash is stamped into every artifact the run writes.
struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> inputs;  // path, content hash
  std::string config_hash;
  std::string scenario;
  std::string tool_version{kToolVersion};

  void add_input(const std::filesystem::path& path);
  std::string hash() const;
  nlohmann::json to_json() const;
};

}  // namespace clockauction
