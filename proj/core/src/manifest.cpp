#include "clockauction/manifest.hpp"

#include <array>
#include <fstream>

#include "clockauction/error.hpp"

namespace clockauction {

std::uint64_t fnv1a(std::string_view data, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) out[static_cast<std::size_t>(i)] = kDigits[v & 0xF];
  return out;
}

std::string file_hash(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    h = fnv1a(std::string_view(buf.data(), static_cast<std::size_t>(in.gcount())), h);
  }
  return hex64(h);
}

void RunManifest::add_input(const std::filesystem::path& path) { inputs.emplace_back(path.string(), file_hash(path)); }

nlohmann::json RunManifest::to_json() const {
  nlohmann::json in = nlohmann::json::array();
  for (const auto& [path, h] : inputs) in.push_back({{"path", path}, {"hash", h}});
  return {{"command", command},
          {"inputs", in},
          {"config_hash", config_hash},
          {"scenario", scenario},
          {"tool_version", tool_version},
          {"determinism", "no random state; identical inputs give identical bytes"}};
}

std::string RunManifest::hash() const {
  // Input paths are left out so relocated copies of the same data hash alike.
  nlohmann::json j = to_json();
  for (auto& i : j["inputs"]) i.erase("path");
  return hex64(fnv1a(j.dump()));
}

}  // namespace clockauction
