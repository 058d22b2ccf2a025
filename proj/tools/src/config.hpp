#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include <clockauction/costmodel.hpp>
#include <clockauction/engine.hpp>
#include <clockauction/estimation.hpp>
#include <clockauction/synthetic.hpp>

namespace clockauction::cli {

/// JSON run configuration. Relative paths resolve against the config file's directory.
class Config {
 public:
  Config() = default;
  static Config load(const std::filesystem::path& path);

  const nlohmann::json& raw() const noexcept { return raw_; }
  const std::string& hash() const noexcept { return hash_; }

  /// Throws ValidationError naming the key when it is absent.
  std::filesystem::path require_path(const std::string& key) const;
  std::optional<std::filesystem::path> path(const std::string& key) const;

  AuctionConfig auction(ProductCatalog catalog) const;
  EstimationOptions estimation() const;
  CostParameters cost_parameters() const;
  SyntheticSpec synthetic() const;

 private:
  nlohmann::json raw_ = nlohmann::json::object();
  std::filesystem::path base_;
  std::string hash_ = "none";
};

}  // namespace clockauction::cli
