#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace clockauction::cli {

/// Collects artifacts in memory and publishes them together. Each file is written to a
/// temporary sibling and renamed into place, so a failed run leaves no partial output.
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {}

  void add(const std::string& relative, std::string content);
  /// Throws ValidationError if any file cannot be written; already renamed files stay.
  void commit();

  const std::filesystem::path& dir() const noexcept { return dir_; }
  std::size_t size() const noexcept { return files_.size(); }

 private:
  std::filesystem::path dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

}  // namespace clockauction::cli
