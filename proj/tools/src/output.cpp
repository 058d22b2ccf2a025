#include "output.hpp"

#include <fstream>
#include <system_error>

#include <clockauction/error.hpp>

namespace clockauction::cli {

void OutputSet::add(const std::string& relative, std::string content) {
  files_.emplace_back(relative, std::move(content));
}

void OutputSet::commit() {
  std::vector<std::pair<std::filesystem::path, std::filesystem::path>> staged;
  auto cleanup = [&] {
    std::error_code ignored;
    for (const auto& [tmp, dest] : staged) std::filesystem::remove(tmp, ignored);
  };
  try {
    for (const auto& [relative, content] : files_) {
      const auto dest = dir_ / relative;
      std::filesystem::create_directories(dest.parent_path());
      auto tmp = dest;
      tmp += ".partial";
      staged.emplace_back(tmp, dest);
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << content;
      out.close();
      if (!out) throw ValidationError("cannot write " + tmp.string());
    }
    for (const auto& [tmp, dest] : staged) std::filesystem::rename(tmp, dest);
  } catch (const std::filesystem::filesystem_error& e) {
    cleanup();
    throw ValidationError(e.what());
  } catch (...) {
    cleanup();
    throw;
  }
  files_.clear();
}

}  // namespace clockauction::cli
