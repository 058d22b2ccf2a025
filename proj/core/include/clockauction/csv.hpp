#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace clockauction::csv {

struct Row {
  std::size_t line = 0;  // 1-based line in the source
  std::vector<std::string> fields;
};

/// A header-first comma-separated table. Blank lines and lines starting with '#'
/// are skipped; fields may be double-quoted; surrounding whitespace is trimmed.
class Table {
 public:
  static Table read(const std::filesystem::path& path);
  static Table parse(std::string_view text, std::string source = "<memory>");

  const std::string& source() const noexcept { return source_; }
  const std::vector<std::string>& header() const noexcept { return header_; }
  const std::vector<Row>& rows() const noexcept { return rows_; }

  /// Column index; throws ParseError naming the missing column.
  std::size_t column(std::string_view name) const;
  bool has_column(std::string_view name) const;

  const std::string& field(const Row& row, std::size_t column) const;
  std::int64_t integer(const Row& row, std::size_t column) const;
  double real(const Row& row, std::size_t column) const;

 private:
  std::string source_;
  std::vector<std::string> header_;
  std::vector<Row> rows_;
};

/// Quotes a field when it contains a comma, quote or newline.
std::string escape(std::string_view field);

}  // namespace clockauction::csv
