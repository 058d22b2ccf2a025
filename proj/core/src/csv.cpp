#include "clockauction/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "clockauction/error.hpp"

namespace clockauction::csv {
namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return std::string(s);
}

std::vector<std::string> split_line(std::string_view line, const std::string& source, std::size_t lineno) {
  std::vector<std::string> out;
  std::string current;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current += ch;
      }
    } else if (ch == '"') {
      quoted = true;
      was_quoted = true;
    } else if (ch == ',') {
      out.push_back(was_quoted ? current : trim(current));
      current.clear();
      was_quoted = false;
    } else {
      current += ch;
    }
  }
  if (quoted) throw ParseError(source, lineno, "unterminated quoted field");
  out.push_back(was_quoted ? current : trim(current));
  return out;
}

}  // namespace

Table Table::read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

Table Table::parse(std::string_view text, std::string source) {
  Table t;
  t.source_ = std::move(source);
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  std::size_t lineno = 0;
  bool have_header = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++lineno;
    if (trim(line).empty() || trim(line).front() == '#') continue;
    auto fields = split_line(line, t.source_, lineno);
    if (!have_header) {
      t.header_ = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != t.header_.size()) {
      throw ParseError(t.source_, lineno,
                       "expected " + std::to_string(t.header_.size()) + " fields, found " +
                           std::to_string(fields.size()));
    }
    t.rows_.push_back(Row{lineno, std::move(fields)});
  }
  if (!have_header) throw ParseError(t.source_, 1, "missing header row");
  return t;
}

bool Table::has_column(std::string_view name) const {
  for (const auto& h : header_) {
    if (h == name) return true;
  }
  return false;
}

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (header_[i] == name) return i;
  }
  throw ParseError(source_, 1, "missing column '" + std::string(name) + "'");
}

const std::string& Table::field(const Row& row, std::size_t column) const {
  return row.fields.at(column);
}

std::int64_t Table::integer(const Row& row, std::size_t column) const {
  const std::string& f = field(row, column);
  std::int64_t value = 0;
  const auto* end = f.data() + f.size();
  auto [ptr, ec] = std::from_chars(f.data(), end, value);
  if (ec != std::errc{} || ptr != end || f.empty()) {
    throw ParseError(source_, row.line, "column '" + header_[column] + "': not an integer: '" + f + "'");
  }
  return value;
}

double Table::real(const Row& row, std::size_t column) const {
  const std::string& f = field(row, column);
  try {
    std::size_t used = 0;
    const double v = std::stod(f, &used);
    if (used != f.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ParseError(source_, row.line, "column '" + header_[column] + "': not a number: '" + f + "'");
  }
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace clockauction::csv
