#pragma once

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "toombound/family.hpp"
#include "toombound/site.hpp"

namespace toombound {

using json = nlohmann::json;

/// Input error carrying a 1-based line/column into the offending text.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

using PathStep = std::variant<std::string, std::size_t>;
using JsonPath = std::vector<PathStep>;

struct TextPosition {
  std::size_t line = 1;
  std::size_t column = 1;
};

TextPosition position_of_offset(std::string_view text, std::size_t offset);

/// Byte offset where the value addressed by `path` starts in syntactically
/// valid JSON `text`; falls back to the deepest reachable ancestor.
std::size_t locate(std::string_view text, const JsonPath& path);

/// Parses JSON text, converting syntax errors into ParseError positions.
json parse_json_text(std::string_view text);

/// Raises a ParseError positioned at `path` inside `text`.
[[noreturn]] void fail_at(std::string_view text, const JsonPath& path, const std::string& what);

/// Reads an array of integers as a Site of the expected dimension.
Site site_from_json(std::string_view text, const json& j, const JsonPath& path, int dimension);
json site_to_json(const Site& s);
json site_set_to_json(const SiteSet& s);

/// {"dimension": d, "rules": [[[x,y,...],...], ...]}
UpdateFamily parse_family(std::string_view text);
json family_to_json(const UpdateFamily& family);

std::string read_file(const std::string& path);

}  // namespace toombound
