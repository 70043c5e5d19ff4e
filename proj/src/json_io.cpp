#include "toombound/json_io.hpp"

#include <fstream>
#include <sstream>

namespace toombound {

TextPosition position_of_offset(std::string_view text, std::size_t offset) {
  TextPosition pos;
  offset = std::min(offset, text.size());
  for (std::size_t i = 0; i < offset; ++i) {
    if (text[i] == '\n') {
      ++pos.line;
      pos.column = 1;
    } else {
      ++pos.column;
    }
  }
  return pos;
}

namespace {

// Structural scanner over already-validated JSON. It never interprets
// values; it only finds where they start and end.
class Scanner {
 public:
  explicit Scanner(std::string_view t) : t_(t) {}

  void skip_ws() {
    while (i_ < t_.size() && (t_[i_] == ' ' || t_[i_] == '\t' || t_[i_] == '\n' || t_[i_] == '\r')) ++i_;
  }

  std::string read_string() {
    std::string out;
    ++i_;  // opening quote
    while (i_ < t_.size() && t_[i_] != '"') {
      if (t_[i_] == '\\' && i_ + 1 < t_.size()) {
        out += t_[i_ + 1];
        i_ += 2;
      } else {
        out += t_[i_++];
      }
    }
    ++i_;
    return out;
  }

  void skip_value() {
    skip_ws();
    if (i_ >= t_.size()) return;
    char c = t_[i_];
    if (c == '"') {
      read_string();
    } else if (c == '{' || c == '[') {
      int depth = 0;
      while (i_ < t_.size()) {
        char d = t_[i_];
        if (d == '"') {
          read_string();
          continue;
        }
        if (d == '{' || d == '[') ++depth;
        if (d == '}' || d == ']') {
          --depth;
          if (depth == 0) {
            ++i_;
            return;
          }
        }
        ++i_;
      }
    } else {
      while (i_ < t_.size() && t_[i_] != ',' && t_[i_] != '}' && t_[i_] != ']' && t_[i_] != ' ' &&
             t_[i_] != '\n' && t_[i_] != '\r' && t_[i_] != '\t') {
        ++i_;
      }
    }
  }

  // Moves to the start of child `step` of the value at the cursor. Returns
  // false (cursor unchanged) when the child does not exist.
  bool descend(const PathStep& step) {
    skip_ws();
    std::size_t start = i_;
    if (i_ >= t_.size()) return false;
    if (std::holds_alternative<std::string>(step) && t_[i_] == '{') {
      ++i_;
      while (true) {
        skip_ws();
        if (i_ >= t_.size() || t_[i_] == '}') break;
        std::string key = read_string();
        skip_ws();
        ++i_;  // ':'
        skip_ws();
        if (key == std::get<std::string>(step)) return true;
        skip_value();
        skip_ws();
        if (i_ < t_.size() && t_[i_] == ',') ++i_;
      }
    } else if (std::holds_alternative<std::size_t>(step) && t_[i_] == '[') {
      ++i_;
      std::size_t k = 0;
      while (true) {
        skip_ws();
        if (i_ >= t_.size() || t_[i_] == ']') break;
        if (k == std::get<std::size_t>(step)) return true;
        skip_value();
        skip_ws();
        if (i_ < t_.size() && t_[i_] == ',') ++i_;
        ++k;
      }
    }
    i_ = start;
    return false;
  }

  std::size_t pos() const { return i_; }

 private:
  std::string_view t_;
  std::size_t i_ = 0;
};

std::string path_string(const JsonPath& path) {
  std::string s;
  for (const auto& step : path) {
    s += "/";
    if (std::holds_alternative<std::string>(step)) {
      s += std::get<std::string>(step);
    } else {
      s += std::to_string(std::get<std::size_t>(step));
    }
  }
  return s.empty() ? "/" : s;
}

}  // namespace

std::size_t locate(std::string_view text, const JsonPath& path) {
  Scanner sc(text);
  for (const auto& step : path) {
    if (!sc.descend(step)) break;
  }
  sc.skip_ws();
  return sc.pos();
}

json parse_json_text(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // nlohmann reports the byte count read so far; the offending byte is the last one.
    std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    TextPosition p = position_of_offset(text, offset);
    throw ParseError(p.line, p.column, std::string("malformed JSON: ") + e.what());
  }
}

void fail_at(std::string_view text, const JsonPath& path, const std::string& what) {
  TextPosition p = position_of_offset(text, locate(text, path));
  throw ParseError(p.line, p.column, path_string(path) + ": " + what);
}

Site site_from_json(std::string_view text, const json& j, const JsonPath& path, int dimension) {
  if (!j.is_array()) fail_at(text, path, "site must be an array of integers");
  if (static_cast<int>(j.size()) != dimension) {
    fail_at(text, path, "site has " + std::to_string(j.size()) + " coordinates, expected " + std::to_string(dimension));
  }
  Site s(dimension);
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number_integer()) {
      JsonPath p = path;
      p.emplace_back(k);
      fail_at(text, p, "coordinate must be an integer");
    }
    s[static_cast<int>(k)] = j[k].get<Coord>();
  }
  return s;
}

json site_to_json(const Site& s) { return json(s.to_vector()); }

json site_set_to_json(const SiteSet& s) {
  json arr = json::array();
  for (const Site& x : s) arr.push_back(site_to_json(x));
  return arr;
}

UpdateFamily parse_family(std::string_view text) {
  json j = parse_json_text(text);
  if (!j.is_object()) fail_at(text, {}, "family must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() != "dimension" && it.key() != "rules") fail_at(text, {it.key()}, "unknown field '" + it.key() + "'");
  }
  if (!j.contains("dimension") || !j["dimension"].is_number_integer()) {
    fail_at(text, {std::string("dimension")}, "missing or non-integer 'dimension'");
  }
  int dim = j["dimension"].get<int>();
  if (dim < 1 || dim > kMaxDim) {
    fail_at(text, {std::string("dimension")}, "dimension must be in [1, " + std::to_string(kMaxDim) + "]");
  }
  if (!j.contains("rules") || !j["rules"].is_array()) fail_at(text, {std::string("rules")}, "missing 'rules' array");
  const json& rules = j["rules"];
  if (rules.empty()) fail_at(text, {std::string("rules")}, "update family has no rules");

  std::vector<SiteSet> parsed;
  for (std::size_t r = 0; r < rules.size(); ++r) {
    JsonPath rp{std::string("rules"), r};
    if (!rules[r].is_array()) fail_at(text, rp, "rule must be an array of sites");
    if (rules[r].empty()) fail_at(text, rp, "rule is empty");
    SiteSet rule;
    for (std::size_t k = 0; k < rules[r].size(); ++k) {
      JsonPath sp = rp;
      sp.emplace_back(k);
      Site s = site_from_json(text, rules[r][k], sp, dim);
      if (s.is_origin()) fail_at(text, sp, "rule contains the origin");
      rule.push_back(s);
    }
    parsed.push_back(std::move(rule));
  }
  return UpdateFamily::make(dim, std::move(parsed));
}

json family_to_json(const UpdateFamily& family) {
  json rules = json::array();
  for (const auto& r : family.rules()) rules.push_back(site_set_to_json(r));
  return json{{"dimension", family.dimension()}, {"rules", rules}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace toombound
