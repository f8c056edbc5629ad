#include <cctype>
#include <istream>
#include <regex>
#include <sstream>
#include <string>

#include "pathnet/error.hpp"
#include "pathnet/ingest.hpp"

namespace pathnet {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail(std::size_t line, const std::string& message) {
  throw FormatError("rules line " + std::to_string(line) + ": " + message);
}

// A bare date as window end means the whole of that day.
std::optional<Timestamp> parse_bound(std::string_view text, bool is_end, std::size_t line) {
  if (text == "*") return std::nullopt;
  auto t = parse_timestamp(text);
  if (!t) fail(line, "bad timestamp '" + std::string(text) + "'");
  if (is_end && text.size() == 10) *t += std::chrono::hours{24} - std::chrono::seconds{1};
  return t;
}

}  // namespace

CleaningRules parse_rules(std::istream& in) {
  CleaningRules rules;
  std::string raw;
  std::size_t line = 0;
  bool seen_window = false;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view text = trim(raw);
    if (text.empty() || text.front() == '#') continue;
    const auto space = text.find_first_of(" \t");
    const std::string_view keyword = text.substr(0, space);
    const std::string_view arg =
        space == std::string_view::npos ? std::string_view{} : trim(text.substr(space));
    if (arg.empty()) fail(line, "missing argument for '" + std::string(keyword) + "'");

    if (keyword == "date_window") {
      if (seen_window) fail(line, "date_window given twice");
      seen_window = true;
      const auto sep = arg.find_first_of(" \t");
      if (sep == std::string_view::npos) fail(line, "date_window needs <start> <end>");
      const auto start = trim(arg.substr(0, sep));
      const auto end = trim(arg.substr(sep));
      if (end.find_first_of(" \t") != std::string_view::npos)
        fail(line, "date_window takes exactly two values");
      rules.window_start = parse_bound(start, false, line);
      rules.window_end = parse_bound(end, true, line);
      if (rules.window_start && rules.window_end && *rules.window_start > *rules.window_end)
        fail(line, "date_window start is after end");
    } else if (keyword == "reject_local_part") {
      try {
        std::regex probe{std::string(arg), std::regex::ECMAScript};
      } catch (const std::regex_error& e) {
        fail(line, "invalid pattern '" + std::string(arg) + "': " + e.what());
      }
      rules.reject_local_part_patterns.emplace_back(arg);
    } else if (keyword == "reject_domain_suffix") {
      rules.reject_domain_suffixes.push_back(normalize_address(arg));
    } else if (keyword == "reject_address") {
      rules.reject_address_exact.push_back(normalize_address(arg));
    } else {
      fail(line, "unknown rule '" + std::string(keyword) + "'");
    }
  }
  return rules;
}

std::string write_rules(const CleaningRules& rules) {
  std::ostringstream out;
  if (rules.window_start || rules.window_end) {
    out << "date_window " << (rules.window_start ? format_timestamp(*rules.window_start) : "*")
        << ' ' << (rules.window_end ? format_timestamp(*rules.window_end) : "*") << '\n';
  }
  for (const auto& p : rules.reject_local_part_patterns) out << "reject_local_part " << p << '\n';
  for (const auto& s : rules.reject_domain_suffixes) out << "reject_domain_suffix " << s << '\n';
  for (const auto& a : rules.reject_address_exact) out << "reject_address " << a << '\n';
  return out.str();
}

}  // namespace pathnet
