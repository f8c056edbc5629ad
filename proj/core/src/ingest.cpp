#include "pathnet/ingest.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <istream>
#include <iterator>
#include <regex>
#include <unordered_map>
#include <unordered_set>

#include "pathnet/error.hpp"

namespace pathnet {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

template <typename Int>
bool parse_fixed(std::string_view text, std::size_t pos, std::size_t width, Int& out) {
  if (pos + width > text.size()) return false;
  for (std::size_t i = pos; i < pos + width; ++i)
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) return false;
  auto res = std::from_chars(text.data() + pos, text.data() + pos + width, out);
  return res.ec == std::errc{};
}

// RFC-4180 reader over a character stream. Quoted fields may span lines.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : it_(in), end_() {}

  // Returns false at end of input. On a malformed row `error` is set and the
  // rest of that physical line is skipped.
  bool next(std::vector<std::string>& fields, std::size_t& start_line, std::string& error) {
    fields.clear();
    error.clear();
    // skip blank lines
    while (it_ != end_ && (*it_ == '\n' || *it_ == '\r')) {
      if (*it_ == '\n') ++line_;
      ++it_;
    }
    if (it_ == end_) return false;
    start_line = line_;

    std::string field;
    bool quoted = false;
    bool after_quote = false;
    for (;;) {
      if (it_ == end_) {
        if (quoted) error = "unterminated quoted field";
        fields.push_back(std::move(field));
        return true;
      }
      const char c = *it_;
      if (quoted) {
        ++it_;
        if (c == '"') {
          if (it_ != end_ && *it_ == '"') {
            field.push_back('"');
            ++it_;
          } else {
            quoted = false;
            after_quote = true;
          }
        } else {
          if (c == '\n') ++line_;
          field.push_back(c);
        }
        continue;
      }
      if (c == ',') {
        ++it_;
        fields.push_back(std::move(field));
        field.clear();
        after_quote = false;
        continue;
      }
      if (c == '\r' || c == '\n') {
        ++it_;
        if (c == '\r' && it_ != end_ && *it_ == '\n') ++it_;
        ++line_;
        fields.push_back(std::move(field));
        return true;
      }
      if (after_quote) {
        error = "unexpected character after closing quote";
        skip_line();
        return true;
      }
      if (c == '"') {
        if (!field.empty()) {
          error = "quote inside unquoted field";
          skip_line();
          return true;
        }
        quoted = true;
        ++it_;
        continue;
      }
      field.push_back(c);
      ++it_;
    }
  }

 private:
  void skip_line() {
    while (it_ != end_ && *it_ != '\n') ++it_;
    if (it_ != end_) {
      ++it_;
      ++line_;
    }
  }

  std::istreambuf_iterator<char> it_;
  std::istreambuf_iterator<char> end_;
  std::size_t line_ = 1;
};

constexpr std::array<std::string_view, 5> kHeader{"message_id", "sender", "recipient", "field",
                                                  "timestamp"};

}  // namespace

std::string_view to_string(RecipientField field) {
  switch (field) {
    case RecipientField::to:
      return "TO";
    case RecipientField::cc:
      return "CC";
    case RecipientField::bcc:
      return "BCC";
  }
  return "?";
}

std::optional<RecipientField> parse_recipient_field(std::string_view text) {
  text = trim(text);
  if (iequals(text, "to")) return RecipientField::to;
  if (iequals(text, "cc")) return RecipientField::cc;
  if (iequals(text, "bcc")) return RecipientField::bcc;
  return std::nullopt;
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  using namespace std::chrono;
  text = trim(text);
  int y = 0;
  unsigned mo = 0, d = 0;
  if (!parse_fixed(text, 0, 4, y) || text.size() < 10 || text[4] != '-' ||
      !parse_fixed(text, 5, 2, mo) || text[7] != '-' || !parse_fixed(text, 8, 2, d))
    return std::nullopt;
  const year_month_day ymd{year{y}, month{mo}, day{d}};
  if (!ymd.ok()) return std::nullopt;
  sys_seconds t{sys_days{ymd}};
  if (text.size() == 10) return t;

  if (text[10] != 'T' && text[10] != 't' && text[10] != ' ') return std::nullopt;
  int hh = 0, mm = 0, ss = 0;
  if (!parse_fixed(text, 11, 2, hh) || text.size() < 19 || text[13] != ':' ||
      !parse_fixed(text, 14, 2, mm) || text[16] != ':' || !parse_fixed(text, 17, 2, ss))
    return std::nullopt;
  if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;
  t += hours{hh} + minutes{mm} + seconds{ss};

  std::size_t pos = 19;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    const std::size_t digits_start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == digits_start) return std::nullopt;
  }
  if (pos == text.size()) return t;
  if ((text[pos] == 'Z' || text[pos] == 'z') && pos + 1 == text.size()) return t;
  if (text[pos] == '+' || text[pos] == '-') {
    const int sign = text[pos] == '+' ? 1 : -1;
    int oh = 0, om = 0;
    if (!parse_fixed(text, pos + 1, 2, oh)) return std::nullopt;
    std::size_t rest = pos + 3;
    if (rest < text.size() && text[rest] == ':') ++rest;
    if (!parse_fixed(text, rest, 2, om) || rest + 2 != text.size()) return std::nullopt;
    if (oh > 23 || om > 59) return std::nullopt;
    return t - sign * (hours{oh} + minutes{om});
  }
  return std::nullopt;
}

std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  const auto day_point = floor<days>(t);
  const year_month_day ymd{day_point};
  const hh_mm_ss hms{t - day_point};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

std::string normalize_address(std::string_view address) {
  address = trim(address);
  std::string out(address);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

ParsedLog parse_log(std::istream& in) {
  CsvReader reader(in);
  std::vector<std::string> fields;
  std::size_t line = 0;
  std::string error;
  if (!reader.next(fields, line, error)) throw FormatError("missing header row");
  if (!error.empty()) throw FormatError("malformed header row: " + error);
  if (fields.size() != kHeader.size() ||
      !std::equal(kHeader.begin(), kHeader.end(), fields.begin(),
                  [](std::string_view want, const std::string& got) {
                    return iequals(want, trim(got));
                  })) {
    throw FormatError("expected header message_id,sender,recipient,field,timestamp");
  }

  ParsedLog log;
  while (reader.next(fields, line, error)) {
    auto reject = [&](std::string reason) { log.rejects.push_back({line, std::move(reason)}); };
    if (!error.empty()) {
      reject(error);
      continue;
    }
    if (fields.size() != kHeader.size()) {
      reject("expected 5 fields, found " + std::to_string(fields.size()));
      continue;
    }
    EmailTransaction record;
    record.message_id = std::string(trim(fields[0]));
    record.sender = normalize_address(fields[1]);
    record.recipient = normalize_address(fields[2]);
    if (record.message_id.empty()) {
      reject("empty message_id");
      continue;
    }
    if (record.sender.empty() || record.recipient.empty()) {
      reject("empty address");
      continue;
    }
    auto field = parse_recipient_field(fields[3]);
    if (!field) {
      reject("unknown recipient field '" + fields[3] + "'");
      continue;
    }
    auto timestamp = parse_timestamp(fields[4]);
    if (!timestamp) {
      reject("unparseable timestamp '" + fields[4] + "'");
      continue;
    }
    record.field = *field;
    record.timestamp = *timestamp;
    log.records.push_back(std::move(record));
  }
  return log;
}

bool CleaningRules::empty() const noexcept {
  return !window_start && !window_end && reject_local_part_patterns.empty() &&
         reject_domain_suffixes.empty() && reject_address_exact.empty();
}

CleanResult clean(std::span<const EmailTransaction> records, const CleaningRules& rules) {
  // Rule indices: 0 = date window, then local-part patterns, domain suffixes,
  // exact addresses.
  std::vector<std::string> names{"date_window"};
  std::vector<std::regex> patterns;
  for (const auto& p : rules.reject_local_part_patterns) {
    names.push_back("reject_local_part " + p);
    patterns.emplace_back(p, std::regex::ECMAScript | std::regex::optimize);
  }
  for (const auto& s : rules.reject_domain_suffixes) names.push_back("reject_domain_suffix " + s);
  for (const auto& a : rules.reject_address_exact) names.push_back("reject_address " + a);

  constexpr int kPass = -1;
  std::unordered_map<std::string, int> verdicts;
  auto address_verdict = [&](const std::string& address) -> int {
    if (auto it = verdicts.find(address); it != verdicts.end()) return it->second;
    int verdict = kPass;
    int rule = 1;
    const auto at = address.rfind('@');
    const std::string local = at == std::string::npos ? address : address.substr(0, at);
    for (const auto& re : patterns) {
      if (verdict == kPass && std::regex_search(local, re)) verdict = rule;
      ++rule;
    }
    for (const auto& suffix : rules.reject_domain_suffixes) {
      if (verdict == kPass && address.ends_with(suffix)) verdict = rule;
      ++rule;
    }
    for (const auto& exact : rules.reject_address_exact) {
      if (verdict == kPass && address == exact) verdict = rule;
      ++rule;
    }
    verdicts.emplace(address, verdict);
    return verdict;
  };

  CleanResult result;
  std::vector<std::size_t> counts(names.size(), 0);
  result.report.input = records.size();
  for (const auto& r : records) {
    const bool in_window = (!rules.window_start || r.timestamp >= *rules.window_start) &&
                           (!rules.window_end || r.timestamp <= *rules.window_end);
    if (!in_window) {
      ++counts[0];
      continue;
    }
    const int s = address_verdict(r.sender);
    const int t = address_verdict(r.recipient);
    if (s != kPass || t != kPass) {
      const int first = s == kPass ? t : (t == kPass ? s : std::min(s, t));
      ++counts[static_cast<std::size_t>(first)];
      continue;
    }
    result.kept.push_back(r);
  }
  result.report.kept = result.kept.size();
  for (std::size_t i = 0; i < names.size(); ++i)
    result.report.per_rule.push_back({names[i], counts[i]});
  return result;
}

std::string_view to_string(BccEdges mode) {
  return mode == BccEdges::all ? "all" : "bcc_only";
}

std::optional<BccEdges> parse_bcc_edges(std::string_view text) {
  if (text == "all") return BccEdges::all;
  if (text == "bcc_only" || text == "bcc-only") return BccEdges::bcc_only;
  return std::nullopt;
}

CorpusSplit split_by_bcc(std::span<const EmailTransaction> records, BccEdges mode) {
  std::unordered_set<std::string_view> bcc_messages;
  std::unordered_set<std::string_view> all_messages;
  for (const auto& r : records) {
    all_messages.insert(r.message_id);
    if (r.field == RecipientField::bcc) bcc_messages.insert(r.message_id);
  }

  CorpusSplit split;
  split.stats.records = records.size();
  split.stats.messages = all_messages.size();
  split.stats.bcc_messages = bcc_messages.size();
  split.stats.tocc_messages = all_messages.size() - bcc_messages.size();
  for (const auto& r : records) {
    if (!bcc_messages.contains(r.message_id)) {
      split.tocc_records.push_back(r);
    } else if (mode == BccEdges::all || r.field == RecipientField::bcc) {
      split.bcc_records.push_back(r);
    } else {
      ++split.stats.discarded_records;
    }
  }
  split.stats.tocc_records = split.tocc_records.size();
  split.stats.bcc_records = split.bcc_records.size();
  return split;
}

BuiltGraph build_graph(std::span<const EmailTransaction> records, bool directed) {
  GraphBuilder builder(directed);
  for (const auto& r : records) {
    const NodeId s = builder.intern(r.sender);
    const NodeId t = builder.intern(r.recipient);
    builder.add_edge(s, t);
  }
  BuiltGraph built;
  built.records = records.size();
  built.self_loops_dropped = builder.dropped_self_loops();
  built.graph = std::move(builder).build();
  return built;
}

}  // namespace pathnet
