#pragma once

#include <chrono>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pathnet/graph.hpp"

namespace pathnet {

using Timestamp = std::chrono::sys_seconds;

enum class RecipientField { to, cc, bcc };

std::string_view to_string(RecipientField field);
/// Case-insensitive; nullopt for anything but TO/CC/BCC.
std::optional<RecipientField> parse_recipient_field(std::string_view text);

/// Accepts `YYYY-MM-DD` or `YYYY-MM-DDTHH:MM:SS[.fraction][Z|+HH:MM|-HH:MM]`
/// (a space may replace the `T`). Fractions are truncated; offsets are
/// converted to UTC.
std::optional<Timestamp> parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp t);

/// Lowercase and strip surrounding whitespace.
std::string normalize_address(std::string_view address);

struct EmailTransaction {
  std::string message_id;
  std::string sender;
  std::string recipient;
  RecipientField field;
  Timestamp timestamp;

  friend bool operator==(const EmailTransaction&, const EmailTransaction&) = default;
};

struct RejectedRow {
  std::size_t line;  // 1-based physical line where the row starts
  std::string reason;
};

struct ParsedLog {
  std::vector<EmailTransaction> records;
  std::vector<RejectedRow> rejects;
};

/// Reads the canonical CSV log (header `message_id,sender,recipient,field,timestamp`,
/// RFC-4180 quoting). Malformed rows go to the reject list; a missing or
/// wrong header throws FormatError.
ParsedLog parse_log(std::istream& in);

/// Declarative cleaning rules. A record is kept when its timestamp lies in
/// the window and both addresses pass every reject rule.
struct CleaningRules {
  std::optional<Timestamp> window_start;  // inclusive
  std::optional<Timestamp> window_end;    // inclusive
  /// ECMAScript regexes searched in the local part (text before '@').
  std::vector<std::string> reject_local_part_patterns;
  /// Plain suffixes of the whole address, e.g. "@aircanada.com" or "xpedia.com".
  std::vector<std::string> reject_domain_suffixes;
  std::vector<std::string> reject_address_exact;

  bool empty() const noexcept;
  friend bool operator==(const CleaningRules&, const CleaningRules&) = default;
};

/// Parses the rules text format (see docs/formats.md). Throws FormatError.
CleaningRules parse_rules(std::istream& in);
/// Canonical text form; parse_rules(write_rules(r)) == r.
std::string write_rules(const CleaningRules& rules);

struct RuleCount {
  std::string rule;  // e.g. "date_window", "reject_domain_suffix @aircanada.com"
  std::size_t dropped;
};

struct DropReport {
  std::size_t input = 0;
  std::size_t kept = 0;
  /// One entry per rule including zero counts: date_window first, then
  /// local-part patterns, domain suffixes and exact addresses in listed order.
  /// A record failing several rules is charged to the first one only.
  std::vector<RuleCount> per_rule;
};

struct CleanResult {
  std::vector<EmailTransaction> kept;
  DropReport report;
};

CleanResult clean(std::span<const EmailTransaction> records, const CleaningRules& rules);

/// How recipients of a BCC-bearing message enter the BCC group.
enum class BccEdges {
  all,       // every record of the message
  bcc_only,  // only the BCC records; visible recipients are discarded
};

std::string_view to_string(BccEdges mode);
std::optional<BccEdges> parse_bcc_edges(std::string_view text);

struct SplitStats {
  std::size_t records = 0;
  std::size_t messages = 0;
  std::size_t tocc_messages = 0;
  std::size_t tocc_records = 0;
  std::size_t bcc_messages = 0;
  std::size_t bcc_records = 0;
  /// Visible records of BCC-bearing messages dropped in bcc_only mode.
  std::size_t discarded_records = 0;
};

struct CorpusSplit {
  std::vector<EmailTransaction> tocc_records;
  std::vector<EmailTransaction> bcc_records;
  SplitStats stats;
};

/// Groups records by message_id. Input order is kept inside each group.
CorpusSplit split_by_bcc(std::span<const EmailTransaction> records,
                         BccEdges mode = BccEdges::all);

struct BuiltGraph {
  LabeledGraph graph;
  std::size_t records = 0;  // raw record count, one per sender->recipient row
  std::size_t self_loops_dropped = 0;
};

/// One node per distinct address in first-appearance order (sender before
/// recipient); one sender->recipient edge per record, folded into weights.
BuiltGraph build_graph(std::span<const EmailTransaction> records, bool directed);

}  // namespace pathnet
