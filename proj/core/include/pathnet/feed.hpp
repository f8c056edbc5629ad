#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pathnet/graph.hpp"

namespace pathnet {

/// One person of interest and every address they are known to use.
struct FeedEntry {
  std::string person;
  std::vector<std::string> addresses;

  friend bool operator==(const FeedEntry&, const FeedEntry&) = default;
};

struct FeedList {
  std::vector<FeedEntry> entries;

  friend bool operator==(const FeedList&, const FeedList&) = default;
};

/// Reads `name: addr1, addr2` lines. Blank lines and `#` comments are
/// skipped; a line without a colon is a single address naming itself.
/// Addresses are normalized. Throws FormatError.
FeedList parse_feed(std::istream& in);
std::string write_feed(const FeedList& feed);

struct ResolvedAddress {
  std::string address;
  std::optional<NodeId> node;
};

struct ResolvedPerson {
  std::string person;
  std::vector<ResolvedAddress> addresses;
};

struct ResolvedFeed {
  std::vector<ResolvedPerson> persons;

  /// Distinct resolved ids in feed order.
  std::vector<NodeId> nodes() const;
  std::vector<std::string> unresolved() const;
  std::size_t resolved_count() const;
  /// Index of the first person owning `v`.
  std::optional<std::size_t> person_of(NodeId v) const;
};

/// Looks every address up in g's label table. Never throws on misses.
ResolvedFeed match_feed(const LabeledGraph& g, const FeedList& feed);

/// match_feed, but a feed with no resolvable address throws InvalidInput.
ResolvedFeed resolve_feed(const LabeledGraph& g, const FeedList& feed);

}  // namespace pathnet
