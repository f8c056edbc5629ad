#include "pathnet/feed.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <sstream>
#include <unordered_set>

#include "pathnet/error.hpp"
#include "pathnet/ingest.hpp"

namespace pathnet {

namespace {

std::string trimmed(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

}  // namespace

FeedList parse_feed(std::istream& in) {
  FeedList feed;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trimmed(raw);
    if (text.empty() || text.front() == '#') continue;

    FeedEntry entry;
    std::string_view list = text;
    if (const auto colon = text.find(':'); colon != std::string::npos) {
      entry.person = trimmed(std::string_view(text).substr(0, colon));
      list = std::string_view(text).substr(colon + 1);
      if (entry.person.empty())
        throw FormatError("feed line " + std::to_string(line) + ": empty person name");
    }
    std::size_t pos = 0;
    while (pos <= list.size()) {
      const auto comma = std::min(list.find(',', pos), list.size());
      std::string address = normalize_address(list.substr(pos, comma - pos));
      if (!address.empty()) entry.addresses.push_back(std::move(address));
      pos = comma + 1;
    }
    if (entry.addresses.empty())
      throw FormatError("feed line " + std::to_string(line) + ": no address");
    if (entry.person.empty()) entry.person = entry.addresses.front();
    feed.entries.push_back(std::move(entry));
  }
  return feed;
}

std::string write_feed(const FeedList& feed) {
  std::ostringstream out;
  for (const auto& entry : feed.entries) {
    out << entry.person << ':';
    for (std::size_t i = 0; i < entry.addresses.size(); ++i)
      out << (i == 0 ? " " : ", ") << entry.addresses[i];
    out << '\n';
  }
  return out.str();
}

std::vector<NodeId> ResolvedFeed::nodes() const {
  std::vector<NodeId> ids;
  std::unordered_set<NodeId> seen;
  for (const auto& p : persons)
    for (const auto& a : p.addresses)
      if (a.node && seen.insert(*a.node).second) ids.push_back(*a.node);
  return ids;
}

std::vector<std::string> ResolvedFeed::unresolved() const {
  std::vector<std::string> out;
  for (const auto& p : persons)
    for (const auto& a : p.addresses)
      if (!a.node) out.push_back(a.address);
  return out;
}

std::size_t ResolvedFeed::resolved_count() const { return nodes().size(); }

std::optional<std::size_t> ResolvedFeed::person_of(NodeId v) const {
  for (std::size_t i = 0; i < persons.size(); ++i)
    for (const auto& a : persons[i].addresses)
      if (a.node == v) return i;
  return std::nullopt;
}

ResolvedFeed match_feed(const LabeledGraph& g, const FeedList& feed) {
  ResolvedFeed resolved;
  for (const auto& entry : feed.entries) {
    ResolvedPerson person{entry.person, {}};
    std::unordered_set<std::string> seen;
    for (const auto& raw : entry.addresses) {
      std::string address = normalize_address(raw);
      if (!seen.insert(address).second) continue;
      auto node = g.find(address);
      person.addresses.push_back({std::move(address), node});
    }
    resolved.persons.push_back(std::move(person));
  }
  return resolved;
}

ResolvedFeed resolve_feed(const LabeledGraph& g, const FeedList& feed) {
  auto resolved = match_feed(g, feed);
  if (resolved.resolved_count() == 0)
    throw InvalidInput("no feed address occurs in the graph; nothing to investigate");
  return resolved;
}

}  // namespace pathnet
