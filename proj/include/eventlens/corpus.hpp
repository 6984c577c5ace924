#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "eventlens/error.hpp"
#include "eventlens/time.hpp"

namespace eventlens {

// Two-level place category, e.g. Food / Coffee Shop.
struct CategoryPath {
  std::string root;
  std::string specific;
  bool operator==(const CategoryPath&) const = default;
};

// The known specific types (T), their roots, and the event-related subset
// (T_E).
struct CategoryTaxonomy {
  std::map<std::string, std::string> root_of;  // specific -> root
  std::set<std::string> event_types;           // subset of the keys above

  bool has_type(const std::string& specific) const {
    return root_of.count(specific) != 0;
  }
  bool is_event_type(const std::string& specific) const {
    return event_types.count(specific) != 0;
  }
};

struct Venue {
  std::string id;
  std::string name;
  double lat = 0.0;
  double lon = 0.0;
  CategoryPath category;
};

// Interned check-in: indices into Corpus::users() / Corpus::venues().
struct CheckIn {
  int user = -1;
  int venue = -1;
  UtcSeconds ts = 0;
};

// Mutual-friendship graph over interned user indices. Edges are canonical
// (lo < hi), sorted, and unique.
struct SocialGraph {
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<int>> adjacency;  // per user, sorted
};

// Raw (un-interned) records, used when assembling a corpus in memory.
struct CheckInRecord {
  std::string user;
  std::string venue;
  UtcSeconds ts = 0;
};

struct EdgeRecord {
  std::string a;
  std::string b;
};

// Immutable snapshot of the three datasets plus the taxonomy. All accessors
// are safe for concurrent readers once construction is done.
class Corpus {
 public:
  const CategoryTaxonomy& taxonomy() const { return taxonomy_; }
  const std::vector<Venue>& venues() const { return venues_; }        // sorted by id
  const std::vector<std::string>& users() const { return users_; }    // sorted
  const std::vector<CheckIn>& checkins() const { return checkins_; }  // (user, ts, venue)
  const SocialGraph& social() const { return social_; }

  // Throws DataError for an unknown id.
  int venue_index(const std::string& venue_id) const;
  // -1 when missing.
  int find_venue(const std::string& venue_id) const;
  int find_user(const std::string& user_id) const;

  std::int64_t checkin_count(int venue_idx, const TimeWindow& window) const;
  std::int64_t checkin_count(const std::string& venue_id, const TimeWindow& window) const;

  // Distinct user indices with at least one check-in at the venue inside the
  // window, sorted ascending (== lexicographic user-id order).
  std::vector<int> visitors(int venue_idx, const TimeWindow& window) const;
  std::vector<std::string> visitor_ids(const std::string& venue_id,
                                       const TimeWindow& window) const;

  // Per-venue check-ins as (ts, user) sorted by ts then user.
  const std::vector<std::pair<UtcSeconds, int>>& venue_events(int venue_idx) const {
    return venue_events_[venue_idx];
  }
  // Check-ins of one user, a contiguous time-sorted slice of checkins().
  std::pair<size_t, size_t> user_range(int user_idx) const {
    return {user_offsets_[user_idx], user_offsets_[user_idx + 1]};
  }

  // [min ts, max ts + 1); the zero window when there are no check-ins.
  TimeWindow span() const { return span_; }

  friend Corpus build_corpus(CategoryTaxonomy taxonomy, std::vector<Venue> venues,
                             const std::vector<CheckInRecord>& checkins,
                             const std::vector<EdgeRecord>& edges,
                             const std::optional<TimeWindow>& declared_bounds);

 private:
  Corpus() = default;

  CategoryTaxonomy taxonomy_;
  std::vector<Venue> venues_;
  std::vector<std::string> users_;
  std::vector<CheckIn> checkins_;
  SocialGraph social_;
  std::unordered_map<std::string, int> venue_index_;
  std::unordered_map<std::string, int> user_index_;
  std::vector<std::vector<std::pair<UtcSeconds, int>>> venue_events_;
  std::vector<size_t> user_offsets_;
  TimeWindow span_{0, 0};
};

// Validates cross-references and invariants, interns ids, sorts everything
// into canonical order. Throws DataError on any violation.
Corpus build_corpus(CategoryTaxonomy taxonomy, std::vector<Venue> venues,
                    const std::vector<CheckInRecord>& checkins,
                    const std::vector<EdgeRecord>& edges,
                    const std::optional<TimeWindow>& declared_bounds = std::nullopt);

// File formats:
//   check-ins  JSON lines {"user": str, "venue": str, "ts": ISO-8601}
//   venues     JSON lines {"id": str, "name": str, "lat": f, "lon": f,
//                          "category": "Root/Specific"}
//   social     CSV with header "user_a,user_b"
//   taxonomy   JSON {"types": {"Specific": "Root", ...},
//                    "event_types": ["Specific", ...]}
// Parse errors carry "<path>:<line>:".
Corpus load_corpus(const std::string& checkin_path, const std::string& venue_path,
                   const std::string& social_path, const std::string& taxonomy_path,
                   const std::optional<TimeWindow>& declared_bounds = std::nullopt);

// Hash of the canonical corpus content; equal corpora hash equally.
std::string corpus_digest(const Corpus& corpus);

}  // namespace eventlens
