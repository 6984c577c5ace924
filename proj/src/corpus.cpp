#include "eventlens/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "eventlens/util.hpp"

namespace eventlens {

namespace {

using nlohmann::json;

[[noreturn]] void fail_at(const std::string& path, size_t line, const std::string& msg) {
  throw DataError(path + ":" + std::to_string(line) + ": " + msg);
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return in;
}

void strip_cr(std::string* line) {
  if (!line->empty() && line->back() == '\r') line->pop_back();
}

CategoryPath parse_category(const std::string& text) {
  const size_t slash = text.find('/');
  if (slash == std::string::npos) {
    throw DataError("category '" + text + "' is not of the form Root/Specific");
  }
  CategoryPath path{text.substr(0, slash), text.substr(slash + 1)};
  if (path.root.empty() || path.specific.empty()) {
    throw DataError("category '" + text + "' has an empty component");
  }
  return path;
}

}  // namespace

int Corpus::find_venue(const std::string& venue_id) const {
  const auto it = venue_index_.find(venue_id);
  return it == venue_index_.end() ? -1 : it->second;
}

int Corpus::find_user(const std::string& user_id) const {
  const auto it = user_index_.find(user_id);
  return it == user_index_.end() ? -1 : it->second;
}

int Corpus::venue_index(const std::string& venue_id) const {
  const int idx = find_venue(venue_id);
  if (idx < 0) throw DataError("unknown venue '" + venue_id + "'");
  return idx;
}

std::int64_t Corpus::checkin_count(int venue_idx, const TimeWindow& window) const {
  const auto& events = venue_events_[venue_idx];
  const auto lo = std::lower_bound(events.begin(), events.end(),
                                   std::make_pair(window.start, -1));
  const auto hi = std::lower_bound(events.begin(), events.end(),
                                   std::make_pair(window.end, -1));
  return hi - lo;
}

std::int64_t Corpus::checkin_count(const std::string& venue_id,
                                   const TimeWindow& window) const {
  return checkin_count(venue_index(venue_id), window);
}

std::vector<int> Corpus::visitors(int venue_idx, const TimeWindow& window) const {
  const auto& events = venue_events_[venue_idx];
  const auto lo = std::lower_bound(events.begin(), events.end(),
                                   std::make_pair(window.start, -1));
  const auto hi = std::lower_bound(events.begin(), events.end(),
                                   std::make_pair(window.end, -1));
  std::vector<int> out;
  out.reserve(hi - lo);
  for (auto it = lo; it != hi; ++it) out.push_back(it->second);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::string> Corpus::visitor_ids(const std::string& venue_id,
                                             const TimeWindow& window) const {
  std::vector<std::string> out;
  for (int u : visitors(venue_index(venue_id), window)) out.push_back(users_[u]);
  return out;
}

Corpus build_corpus(CategoryTaxonomy taxonomy, std::vector<Venue> venues,
                    const std::vector<CheckInRecord>& checkins,
                    const std::vector<EdgeRecord>& edges,
                    const std::optional<TimeWindow>& declared_bounds) {
  for (const auto& t : taxonomy.event_types) {
    if (!taxonomy.has_type(t)) {
      throw DataError("event type '" + t + "' is not a known specific type");
    }
  }

  Corpus corpus;
  corpus.taxonomy_ = std::move(taxonomy);
  corpus.venues_ = std::move(venues);
  std::sort(corpus.venues_.begin(), corpus.venues_.end(),
            [](const Venue& a, const Venue& b) { return a.id < b.id; });

  for (size_t i = 0; i < corpus.venues_.size(); ++i) {
    const Venue& v = corpus.venues_[i];
    if (i > 0 && v.id == corpus.venues_[i - 1].id) {
      throw DataError("duplicate venue id '" + v.id + "'");
    }
    if (!std::isfinite(v.lat) || !std::isfinite(v.lon) || v.lat < -90.0 ||
        v.lat > 90.0 || v.lon < -180.0 || v.lon > 180.0) {
      throw DataError("venue '" + v.id + "' has out-of-range coordinates");
    }
    const auto it = corpus.taxonomy_.root_of.find(v.category.specific);
    if (it == corpus.taxonomy_.root_of.end() || it->second != v.category.root) {
      throw DataError("venue '" + v.id + "' has category '" + v.category.root + "/" +
                      v.category.specific + "' not present in the taxonomy");
    }
    corpus.venue_index_.emplace(v.id, static_cast<int>(i));
  }

  // Users come from both check-ins and social edges; intern them sorted so
  // index order equals lexicographic id order.
  std::vector<std::string> user_ids;
  user_ids.reserve(checkins.size());
  for (const auto& c : checkins) user_ids.push_back(c.user);
  for (const auto& e : edges) {
    user_ids.push_back(e.a);
    user_ids.push_back(e.b);
  }
  std::sort(user_ids.begin(), user_ids.end());
  user_ids.erase(std::unique(user_ids.begin(), user_ids.end()), user_ids.end());
  corpus.users_ = std::move(user_ids);
  for (size_t i = 0; i < corpus.users_.size(); ++i) {
    corpus.user_index_.emplace(corpus.users_[i], static_cast<int>(i));
  }

  corpus.checkins_.reserve(checkins.size());
  for (const auto& c : checkins) {
    const auto vit = corpus.venue_index_.find(c.venue);
    if (vit == corpus.venue_index_.end()) {
      throw DataError("check-in references unknown venue '" + c.venue + "'");
    }
    if (declared_bounds && !declared_bounds->contains(c.ts)) {
      throw DataError("check-in at " + format_iso8601(c.ts) +
                      " lies outside the declared corpus bounds");
    }
    corpus.checkins_.push_back(
        CheckIn{corpus.user_index_.at(c.user), vit->second, c.ts});
  }
  std::sort(corpus.checkins_.begin(), corpus.checkins_.end(),
            [](const CheckIn& a, const CheckIn& b) {
              return std::tie(a.user, a.ts, a.venue) < std::tie(b.user, b.ts, b.venue);
            });

  corpus.social_.edges.reserve(edges.size());
  for (const auto& e : edges) {
    if (e.a == e.b) throw DataError("self-edge on user '" + e.a + "'");
    int a = corpus.user_index_.at(e.a);
    int b = corpus.user_index_.at(e.b);
    if (a > b) std::swap(a, b);
    corpus.social_.edges.emplace_back(a, b);
  }
  std::sort(corpus.social_.edges.begin(), corpus.social_.edges.end());
  corpus.social_.edges.erase(
      std::unique(corpus.social_.edges.begin(), corpus.social_.edges.end()),
      corpus.social_.edges.end());
  corpus.social_.adjacency.assign(corpus.users_.size(), {});
  for (const auto& [a, b] : corpus.social_.edges) {
    corpus.social_.adjacency[a].push_back(b);
    corpus.social_.adjacency[b].push_back(a);
  }

  corpus.venue_events_.assign(corpus.venues_.size(), {});
  for (const auto& c : corpus.checkins_) {
    corpus.venue_events_[c.venue].emplace_back(c.ts, c.user);
  }
  for (auto& events : corpus.venue_events_) {
    std::sort(events.begin(), events.end());
  }

  corpus.user_offsets_.assign(corpus.users_.size() + 1, 0);
  for (const auto& c : corpus.checkins_) ++corpus.user_offsets_[c.user + 1];
  for (size_t i = 1; i < corpus.user_offsets_.size(); ++i) {
    corpus.user_offsets_[i] += corpus.user_offsets_[i - 1];
  }

  if (!corpus.checkins_.empty()) {
    UtcSeconds lo = corpus.checkins_.front().ts;
    UtcSeconds hi = lo;
    for (const auto& c : corpus.checkins_) {
      lo = std::min(lo, c.ts);
      hi = std::max(hi, c.ts);
    }
    corpus.span_ = TimeWindow{lo, hi + 1};
  }
  return corpus;
}

Corpus load_corpus(const std::string& checkin_path, const std::string& venue_path,
                   const std::string& social_path, const std::string& taxonomy_path,
                   const std::optional<TimeWindow>& declared_bounds) {
  CategoryTaxonomy taxonomy;
  {
    std::ifstream in = open_or_throw(taxonomy_path);
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw DataError(taxonomy_path + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("types") || !doc["types"].is_object()) {
      throw DataError(taxonomy_path + ": missing 'types' object");
    }
    for (const auto& [specific, root] : doc["types"].items()) {
      if (!root.is_string() || specific.empty() || root.get<std::string>().empty()) {
        throw DataError(taxonomy_path + ": bad type entry '" + specific + "'");
      }
      taxonomy.root_of[specific] = root.get<std::string>();
    }
    if (doc.contains("event_types")) {
      for (const auto& t : doc["event_types"]) {
        taxonomy.event_types.insert(t.get<std::string>());
      }
    }
  }

  std::vector<Venue> venues;
  std::set<std::string> venue_ids;
  {
    std::ifstream in = open_or_throw(venue_path);
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      strip_cr(&line);
      if (line.empty()) continue;
      json obj;
      try {
        obj = json::parse(line);
        Venue v;
        v.id = obj.at("id").get<std::string>();
        v.name = obj.at("name").get<std::string>();
        v.lat = obj.at("lat").get<double>();
        v.lon = obj.at("lon").get<double>();
        v.category = parse_category(obj.at("category").get<std::string>());
        if (!venue_ids.insert(v.id).second) {
          fail_at(venue_path, line_no, "duplicate venue id '" + v.id + "'");
        }
        venues.push_back(std::move(v));
      } catch (const json::exception& e) {
        fail_at(venue_path, line_no, e.what());
      } catch (const DataError& e) {
        fail_at(venue_path, line_no, e.what());
      }
    }
  }

  std::vector<CheckInRecord> checkins;
  {
    std::ifstream in = open_or_throw(checkin_path);
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      strip_cr(&line);
      if (line.empty()) continue;
      try {
        const json obj = json::parse(line);
        CheckInRecord rec;
        rec.user = obj.at("user").get<std::string>();
        rec.venue = obj.at("venue").get<std::string>();
        rec.ts = parse_iso8601(obj.at("ts").get<std::string>());
        if (venue_ids.count(rec.venue) == 0) {
          fail_at(checkin_path, line_no, "unknown venue '" + rec.venue + "'");
        }
        if (declared_bounds && !declared_bounds->contains(rec.ts)) {
          fail_at(checkin_path, line_no,
                  "timestamp outside the declared corpus bounds");
        }
        checkins.push_back(std::move(rec));
      } catch (const json::exception& e) {
        fail_at(checkin_path, line_no, e.what());
      } catch (const DataError& e) {
        fail_at(checkin_path, line_no, e.what());
      }
    }
  }

  std::vector<EdgeRecord> edges;
  {
    std::ifstream in = open_or_throw(social_path);
    std::string line;
    size_t line_no = 0;
    if (!std::getline(in, line)) {
      throw DataError(social_path + ": empty file, header 'user_a,user_b' required");
    }
    ++line_no;
    strip_cr(&line);
    if (line != "user_a,user_b") {
      fail_at(social_path, line_no, "expected header 'user_a,user_b'");
    }
    while (std::getline(in, line)) {
      ++line_no;
      strip_cr(&line);
      if (line.empty()) continue;
      const auto cols = split(line, ',');
      if (cols.size() != 2 || cols[0].empty() || cols[1].empty()) {
        fail_at(social_path, line_no, "expected two user ids");
      }
      if (cols[0] == cols[1]) {
        fail_at(social_path, line_no, "self-edge on user '" + cols[0] + "'");
      }
      edges.push_back(EdgeRecord{cols[0], cols[1]});
    }
  }

  return build_corpus(std::move(taxonomy), std::move(venues), checkins, edges,
                      declared_bounds);
}

std::string corpus_digest(const Corpus& corpus) {
  Fnv1a h;
  for (const auto& [specific, root] : corpus.taxonomy().root_of) {
    h.feed(specific);
    h.feed(root);
  }
  for (const auto& t : corpus.taxonomy().event_types) h.feed(t);
  for (const auto& v : corpus.venues()) {
    h.feed(v.id);
    h.feed(v.name);
    h.feed(v.lat);
    h.feed(v.lon);
    h.feed(v.category.root);
    h.feed(v.category.specific);
  }
  for (const auto& u : corpus.users()) h.feed(u);
  for (const auto& c : corpus.checkins()) {
    h.feed(static_cast<std::int64_t>(c.user));
    h.feed(static_cast<std::int64_t>(c.venue));
    h.feed(c.ts);
  }
  for (const auto& [a, b] : corpus.social().edges) {
    h.feed(static_cast<std::int64_t>(a));
    h.feed(static_cast<std::int64_t>(b));
  }
  return h.hex();
}

}  // namespace eventlens
