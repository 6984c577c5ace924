#include "eventlens/mobility.hpp"

#include <algorithm>

namespace eventlens {

TransitionTable::TransitionTable(TimeWindow window, std::vector<Transition> transitions,
                                 size_t venue_count)
    : window_(window), transitions_(std::move(transitions)) {
  incident_.assign(venue_count, {});
  for (size_t i = 0; i < transitions_.size(); ++i) {
    incident_[transitions_[i].from].push_back(static_cast<int>(i));
    incident_[transitions_[i].to].push_back(static_cast<int>(i));
  }
}

TransitionTable extract_transitions(const Corpus& corpus, const TimeWindow& window,
                                    std::int64_t max_gap_s) {
  if (max_gap_s <= 0) throw DataError("max transition gap must be positive");
  std::vector<Transition> transitions;
  const auto& checkins = corpus.checkins();
  for (size_t u = 0; u < corpus.users().size(); ++u) {
    const auto [begin, end] = corpus.user_range(static_cast<int>(u));
    // The user's check-ins are time-sorted, so the windowed subsequence is
    // contiguous.
    size_t lo = begin;
    while (lo < end && checkins[lo].ts < window.start) ++lo;
    size_t hi = lo;
    while (hi < end && checkins[hi].ts < window.end) ++hi;
    for (size_t i = lo; i + 1 < hi; ++i) {
      const CheckIn& a = checkins[i];
      const CheckIn& b = checkins[i + 1];
      const std::int64_t gap = b.ts - a.ts;
      if (a.venue != b.venue && gap <= max_gap_s) {
        transitions.push_back(Transition{a.user, a.venue, b.venue, gap});
      }
    }
  }
  return TransitionTable(window, std::move(transitions), corpus.venues().size());
}

double venue_event_flow_fraction(const Corpus& corpus, const TransitionTable& table,
                                 int venue_idx, const std::set<std::string>& event_types) {
  const auto& incident = table.incident(venue_idx);
  if (incident.empty()) return 0.0;
  int event_touching = 0;
  for (int t : incident) {
    const Transition& tr = table.transitions()[t];
    const int other = tr.from == venue_idx ? tr.to : tr.from;
    if (event_types.count(corpus.venues()[other].category.specific) != 0) {
      ++event_touching;
    }
  }
  return static_cast<double>(event_touching) / static_cast<double>(incident.size());
}

double venue_event_flow_fraction(const Corpus& corpus, const TransitionTable& table,
                                 int venue_idx) {
  return venue_event_flow_fraction(corpus, table, venue_idx,
                                   corpus.taxonomy().event_types);
}

double venue_event_flow_fraction(const Corpus& corpus, const TransitionTable& table,
                                 const std::string& venue_id) {
  return venue_event_flow_fraction(corpus, table, corpus.venue_index(venue_id));
}

std::map<std::string, FlowPair> category_flow_matrix(const Corpus& corpus,
                                                     const TransitionTable& table,
                                                     const std::string& focus_root) {
  std::map<std::string, std::int64_t> out_counts;
  std::map<std::string, std::int64_t> in_counts;
  std::int64_t out_total = 0;
  std::int64_t in_total = 0;
  for (const Transition& t : table.transitions()) {
    const Venue& from = corpus.venues()[t.from];
    const Venue& to = corpus.venues()[t.to];
    if (from.category.root == focus_root) {
      ++out_counts[to.category.specific];
      ++out_total;
    }
    if (to.category.root == focus_root) {
      ++in_counts[from.category.specific];
      ++in_total;
    }
  }
  std::map<std::string, FlowPair> probs;
  for (const auto& [type, count] : out_counts) {
    probs[type].out_prob = static_cast<double>(count) / static_cast<double>(out_total);
  }
  for (const auto& [type, count] : in_counts) {
    probs[type].in_prob = static_cast<double>(count) / static_cast<double>(in_total);
  }
  return probs;
}

FlowDeltas flow_deltas(const Corpus& corpus, const TransitionTable& before,
                       const TransitionTable& during, const std::string& focus_root) {
  const auto before_probs = category_flow_matrix(corpus, before, focus_root);
  const auto during_probs = category_flow_matrix(corpus, during, focus_root);
  std::set<std::string> types;
  for (const auto& [type, p] : before_probs) types.insert(type);
  for (const auto& [type, p] : during_probs) types.insert(type);

  FlowDeltas deltas;
  for (const auto& type : types) {
    FlowPair b, d;
    if (const auto it = before_probs.find(type); it != before_probs.end()) b = it->second;
    if (const auto it = during_probs.find(type); it != during_probs.end()) d = it->second;
    deltas.in.push_back(FlowDelta{type, d.in_prob - b.in_prob});
    deltas.out.push_back(FlowDelta{type, d.out_prob - b.out_prob});
  }
  const auto by_delta_desc = [](const FlowDelta& a, const FlowDelta& b) {
    if (a.delta != b.delta) return a.delta > b.delta;
    return a.type < b.type;
  };
  std::sort(deltas.in.begin(), deltas.in.end(), by_delta_desc);
  std::sort(deltas.out.begin(), deltas.out.end(), by_delta_desc);
  return deltas;
}

std::map<std::string, double> popularity_share(const Corpus& corpus,
                                               const TimeWindow& window) {
  std::map<std::string, std::int64_t> counts;
  std::int64_t total = 0;
  for (const CheckIn& c : corpus.checkins()) {
    if (!window.contains(c.ts)) continue;
    ++counts[corpus.venues()[c.venue].category.root];
    ++total;
  }
  std::map<std::string, double> shares;
  for (const auto& [root, count] : counts) {
    shares[root] = static_cast<double>(count) / static_cast<double>(total);
  }
  return shares;
}

}  // namespace eventlens
