#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "eventlens/corpus.hpp"

namespace eventlens {

inline constexpr std::int64_t kDefaultMaxGapSeconds = 86400;

// One user's move between two distinct venues, consecutive check-ins within
// the gap cap.
struct Transition {
  int user = -1;
  int from = -1;
  int to = -1;
  std::int64_t gap_s = 0;
};

class TransitionTable {
 public:
  TransitionTable(TimeWindow window, std::vector<Transition> transitions,
                  size_t venue_count);

  const TimeWindow& window() const { return window_; }
  const std::vector<Transition>& transitions() const { return transitions_; }

  // Indices into transitions() of every transition touching the venue, in
  // transition order. from != to, so a transition never appears twice for
  // the same venue.
  const std::vector<int>& incident(int venue_idx) const {
    return incident_[venue_idx];
  }

 private:
  TimeWindow window_;
  std::vector<Transition> transitions_;
  std::vector<std::vector<int>> incident_;
};

// Per user: sort the user's check-ins inside the window by time and emit one
// ordered transition for every consecutive pair with distinct venues and a
// gap of at most max_gap_s.
TransitionTable extract_transitions(const Corpus& corpus, const TimeWindow& window,
                                    std::int64_t max_gap_s = kDefaultMaxGapSeconds);

// Fraction of the venue's incident transitions whose other endpoint has an
// event-related type. 0 when the venue has no incident transitions.
double venue_event_flow_fraction(const Corpus& corpus, const TransitionTable& table,
                                 int venue_idx, const std::set<std::string>& event_types);
// Defaults the event-type set to the corpus taxonomy's T_E.
double venue_event_flow_fraction(const Corpus& corpus, const TransitionTable& table,
                                 const std::string& venue_id);
double venue_event_flow_fraction(const Corpus& corpus, const TransitionTable& table,
                                 int venue_idx);

struct FlowPair {
  double in_prob = 0.0;
  double out_prob = 0.0;
};

// Conditional type distributions around a root category:
//   out_prob[t] = P(to-type = t   | from-venue root == focus_root)
//   in_prob[t]  = P(from-type = t | to-venue root == focus_root)
// Empty map when no qualifying transitions exist.
std::map<std::string, FlowPair> category_flow_matrix(const Corpus& corpus,
                                                     const TransitionTable& table,
                                                     const std::string& focus_root);

struct FlowDelta {
  std::string type;
  double delta = 0.0;
};

struct FlowDeltas {
  std::vector<FlowDelta> in;   // sorted by delta descending, then type
  std::vector<FlowDelta> out;
};

// Per-type probability(during) - probability(before); types absent from one
// table count as probability 0.
FlowDeltas flow_deltas(const Corpus& corpus, const TransitionTable& before,
                       const TransitionTable& during, const std::string& focus_root);

// Share of the window's check-ins per root category; sums to 1 when the
// window is non-empty.
std::map<std::string, double> popularity_share(const Corpus& corpus,
                                               const TimeWindow& window);

}  // namespace eventlens
