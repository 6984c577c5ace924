#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "eventlens/corpus.hpp"
#include "eventlens/geo.hpp"
#include "eventlens/mobility.hpp"

namespace eventlens {

// Everything the feature computations need to know about the event: anchor
// venues, type selections, the neighborhood radius and the three analysis
// windows.
struct EventConfig {
  std::vector<std::string> hotspot_ids;
  std::vector<std::string> stadium_types;
  std::string sponsor_name_pattern = "McDonald";
  double radius_m = 200.0;
  TimeWindow event_window;
  TimeWindow pre_window;    // same length as the event window, ends at its start
  TimeWindow prior_window;  // baseline period, ends at the event start
};

struct FeatureVector {
  std::string venue_id;
  double olympic_distance = 0.0;
  double stadium_distance = 0.0;
  std::optional<double> sponsor_distance;  // absent when no venue matches the pattern
  double nearby_place_entropy = 0.0;
  double jensen_quality = 0.0;
  std::int64_t popularity = 0;
  double entertainment_flow = 0.0;
  std::int64_t social_area = 0;
};

inline constexpr std::array<const char*, 8> kFeatureNames = {
    "olympic_distance",     "stadium_distance", "sponsor_distance",
    "nearby_place_entropy", "jensen_quality",   "popularity",
    "entertainment_flow",   "social_area"};

// Numeric view of one feature; nullopt for an absent sponsor distance.
std::optional<double> feature_value(const FeatureVector& fv, const std::string& name);

struct FeatureMatrix {
  std::vector<FeatureVector> rows;
  std::vector<std::string> absent_columns;  // e.g. sponsor_distance with no matches
};

// -sum_t (N_t/N) ln(N_t/N); zero counts contribute nothing. Natural log.
double entropy_from_counts(const std::map<std::string, int>& counts);
double nearby_place_entropy(const Corpus& corpus, const SpatialIndex& index,
                            const std::string& venue_id, double radius_m);

// Inter-type attraction coefficients k_{t_p -> t_v} over neighborhoods of
// radius r, plus the per-type mean neighbor counts used by the area quality
// score. k is absent when either type has no venue in the corpus; summands
// with a zero denominator are skipped.
class JensenTable {
 public:
  JensenTable(const Corpus& corpus, const SpatialIndex& index, double radius_m);

  const std::vector<std::string>& types() const { return types_; }
  int type_id(const std::string& specific) const;  // throws DataError when unknown

  std::optional<double> coefficient(int tp, int tv) const { return k_[tp * n_ + tv]; }
  std::optional<double> coefficient(const std::string& tp, const std::string& tv) const;

  // Mean of N_{t_p}(u, r) over all venues u of type t_v.
  double mean_nearby(int tv, int tp) const { return mean_nearby_[tv * n_ + tp]; }

  // Area quality around the venue: sum over types of k-weighted deviations of
  // the local type counts from the mean observed around same-type venues.
  // Absent coefficients contribute 0.
  double quality(const std::map<std::string, int>& venue_counts,
                 const std::string& venue_type) const;

 private:
  size_t n_ = 0;
  std::vector<std::string> types_;
  std::map<std::string, int> type_ids_;
  std::vector<std::optional<double>> k_;
  std::vector<double> mean_nearby_;
};

std::optional<double> jensen_coefficient(const Corpus& corpus, const SpatialIndex& index,
                                         const std::string& type_p,
                                         const std::string& type_v, double radius_m);
double jensen_quality(const Corpus& corpus, const SpatialIndex& index,
                      const std::string& venue_id, double radius_m);

// Precomputes neighborhoods, the Jensen table, the pre-event transition
// table and the anchor venue lists once, then serves per-venue features.
class FeatureEngine {
 public:
  FeatureEngine(const Corpus& corpus, const EventConfig& config);

  const Corpus& corpus() const { return *corpus_; }
  const EventConfig& config() const { return config_; }
  const SpatialIndex& index() const { return *index_; }
  const JensenTable& jensen_table() const { return *jensen_; }
  const TransitionTable& pre_transitions() const { return *pre_table_; }
  bool sponsor_present() const { return !sponsor_venues_.empty(); }

  double olympic_distance(int venue_idx) const;
  double stadium_distance(int venue_idx) const;
  std::optional<double> sponsor_distance(int venue_idx) const;
  double nearby_place_entropy(int venue_idx) const;
  double jensen_quality(int venue_idx) const;
  std::int64_t popularity(int venue_idx) const;
  double entertainment_flow(int venue_idx) const;
  std::int64_t social_area(int venue_idx) const;

  FeatureVector features_of(int venue_idx) const;
  FeatureVector features_of(const std::string& venue_id) const;

  // One row per requested venue, input order preserved. A failing feature
  // aborts with the offending venue named.
  FeatureMatrix feature_matrix(const std::vector<std::string>& venue_ids) const;

 private:
  const std::map<std::string, int>& counts_of(int venue_idx) const;

  const Corpus* corpus_;
  EventConfig config_;
  std::unique_ptr<SpatialIndex> index_;
  std::unique_ptr<JensenTable> jensen_;
  std::unique_ptr<TransitionTable> pre_table_;
  std::vector<int> hotspot_venues_;
  std::vector<int> stadium_venues_;
  std::vector<int> sponsor_venues_;
  std::vector<std::vector<int>> neighborhoods_;        // per venue, sorted
  std::vector<std::map<std::string, int>> type_counts_;  // per venue
};

}  // namespace eventlens
