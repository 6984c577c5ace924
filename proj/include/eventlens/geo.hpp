#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "eventlens/corpus.hpp"

namespace eventlens {

inline constexpr double kEarthRadiusM = 6371000.0;

// Great-circle distance in meters, symmetric and non-negative.
double haversine_m(double lat1, double lon1, double lat2, double lon2);
double venue_distance_m(const Venue& a, const Venue& b);

// P(v, r): every venue within r meters of the center, center included.
struct Neighborhood {
  int center = -1;
  double radius_m = 0.0;
  std::vector<int> members;  // sorted venue indices, contains center
};

// Uniform lat/lon grid over the indexed venues. Cells are sized so that a
// radius-r query only needs the cell block around the query point followed by
// an exact haversine filter; the block bounds are exact sphere inequalities,
// so results equal a full scan.
class SpatialIndex {
 public:
  SpatialIndex(const std::vector<Venue>& venues, double cell_size_m);

  // Sorted indices of venues with haversine(query, venue) <= radius_m.
  std::vector<int> within_radius(double lat, double lon, double radius_m) const;

  double cell_size_m() const { return cell_size_m_; }

 private:
  std::pair<std::int64_t, std::int64_t> cell_of(double lat, double lon) const;

  const std::vector<Venue>* venues_;
  double cell_size_m_;
  double cell_deg_lat_;
  double cell_deg_lon_;
  double cos_floor_;  // min cos(lat) over indexed venues, clamped away from 0
  std::int64_t row_min_ = 0, row_max_ = -1, col_min_ = 0, col_max_ = -1;
  std::unordered_map<std::int64_t, std::vector<int>> cells_;
};

Neighborhood neighborhood(const Corpus& corpus, const SpatialIndex& index,
                          int venue_idx, double radius_m);
Neighborhood neighborhood(const Corpus& corpus, const SpatialIndex& index,
                          const std::string& venue_id, double radius_m);

// N_t(v, r): counts per specific type over the neighborhood members; values
// sum to N(v, r).
std::map<std::string, int> count_by_type(const Corpus& corpus, const SpatialIndex& index,
                                         int venue_idx, double radius_m);
std::map<std::string, int> count_by_type(const Corpus& corpus, const SpatialIndex& index,
                                         const std::string& venue_id, double radius_m);

// Closest candidate by haversine distance; ties broken by lexicographic
// venue id. Throws DataError on an empty candidate set.
std::pair<int, double> nearest_of(const Corpus& corpus, int venue_idx,
                                  const std::vector<int>& candidates);
std::pair<std::string, double> nearest_of(const Corpus& corpus,
                                          const std::string& venue_id,
                                          const std::vector<std::string>& candidate_ids);

}  // namespace eventlens
