#include "eventlens/geo.hpp"

#include <algorithm>
#include <cmath>

namespace eventlens {

namespace {

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

// Largest |delta lat| in radians between two points at great-circle distance
// d: delta_phi <= d / R.
double max_delta_phi(double distance_m) { return distance_m / kEarthRadiusM; }

// Largest |delta lon| in radians between two points at distance d whose
// cos(lat) are both >= cos_floor. From the haversine identity,
// sin(dlon/2) * cos(lat1') * cos(lat2') <= ... yields
// sin(dlon/2) <= sin(d / 2R) / cos_floor.
double max_delta_lambda(double distance_m, double cos_floor) {
  const double s = std::sin(distance_m / (2.0 * kEarthRadiusM)) / cos_floor;
  if (s >= 1.0) return 2.0 * 3.14159265358979323846;
  return 2.0 * std::asin(s);
}

std::int64_t pack_cell(std::int64_t row, std::int64_t col) {
  return (row << 32) ^ (col & 0xffffffffll);
}

}  // namespace

double haversine_m(double lat1, double lon1, double lat2, double lon2) {
  const double p1 = lat1 * kDegToRad;
  const double p2 = lat2 * kDegToRad;
  const double dp = (lat2 - lat1) * kDegToRad;
  const double dl = (lon2 - lon1) * kDegToRad;
  const double sp = std::sin(dp / 2.0);
  const double sl = std::sin(dl / 2.0);
  const double h = sp * sp + std::cos(p1) * std::cos(p2) * sl * sl;
  return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

double venue_distance_m(const Venue& a, const Venue& b) {
  return haversine_m(a.lat, a.lon, b.lat, b.lon);
}

SpatialIndex::SpatialIndex(const std::vector<Venue>& venues, double cell_size_m)
    : venues_(&venues), cell_size_m_(cell_size_m) {
  if (cell_size_m <= 0.0) throw DataError("spatial index cell size must be positive");
  double max_abs_lat = 0.0;
  for (const auto& v : venues) max_abs_lat = std::max(max_abs_lat, std::fabs(v.lat));
  cos_floor_ = std::max(std::cos(max_abs_lat * kDegToRad), 1e-9);
  cell_deg_lat_ = max_delta_phi(cell_size_m) / kDegToRad;
  cell_deg_lon_ = max_delta_lambda(cell_size_m, cos_floor_) / kDegToRad;
  for (size_t i = 0; i < venues.size(); ++i) {
    const auto [row, col] = cell_of(venues[i].lat, venues[i].lon);
    if (cells_.empty()) {
      row_min_ = row_max_ = row;
      col_min_ = col_max_ = col;
    } else {
      row_min_ = std::min(row_min_, row);
      row_max_ = std::max(row_max_, row);
      col_min_ = std::min(col_min_, col);
      col_max_ = std::max(col_max_, col);
    }
    cells_[pack_cell(row, col)].push_back(static_cast<int>(i));
  }
}

std::pair<std::int64_t, std::int64_t> SpatialIndex::cell_of(double lat, double lon) const {
  return {static_cast<std::int64_t>(std::floor(lat / cell_deg_lat_)),
          static_cast<std::int64_t>(std::floor(lon / cell_deg_lon_))};
}

std::vector<int> SpatialIndex::within_radius(double lat, double lon,
                                             double radius_m) const {
  if (radius_m <= 0.0) throw DataError("query radius must be positive");
  const auto [row, col] = cell_of(lat, lon);
  // Cell spans covering the exact lat/lon displacement bounds for radius_m.
  const double cos_here = std::max(std::min(std::cos(lat * kDegToRad), cos_floor_), 1e-9);
  const std::int64_t row_span = static_cast<std::int64_t>(
      std::floor(max_delta_phi(radius_m) / kDegToRad / cell_deg_lat_)) + 1;
  const std::int64_t col_span = static_cast<std::int64_t>(
      std::floor(max_delta_lambda(radius_m, cos_here) / kDegToRad / cell_deg_lon_)) + 1;

  std::vector<int> out;
  if (cells_.empty()) return out;
  // Only occupied cells can contribute.
  const std::int64_t r_lo = std::max(row - row_span, row_min_);
  const std::int64_t r_hi = std::min(row + row_span, row_max_);
  const std::int64_t c_lo = std::max(col - col_span, col_min_);
  const std::int64_t c_hi = std::min(col + col_span, col_max_);
  for (std::int64_t r = r_lo; r <= r_hi; ++r) {
    for (std::int64_t c = c_lo; c <= c_hi; ++c) {
      const auto it = cells_.find(pack_cell(r, c));
      if (it == cells_.end()) continue;
      for (int idx : it->second) {
        const Venue& v = (*venues_)[idx];
        if (haversine_m(lat, lon, v.lat, v.lon) <= radius_m) out.push_back(idx);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Neighborhood neighborhood(const Corpus& corpus, const SpatialIndex& index,
                          int venue_idx, double radius_m) {
  const Venue& v = corpus.venues()[venue_idx];
  Neighborhood n;
  n.center = venue_idx;
  n.radius_m = radius_m;
  n.members = index.within_radius(v.lat, v.lon, radius_m);
  return n;
}

Neighborhood neighborhood(const Corpus& corpus, const SpatialIndex& index,
                          const std::string& venue_id, double radius_m) {
  return neighborhood(corpus, index, corpus.venue_index(venue_id), radius_m);
}

std::map<std::string, int> count_by_type(const Corpus& corpus, const SpatialIndex& index,
                                         int venue_idx, double radius_m) {
  std::map<std::string, int> counts;
  for (int m : neighborhood(corpus, index, venue_idx, radius_m).members) {
    ++counts[corpus.venues()[m].category.specific];
  }
  return counts;
}

std::map<std::string, int> count_by_type(const Corpus& corpus, const SpatialIndex& index,
                                         const std::string& venue_id, double radius_m) {
  return count_by_type(corpus, index, corpus.venue_index(venue_id), radius_m);
}

std::pair<int, double> nearest_of(const Corpus& corpus, int venue_idx,
                                  const std::vector<int>& candidates) {
  if (candidates.empty()) throw DataError("nearest_of: empty candidate set");
  const Venue& origin = corpus.venues()[venue_idx];
  int best = -1;
  double best_dist = 0.0;
  for (int c : candidates) {
    const double d = venue_distance_m(origin, corpus.venues()[c]);
    // Venue indices are in id order, so smaller index == smaller id.
    if (best < 0 || d < best_dist || (d == best_dist && c < best)) {
      best = c;
      best_dist = d;
    }
  }
  return {best, best_dist};
}

std::pair<std::string, double> nearest_of(const Corpus& corpus,
                                          const std::string& venue_id,
                                          const std::vector<std::string>& candidate_ids) {
  std::vector<int> candidates;
  candidates.reserve(candidate_ids.size());
  for (const auto& id : candidate_ids) candidates.push_back(corpus.venue_index(id));
  const auto [idx, dist] = nearest_of(corpus, corpus.venue_index(venue_id), candidates);
  return {corpus.venues()[idx].id, dist};
}

}  // namespace eventlens
