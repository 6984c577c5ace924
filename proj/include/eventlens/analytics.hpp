#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "eventlens/corpus.hpp"

namespace eventlens {

// Popularity ranking of a set of venues in one period: (venue_id, count)
// sorted by count descending, ties by id.
struct PeriodRanking {
  TimeWindow window;
  std::vector<std::pair<std::string, std::int64_t>> entries;
};

PeriodRanking period_ranking(const Corpus& corpus, const TimeWindow& window,
                             const std::vector<int>& universe);

// Kendall tau-b over paired values:
//   (C - D) / sqrt((C + D + Ta)(C + D + Tb))
// with Ta/Tb the pairs tied only in one input. NaN when one side is all
// ties (zero denominator); throws DataError for fewer than 2 items.
double kendall_tau_b(const std::vector<double>& x, const std::vector<double>& y);

// Throws DataError when the two rankings cover different venue sets.
double kendall_tau_b(const PeriodRanking& a, const PeriodRanking& b);

struct PeriodTau {
  TimeWindow first;
  TimeWindow second;
  double tau = 0.0;  // NaN flags a degenerate pair
  int n_items = 0;
};

// Consecutive equal-length periods aligned to the anchor window and fully
// contained in the corpus span; one tau per neighboring pair. The ranking
// universe per pair is every venue of the root category with at least one
// check-in in either period (missing venues count 0).
std::vector<PeriodTau> period_rank_correlation(const Corpus& corpus,
                                               const std::string& root_category,
                                               std::int64_t period_len_s,
                                               const TimeWindow& anchor);

struct BinnedTauSeries {
  double bin_max_m = 0.0;  // inclusive upper edge
  std::vector<PeriodTau> series;
};

// period_rank_correlation with the universe additionally restricted by the
// distance to the nearest hotspot: bin i covers (edge[i-1], edge[i]], the
// first bin starting at 0.
std::vector<BinnedTauSeries> distance_binned_correlation(
    const Corpus& corpus, const std::string& root_category, std::int64_t period_len_s,
    const TimeWindow& anchor, const std::vector<double>& bin_edges_m,
    const std::vector<std::string>& hotspot_ids);

// Venues whose display name contains any of the patterns, case-insensitive;
// sorted ids.
std::vector<std::string> detect_hotspots(const Corpus& corpus,
                                         const std::vector<std::string>& patterns);

}  // namespace eventlens
