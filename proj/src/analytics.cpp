#include "eventlens/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eventlens/geo.hpp"
#include "eventlens/util.hpp"

namespace eventlens {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Counts strict inversions of the slice by merge sort; the slice ends sorted.
std::int64_t count_inversions(std::vector<double>& values, std::vector<double>& scratch,
                              size_t lo, size_t hi) {
  if (hi - lo < 2) return 0;
  const size_t mid = lo + (hi - lo) / 2;
  std::int64_t inversions = count_inversions(values, scratch, lo, mid) +
                            count_inversions(values, scratch, mid, hi);
  size_t left = lo, right = mid, out = lo;
  while (left < mid && right < hi) {
    if (values[right] < values[left]) {
      inversions += static_cast<std::int64_t>(mid - left);
      scratch[out++] = values[right++];
    } else {
      scratch[out++] = values[left++];
    }
  }
  while (left < mid) scratch[out++] = values[left++];
  while (right < hi) scratch[out++] = values[right++];
  std::copy(scratch.begin() + lo, scratch.begin() + hi, values.begin() + lo);
  return inversions;
}

std::int64_t tie_pairs(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  std::int64_t pairs = 0;
  size_t i = 0;
  while (i < values.size()) {
    size_t j = i;
    while (j < values.size() && values[j] == values[i]) ++j;
    const std::int64_t g = static_cast<std::int64_t>(j - i);
    pairs += g * (g - 1) / 2;
    i = j;
  }
  return pairs;
}

}  // namespace

double kendall_tau_b(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw DataError("kendall_tau_b: length mismatch");
  const size_t n = x.size();
  if (n < 2) throw DataError("kendall_tau_b: need at least 2 items");

  std::vector<std::pair<double, double>> pairs(n);
  for (size_t i = 0; i < n; ++i) pairs[i] = {x[i], y[i]};
  std::sort(pairs.begin(), pairs.end());

  const std::int64_t n0 = static_cast<std::int64_t>(n) * (static_cast<std::int64_t>(n) - 1) / 2;
  // Tie pair counts: in x, in y, and in both (joint groups).
  std::int64_t tied_x = 0, tied_both = 0;
  {
    size_t i = 0;
    while (i < n) {
      size_t j = i;
      while (j < n && pairs[j].first == pairs[i].first) ++j;
      const std::int64_t g = static_cast<std::int64_t>(j - i);
      tied_x += g * (g - 1) / 2;
      size_t a = i;
      while (a < j) {
        size_t b = a;
        while (b < j && pairs[b].second == pairs[a].second) ++b;
        const std::int64_t h = static_cast<std::int64_t>(b - a);
        tied_both += h * (h - 1) / 2;
        a = b;
      }
      i = j;
    }
  }
  std::vector<double> ys(n);
  for (size_t i = 0; i < n; ++i) ys[i] = pairs[i].second;
  const std::int64_t tied_y = tie_pairs(ys);

  // After sorting by (x, y), inversions of the y sequence are exactly the
  // discordant pairs: x-tied neighbors are y-sorted so they contribute none,
  // and equal y across groups is not a strict inversion.
  std::vector<double> scratch(n);
  const std::int64_t discordant = count_inversions(ys, scratch, 0, n);
  const std::int64_t distinct_pairs = n0 - tied_x - tied_y + tied_both;
  const std::int64_t concordant = distinct_pairs - discordant;

  // C + D + Tb_only = n0 - tied_x, and symmetrically for the other factor.
  const double fx = static_cast<double>(n0 - tied_x);
  const double fy = static_cast<double>(n0 - tied_y);
  if (fx <= 0.0 || fy <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(concordant - discordant) / std::sqrt(fx * fy);
}

PeriodRanking period_ranking(const Corpus& corpus, const TimeWindow& window,
                             const std::vector<int>& universe) {
  PeriodRanking ranking;
  ranking.window = window;
  ranking.entries.reserve(universe.size());
  for (int v : universe) {
    ranking.entries.emplace_back(corpus.venues()[v].id, corpus.checkin_count(v, window));
  }
  std::sort(ranking.entries.begin(), ranking.entries.end(),
            [](const auto& a, const auto& b) {
              if (a.second != b.second) return a.second > b.second;
              return a.first < b.first;
            });
  return ranking;
}

double kendall_tau_b(const PeriodRanking& a, const PeriodRanking& b) {
  if (a.entries.size() != b.entries.size()) {
    throw DataError("kendall_tau_b: rankings cover different universes");
  }
  std::vector<std::pair<std::string, std::int64_t>> ea = a.entries;
  std::vector<std::pair<std::string, std::int64_t>> eb = b.entries;
  std::sort(ea.begin(), ea.end());
  std::sort(eb.begin(), eb.end());
  std::vector<double> x, y;
  x.reserve(ea.size());
  y.reserve(eb.size());
  for (size_t i = 0; i < ea.size(); ++i) {
    if (ea[i].first != eb[i].first) {
      throw DataError("kendall_tau_b: rankings cover different universes");
    }
    x.push_back(static_cast<double>(ea[i].second));
    y.push_back(static_cast<double>(eb[i].second));
  }
  return kendall_tau_b(x, y);
}

namespace {

std::vector<TimeWindow> anchored_periods(const Corpus& corpus, std::int64_t period_len_s,
                                         const TimeWindow& anchor) {
  if (period_len_s <= 0) throw DataError("period length must be positive");
  const TimeWindow span = corpus.span();
  if (span.length() <= 0) throw DataError("corpus has no check-ins");
  // Periods are anchor.start + k * len, kept when fully inside the span.
  const std::int64_t k_lo =
      -floor_div(anchor.start - span.start, period_len_s);
  const std::int64_t k_hi = floor_div(span.end - anchor.start, period_len_s) - 1;
  std::vector<TimeWindow> periods;
  for (std::int64_t k = k_lo; k <= k_hi; ++k) {
    const UtcSeconds start = anchor.start + k * period_len_s;
    periods.push_back(TimeWindow{start, start + period_len_s});
  }
  if (periods.size() < 2) {
    throw DataError("corpus span covers fewer than two analysis periods");
  }
  return periods;
}

PeriodTau tau_for_pair(const Corpus& corpus, const TimeWindow& first,
                       const TimeWindow& second, const std::vector<int>& candidates) {
  // Universe: active in either period; the inactive side ranks at count 0.
  std::vector<int> universe;
  for (int v : candidates) {
    if (corpus.checkin_count(v, first) > 0 || corpus.checkin_count(v, second) > 0) {
      universe.push_back(v);
    }
  }
  PeriodTau result;
  result.first = first;
  result.second = second;
  result.n_items = static_cast<int>(universe.size());
  if (universe.size() < 2) {
    result.tau = std::numeric_limits<double>::quiet_NaN();
    return result;
  }
  result.tau = kendall_tau_b(period_ranking(corpus, first, universe),
                             period_ranking(corpus, second, universe));
  return result;
}

std::vector<int> category_venues(const Corpus& corpus, const std::string& root_category) {
  std::vector<int> out;
  for (size_t v = 0; v < corpus.venues().size(); ++v) {
    if (corpus.venues()[v].category.root == root_category) {
      out.push_back(static_cast<int>(v));
    }
  }
  return out;
}

}  // namespace

std::vector<PeriodTau> period_rank_correlation(const Corpus& corpus,
                                               const std::string& root_category,
                                               std::int64_t period_len_s,
                                               const TimeWindow& anchor) {
  const auto periods = anchored_periods(corpus, period_len_s, anchor);
  const auto candidates = category_venues(corpus, root_category);
  std::vector<PeriodTau> series;
  series.reserve(periods.size() - 1);
  for (size_t i = 0; i + 1 < periods.size(); ++i) {
    series.push_back(tau_for_pair(corpus, periods[i], periods[i + 1], candidates));
  }
  return series;
}

std::vector<BinnedTauSeries> distance_binned_correlation(
    const Corpus& corpus, const std::string& root_category, std::int64_t period_len_s,
    const TimeWindow& anchor, const std::vector<double>& bin_edges_m,
    const std::vector<std::string>& hotspot_ids) {
  if (bin_edges_m.empty()) throw DataError("no distance bins given");
  if (!std::is_sorted(bin_edges_m.begin(), bin_edges_m.end())) {
    throw DataError("distance bin edges must be ascending");
  }
  if (hotspot_ids.empty()) throw DataError("no hotspot venues configured");
  std::vector<int> hotspots;
  for (const auto& id : hotspot_ids) hotspots.push_back(corpus.venue_index(id));

  const auto periods = anchored_periods(corpus, period_len_s, anchor);
  const auto candidates = category_venues(corpus, root_category);
  std::vector<double> distance(candidates.size());
  for (size_t i = 0; i < candidates.size(); ++i) {
    distance[i] = nearest_of(corpus, candidates[i], hotspots).second;
  }

  std::vector<BinnedTauSeries> out;
  double previous_edge = 0.0;
  for (size_t b = 0; b < bin_edges_m.size(); ++b) {
    const double lo = b == 0 ? -1.0 : previous_edge;
    const double hi = bin_edges_m[b];
    std::vector<int> in_bin;
    for (size_t i = 0; i < candidates.size(); ++i) {
      if (distance[i] > lo && distance[i] <= hi) in_bin.push_back(candidates[i]);
    }
    BinnedTauSeries series;
    series.bin_max_m = hi;
    for (size_t i = 0; i + 1 < periods.size(); ++i) {
      series.series.push_back(tau_for_pair(corpus, periods[i], periods[i + 1], in_bin));
    }
    out.push_back(std::move(series));
    previous_edge = hi;
  }
  return out;
}

std::vector<std::string> detect_hotspots(const Corpus& corpus,
                                         const std::vector<std::string>& patterns) {
  if (patterns.empty()) throw DataError("no hotspot name patterns given");
  std::vector<std::string> out;
  for (const auto& venue : corpus.venues()) {
    for (const auto& pattern : patterns) {
      if (contains_ci(venue.name, pattern)) {
        out.push_back(venue.id);
        break;
      }
    }
  }
  return out;
}

}  // namespace eventlens
