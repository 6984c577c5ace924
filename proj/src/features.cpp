#include "eventlens/features.hpp"

#include <algorithm>
#include <cmath>

#include "eventlens/util.hpp"

namespace eventlens {

std::optional<double> feature_value(const FeatureVector& fv, const std::string& name) {
  if (name == "olympic_distance") return fv.olympic_distance;
  if (name == "stadium_distance") return fv.stadium_distance;
  if (name == "sponsor_distance") return fv.sponsor_distance;
  if (name == "nearby_place_entropy") return fv.nearby_place_entropy;
  if (name == "jensen_quality") return fv.jensen_quality;
  if (name == "popularity") return static_cast<double>(fv.popularity);
  if (name == "entertainment_flow") return fv.entertainment_flow;
  if (name == "social_area") return static_cast<double>(fv.social_area);
  throw DataError("unknown feature '" + name + "'");
}

double entropy_from_counts(const std::map<std::string, int>& counts) {
  double total = 0.0;
  for (const auto& [type, c] : counts) total += c;
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (const auto& [type, c] : counts) {
    if (c <= 0) continue;
    const double p = c / total;
    h -= p * std::log(p);
  }
  // A single-type neighborhood gives p == 1 and exactly zero; tiny negative
  // rounding from the sum is clamped.
  return h < 0.0 ? 0.0 : h;
}

double nearby_place_entropy(const Corpus& corpus, const SpatialIndex& index,
                            const std::string& venue_id, double radius_m) {
  return entropy_from_counts(count_by_type(corpus, index, venue_id, radius_m));
}

JensenTable::JensenTable(const Corpus& corpus, const SpatialIndex& index,
                         double radius_m) {
  for (const auto& [specific, root] : corpus.taxonomy().root_of) {
    types_.push_back(specific);
  }
  n_ = types_.size();
  for (size_t i = 0; i < n_; ++i) type_ids_[types_[i]] = static_cast<int>(i);

  const auto& venues = corpus.venues();
  std::vector<int> venue_type(venues.size());
  std::vector<std::int64_t> global_count(n_, 0);
  for (size_t v = 0; v < venues.size(); ++v) {
    venue_type[v] = type_ids_.at(venues[v].category.specific);
    ++global_count[venue_type[v]];
  }

  // One pass over every venue's neighborhood accumulates both the attraction
  // ratio sums (over sites q of the source type) and the mean neighbor
  // counts per type.
  std::vector<double> ratio_sum(n_ * n_, 0.0);   // [t_p][t]
  std::vector<double> count_sum(n_ * n_, 0.0);   // [t_v][t_p]
  std::vector<int> local(n_, 0);
  for (size_t q = 0; q < venues.size(); ++q) {
    const auto members = index.within_radius(venues[q].lat, venues[q].lon, radius_m);
    std::vector<int> present;
    for (int m : members) {
      if (local[venue_type[m]]++ == 0) present.push_back(venue_type[m]);
    }
    const int tq = venue_type[q];
    const int denom = static_cast<int>(members.size()) - local[tq];
    for (int t : present) {
      count_sum[static_cast<size_t>(tq) * n_ + t] += local[t];
      if (denom > 0) {
        ratio_sum[static_cast<size_t>(tq) * n_ + t] +=
            static_cast<double>(local[t]) / denom;
      }
    }
    for (int t : present) local[t] = 0;
  }

  const double n_total = static_cast<double>(venues.size());
  k_.assign(n_ * n_, std::nullopt);
  mean_nearby_.assign(n_ * n_, 0.0);
  for (size_t tp = 0; tp < n_; ++tp) {
    for (size_t tv = 0; tv < n_; ++tv) {
      if (global_count[tp] > 0) {
        mean_nearby_[tv * n_ + tp] =
            global_count[tv] > 0 ? count_sum[tv * n_ + tp] / global_count[tv] : 0.0;
      }
      if (global_count[tp] == 0 || global_count[tv] == 0) continue;
      const double prefactor =
          (n_total - global_count[tp]) /
          (static_cast<double>(global_count[tp]) * static_cast<double>(global_count[tv]));
      k_[tp * n_ + tv] = prefactor * ratio_sum[tp * n_ + tv];
    }
  }
}

int JensenTable::type_id(const std::string& specific) const {
  const auto it = type_ids_.find(specific);
  if (it == type_ids_.end()) throw DataError("unknown type '" + specific + "'");
  return it->second;
}

std::optional<double> JensenTable::coefficient(const std::string& tp,
                                               const std::string& tv) const {
  return coefficient(type_id(tp), type_id(tv));
}

double JensenTable::quality(const std::map<std::string, int>& venue_counts,
                            const std::string& venue_type) const {
  const int tv = type_id(venue_type);
  double quality = 0.0;
  for (size_t tp = 0; tp < n_; ++tp) {
    const auto k = k_[tp * n_ + tv];
    if (!k) continue;
    const auto it = venue_counts.find(types_[tp]);
    const double count = it == venue_counts.end() ? 0.0 : it->second;
    quality += *k * (count - mean_nearby_[static_cast<size_t>(tv) * n_ + tp]);
  }
  return quality;
}

std::optional<double> jensen_coefficient(const Corpus& corpus, const SpatialIndex& index,
                                         const std::string& type_p,
                                         const std::string& type_v, double radius_m) {
  const JensenTable table(corpus, index, radius_m);
  return table.coefficient(type_p, type_v);
}

double jensen_quality(const Corpus& corpus, const SpatialIndex& index,
                      const std::string& venue_id, double radius_m) {
  const JensenTable table(corpus, index, radius_m);
  const int v = corpus.venue_index(venue_id);
  return table.quality(count_by_type(corpus, index, v, radius_m),
                       corpus.venues()[v].category.specific);
}

FeatureEngine::FeatureEngine(const Corpus& corpus, const EventConfig& config)
    : corpus_(&corpus), config_(config) {
  if (config_.radius_m <= 0.0) throw DataError("neighborhood radius must be positive");
  if (config_.pre_window.end > config_.event_window.start ||
      config_.prior_window.end > config_.event_window.start) {
    throw DataError("pre and prior windows must end at or before the event start");
  }
  for (const auto& id : config_.hotspot_ids) {
    hotspot_venues_.push_back(corpus.venue_index(id));
  }
  std::sort(hotspot_venues_.begin(), hotspot_venues_.end());
  hotspot_venues_.erase(std::unique(hotspot_venues_.begin(), hotspot_venues_.end()),
                        hotspot_venues_.end());

  const std::set<std::string> stadium_types(config_.stadium_types.begin(),
                                            config_.stadium_types.end());
  for (size_t v = 0; v < corpus.venues().size(); ++v) {
    const Venue& venue = corpus.venues()[v];
    if (stadium_types.count(venue.category.specific) != 0) {
      stadium_venues_.push_back(static_cast<int>(v));
    }
    if (!config_.sponsor_name_pattern.empty() &&
        contains_ci(venue.name, config_.sponsor_name_pattern)) {
      sponsor_venues_.push_back(static_cast<int>(v));
    }
  }

  index_ = std::make_unique<SpatialIndex>(corpus.venues(), config_.radius_m);
  jensen_ = std::make_unique<JensenTable>(corpus, *index_, config_.radius_m);
  pre_table_ = std::make_unique<TransitionTable>(
      extract_transitions(corpus, config_.pre_window));

  neighborhoods_.resize(corpus.venues().size());
  type_counts_.resize(corpus.venues().size());
  for (size_t v = 0; v < corpus.venues().size(); ++v) {
    const Venue& venue = corpus.venues()[v];
    neighborhoods_[v] = index_->within_radius(venue.lat, venue.lon, config_.radius_m);
    for (int m : neighborhoods_[v]) {
      ++type_counts_[v][corpus.venues()[m].category.specific];
    }
  }
}

const std::map<std::string, int>& FeatureEngine::counts_of(int venue_idx) const {
  return type_counts_[venue_idx];
}

double FeatureEngine::olympic_distance(int venue_idx) const {
  if (hotspot_venues_.empty()) throw DataError("no hotspot venues configured");
  return nearest_of(*corpus_, venue_idx, hotspot_venues_).second;
}

double FeatureEngine::stadium_distance(int venue_idx) const {
  if (stadium_venues_.empty()) throw DataError("no stadium venues in the corpus");
  return nearest_of(*corpus_, venue_idx, stadium_venues_).second;
}

std::optional<double> FeatureEngine::sponsor_distance(int venue_idx) const {
  if (sponsor_venues_.empty()) return std::nullopt;
  return nearest_of(*corpus_, venue_idx, sponsor_venues_).second;
}

double FeatureEngine::nearby_place_entropy(int venue_idx) const {
  return entropy_from_counts(counts_of(venue_idx));
}

double FeatureEngine::jensen_quality(int venue_idx) const {
  return jensen_->quality(counts_of(venue_idx),
                          corpus_->venues()[venue_idx].category.specific);
}

std::int64_t FeatureEngine::popularity(int venue_idx) const {
  return corpus_->checkin_count(venue_idx, config_.pre_window);
}

double FeatureEngine::entertainment_flow(int venue_idx) const {
  const auto& members = neighborhoods_[venue_idx];
  double sum = 0.0;
  for (int m : members) {
    sum += venue_event_flow_fraction(*corpus_, *pre_table_, m);
  }
  return sum / static_cast<double>(members.size());
}

std::int64_t FeatureEngine::social_area(int venue_idx) const {
  std::vector<int> area_visitors;
  for (int m : neighborhoods_[venue_idx]) {
    const auto vs = corpus_->visitors(m, config_.pre_window);
    area_visitors.insert(area_visitors.end(), vs.begin(), vs.end());
  }
  std::sort(area_visitors.begin(), area_visitors.end());
  area_visitors.erase(std::unique(area_visitors.begin(), area_visitors.end()),
                      area_visitors.end());
  std::int64_t pairs = 0;
  for (int u : area_visitors) {
    for (int w : corpus_->social().adjacency[u]) {
      if (w <= u) continue;
      if (std::binary_search(area_visitors.begin(), area_visitors.end(), w)) ++pairs;
    }
  }
  return pairs;
}

FeatureVector FeatureEngine::features_of(int venue_idx) const {
  FeatureVector fv;
  fv.venue_id = corpus_->venues()[venue_idx].id;
  fv.olympic_distance = olympic_distance(venue_idx);
  fv.stadium_distance = stadium_distance(venue_idx);
  fv.sponsor_distance = sponsor_distance(venue_idx);
  fv.nearby_place_entropy = nearby_place_entropy(venue_idx);
  fv.jensen_quality = jensen_quality(venue_idx);
  fv.popularity = popularity(venue_idx);
  fv.entertainment_flow = entertainment_flow(venue_idx);
  fv.social_area = social_area(venue_idx);
  return fv;
}

FeatureVector FeatureEngine::features_of(const std::string& venue_id) const {
  return features_of(corpus_->venue_index(venue_id));
}

FeatureMatrix FeatureEngine::feature_matrix(const std::vector<std::string>& venue_ids) const {
  FeatureMatrix matrix;
  matrix.rows.reserve(venue_ids.size());
  for (const auto& id : venue_ids) {
    try {
      matrix.rows.push_back(features_of(id));
    } catch (const DataError& e) {
      throw DataError("feature computation failed for venue '" + id + "': " + e.what());
    }
  }
  if (sponsor_venues_.empty()) matrix.absent_columns.push_back("sponsor_distance");
  return matrix;
}

}  // namespace eventlens
