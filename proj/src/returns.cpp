#include "eventlens/returns.hpp"

#include <algorithm>

#include "eventlens/geo.hpp"

namespace eventlens {

namespace {

void check_windows(const EventConfig& config) {
  if (config.event_window.length() <= 0 || config.prior_window.length() <= 0) {
    throw DataError("degenerate event or prior window");
  }
  if (config.prior_window.length() < config.event_window.length()) {
    throw DataError("prior window must be at least as long as the event window");
  }
}

}  // namespace

double expected_returns(const Corpus& corpus, int venue_idx, const EventConfig& config) {
  check_windows(config);
  const double prior = static_cast<double>(
      corpus.checkin_count(venue_idx, config.prior_window));
  return prior * static_cast<double>(config.event_window.length()) /
         static_cast<double>(config.prior_window.length());
}

double expected_returns(const Corpus& corpus, const std::string& venue_id,
                        const EventConfig& config) {
  return expected_returns(corpus, corpus.venue_index(venue_id), config);
}

AbnormalReturns abnormal_returns(const Corpus& corpus, int venue_idx,
                                 const EventConfig& config) {
  AbnormalReturns r;
  r.actual = corpus.checkin_count(venue_idx, config.event_window);
  r.expected = expected_returns(corpus, venue_idx, config);
  r.abnormal = static_cast<double>(r.actual) - r.expected;
  return r;
}

AbnormalReturns abnormal_returns(const Corpus& corpus, const std::string& venue_id,
                                 const EventConfig& config) {
  return abnormal_returns(corpus, corpus.venue_index(venue_id), config);
}

std::vector<std::string> prediction_space(const Corpus& corpus, const EventConfig& config,
                                          const PredictionSpaceOptions& options) {
  if (config.hotspot_ids.empty()) throw DataError("no hotspot venues configured");
  std::vector<int> hotspots;
  hotspots.reserve(config.hotspot_ids.size());
  for (const auto& id : config.hotspot_ids) hotspots.push_back(corpus.venue_index(id));

  std::vector<std::string> space;
  // Venues are stored in id order, so the output is ordered by venue id.
  for (size_t v = 0; v < corpus.venues().size(); ++v) {
    const Venue& venue = corpus.venues()[v];
    if (venue.category.root != options.root_category) continue;
    if (corpus.checkin_count(static_cast<int>(v), config.prior_window) <
        options.min_prior_checkins) {
      continue;
    }
    const double dist = nearest_of(corpus, static_cast<int>(v), hotspots).second;
    if (dist > options.max_hotspot_distance_m) continue;
    space.push_back(venue.id);
  }
  return space;
}

LabeledDataset label_instances(const FeatureEngine& engine,
                               const PredictionSpaceOptions& options) {
  const Corpus& corpus = engine.corpus();
  const auto space = prediction_space(corpus, engine.config(), options);
  const FeatureMatrix matrix = engine.feature_matrix(space);

  LabeledDataset dataset;
  dataset.absent_columns = matrix.absent_columns;
  dataset.instances.reserve(matrix.rows.size());
  for (const auto& row : matrix.rows) {
    LabeledInstance instance;
    instance.features = row;
    const AbnormalReturns r = abnormal_returns(corpus, row.venue_id, engine.config());
    instance.actual = r.actual;
    instance.expected = r.expected;
    instance.abnormal = r.abnormal;
    instance.label = returns_label(r.abnormal);
    dataset.instances.push_back(std::move(instance));
  }
  return dataset;
}

LabeledDataset label_instances(const Corpus& corpus, const EventConfig& config,
                               const PredictionSpaceOptions& options) {
  const FeatureEngine engine(corpus, config);
  return label_instances(engine, options);
}

}  // namespace eventlens
