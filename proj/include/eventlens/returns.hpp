#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eventlens/corpus.hpp"
#include "eventlens/features.hpp"

namespace eventlens {

struct AbnormalReturns {
  std::int64_t actual = 0;   // event-window check-ins
  double expected = 0.0;     // length-scaled baseline from the prior window
  double abnormal = 0.0;     // actual - expected
};

inline int returns_label(double abnormal) { return abnormal > 0.0 ? +1 : -1; }

// Prior-window count scaled by |event window| / |prior window|.
double expected_returns(const Corpus& corpus, const std::string& venue_id,
                        const EventConfig& config);
double expected_returns(const Corpus& corpus, int venue_idx, const EventConfig& config);

AbnormalReturns abnormal_returns(const Corpus& corpus, const std::string& venue_id,
                                 const EventConfig& config);
AbnormalReturns abnormal_returns(const Corpus& corpus, int venue_idx,
                                 const EventConfig& config);

struct PredictionSpaceOptions {
  std::string root_category = "Food";
  double max_hotspot_distance_m = 1000.0;  // inclusive
  std::int64_t min_prior_checkins = 5;
};

// Venues of the root category within the hotspot distance cap and with
// enough prior-window check-ins, ordered by venue id.
std::vector<std::string> prediction_space(const Corpus& corpus, const EventConfig& config,
                                          const PredictionSpaceOptions& options = {});

struct LabeledInstance {
  FeatureVector features;  // carries the venue id
  std::int64_t actual = 0;
  double expected = 0.0;
  double abnormal = 0.0;
  int label = -1;  // +1 iff abnormal > 0
};

struct LabeledDataset {
  std::vector<LabeledInstance> instances;
  std::vector<std::string> absent_columns;
};

// prediction_space -> feature matrix -> abnormal returns, composed.
LabeledDataset label_instances(const Corpus& corpus, const EventConfig& config,
                               const PredictionSpaceOptions& options = {});
LabeledDataset label_instances(const FeatureEngine& engine,
                               const PredictionSpaceOptions& options = {});

}  // namespace eventlens
