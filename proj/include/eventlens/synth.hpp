#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "eventlens/corpus.hpp"
#include "eventlens/time.hpp"

namespace eventlens {

// Parameters of the seeded synthetic city. Venue selection weights are
// multiplied by 1 + beta * exp(-hotspot_distance / decay) during the event
// window, shifting check-in share toward the hotspot areas while total user
// activity stays constant.
struct SynthParams {
  std::uint64_t seed = 42;
  int n_venues = 4000;
  int n_users = 1000;
  double lat_min = 51.47, lat_max = 51.55;
  double lon_min = -0.06, lon_max = 0.06;
  double beta = 3.0;
  int n_hotspots = 5;
  // Optional explicit hotspot (lat, lon) positions; defaults to a quincunx
  // well inside the bounding box.
  std::vector<std::pair<double, double>> hotspot_positions;
  double hotspot_decay_m = 500.0;
  double daily_checkin_rate = 4.0;
  double social_edge_prob = 0.02;
  double home_scale_m = 1500.0;  // decay of a user's venue preference from home
  double anchor_weight = 80.0;  // base weight of live sites and stadiums
  double weight_sigma = 0.8;    // lognormal sigma of ordinary venue weights
  // Per-venue lognormal sigma of the event-response lottery: equally placed
  // venues win or lose differently during the event.
  double event_lottery_sigma = 0.7;
  TimeWindow event_window{0, 0};  // zero selects the built-in default
  int prior_days = 91;
  int lead_days = 105;  // span starts this many days before the event
  int tail_days = 21;   // span continues this many days after it
  std::map<std::string, double> root_weights;  // category mixture; default built-in
};

// Planted per-venue expectations, exact under the generator's Poisson
// process.
struct VenueTruth {
  std::string venue_id;
  double hotspot_distance_m = 0.0;
  double rate_prior_per_day = 0.0;
  double rate_event_per_day = 0.0;
  double expected_prior = 0.0;
  double expected_pre = 0.0;
  double expected_event = 0.0;
  double expected_ar = 0.0;
  int expected_label = -1;
};

struct GroundTruthManifest {
  TimeWindow span;
  TimeWindow event_window;
  TimeWindow pre_window;
  TimeWindow prior_window;
  std::vector<VenueTruth> venues;
};

struct SynthResult {
  std::string checkins_path;
  std::string venues_path;
  std::string social_path;
  std::string taxonomy_path;
  std::string manifest_path;
  std::string config_path;
  GroundTruthManifest manifest;
};

// Writes the four corpus files plus manifest.json and a ready-to-use
// config.json into out_dir. Deterministic for a fixed parameter set.
SynthResult generate(const SynthParams& params, const std::string& out_dir);

// The taxonomy the generator emits (also handy for tests).
CategoryTaxonomy synth_taxonomy();

}  // namespace eventlens
