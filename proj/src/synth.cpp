#include "eventlens/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include <nlohmann/json.hpp>

#include "eventlens/geo.hpp"
#include "eventlens/mobility.hpp"
#include "eventlens/util.hpp"

namespace eventlens {

namespace {

using nlohmann::json;

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
constexpr double kMetersPerDegLat = 111194.92664455873;  // pi * R / 180

struct TypeEntry {
  const char* root;
  const char* specific;
};

constexpr TypeEntry kTypeTable[] = {
    {"Food", "Coffee Shop"},
    {"Food", "Cafe"},
    {"Food", "Restaurant"},
    {"Food", "Fast Food Restaurant"},
    {"Food", "Pizza Place"},
    {"Food", "Bakery"},
    {"Food", "Sandwich Shop"},
    {"Food", "Burger Joint"},
    {"Food", "Diner"},
    {"Food", "Fish and Chips Shop"},
    {"Shop", "Grocery Store"},
    {"Shop", "Clothing Store"},
    {"Shop", "Bookstore"},
    {"Shop", "Electronics Store"},
    {"Shop", "Convenience Store"},
    {"Travel", "Train Station"},
    {"Travel", "Bus Stop"},
    {"Travel", "Hotel"},
    {"Travel", "Airport Terminal"},
    {"Nightlife", "Pub"},
    {"Nightlife", "Bar"},
    {"Nightlife", "Nightclub"},
    {"Professional", "Office"},
    {"Professional", "Coworking Space"},
    {"Professional", "Conference Center"},
    {"Entertainment", "General Entertainment"},
    {"Entertainment", "Stadium"},
    {"Entertainment", "Event Space"},
    {"Entertainment", "Multiplex"},
    {"Entertainment", "Music Venue"},
    {"Outdoors", "Park"},
    {"Outdoors", "Pool"},
    {"Outdoors", "Scenic Lookout"},
    {"Outdoors", "Athletics and Sports"},
    {"Outdoors", "Playground"},
    {"Outdoors", "Plaza"},
    {"College", "University Building"},
    {"College", "Library"},
    {"Residence", "Residential Building"},
};

const std::map<std::string, double>& default_root_weights() {
  static const std::map<std::string, double> weights = {
      {"Food", 0.45},      {"Shop", 0.12},          {"Travel", 0.12},
      {"Nightlife", 0.09}, {"Professional", 0.08},  {"Entertainment", 0.04},
      {"Outdoors", 0.04},  {"College", 0.03},       {"Residence", 0.03},
  };
  return weights;
}

struct DraftVenue {
  std::string name;
  double lat = 0.0;
  double lon = 0.0;
  CategoryPath category;
  double weight = 1.0;
};

// Offsets a coordinate by (distance, bearing); flat-earth locally, fine at
// city scale. The manifest recomputes true haversine distances afterwards.
std::pair<double, double> offset_position(double lat, double lon, double distance_m,
                                          double bearing_rad) {
  const double dlat = distance_m * std::cos(bearing_rad) / kMetersPerDegLat;
  const double dlon = distance_m * std::sin(bearing_rad) /
                      (kMetersPerDegLat * std::cos(lat * kDegToRad));
  return {lat + dlat, lon + dlon};
}

std::string zero_padded(int value, int width) {
  std::string digits = std::to_string(value);
  while (static_cast<int>(digits.size()) < width) digits.insert(digits.begin(), '0');
  return digits;
}

}  // namespace

CategoryTaxonomy synth_taxonomy() {
  CategoryTaxonomy taxonomy;
  for (const auto& entry : kTypeTable) taxonomy.root_of[entry.specific] = entry.root;
  taxonomy.event_types = {"Stadium",          "General Entertainment",
                          "Event Space",      "Park",
                          "Pool",             "Athletics and Sports",
                          "Scenic Lookout"};
  return taxonomy;
}

SynthResult generate(const SynthParams& params, const std::string& out_dir) {
  if (params.n_venues < 50 || params.n_users < 2) {
    throw DataError("synth: need at least 50 venues and 2 users");
  }
  if (params.lat_min >= params.lat_max || params.lon_min >= params.lon_max) {
    throw DataError("synth: invalid bounding box");
  }
  if (params.beta < 0.0 || params.daily_checkin_rate < 0.0 ||
      params.social_edge_prob < 0.0 || params.social_edge_prob > 1.0) {
    throw DataError("synth: rates must be non-negative (edge probability in [0,1])");
  }
  if (params.lead_days < params.prior_days || params.prior_days < 22) {
    throw DataError("synth: span must cover the prior window (prior at least 22 days)");
  }

  TimeWindow event = params.event_window;
  if (event.length() <= 0) {
    event = TimeWindow{parse_iso8601("2012-07-25T00:00:00Z"),
                       parse_iso8601("2012-08-15T00:00:00Z")};
  }
  if (event.length() % kSecondsPerDay != 0 || event.start % kSecondsPerDay != 0) {
    throw DataError("synth: event window must be whole days aligned to midnight");
  }
  const TimeWindow span{event.start - params.lead_days * kSecondsPerDay,
                        event.end + params.tail_days * kSecondsPerDay};
  const TimeWindow pre{event.start - event.length(), event.start};
  const TimeWindow prior{event.start - params.prior_days * kSecondsPerDay, event.start};

  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Hotspot positions: quincunx well inside the box unless given.
  std::vector<std::pair<double, double>> hotspots = params.hotspot_positions;
  if (hotspots.empty()) {
    const double clat = (params.lat_min + params.lat_max) / 2.0;
    const double clon = (params.lon_min + params.lon_max) / 2.0;
    const double rlat = (params.lat_max - params.lat_min) * 0.30;
    const double rlon = (params.lon_max - params.lon_min) * 0.30;
    const std::pair<double, double> pattern[] = {
        {clat, clon},        {clat + rlat, clon + rlon}, {clat + rlat, clon - rlon},
        {clat - rlat, clon + rlon}, {clat - rlat, clon - rlon},
    };
    for (int h = 0; h < params.n_hotspots; ++h) {
      if (h < 5) {
        hotspots.push_back(pattern[h]);
      } else {
        hotspots.emplace_back(params.lat_min + unit(rng) * (params.lat_max - params.lat_min),
                              params.lon_min + unit(rng) * (params.lon_max - params.lon_min));
      }
    }
  }
  if (hotspots.empty()) throw DataError("synth: need at least one hotspot");

  const CategoryTaxonomy taxonomy = synth_taxonomy();
  // Stadiums exist only at the hotspot clusters (placed below); scattering
  // them citywide would erase the geographic structure the corpus plants.
  std::map<std::string, std::vector<std::string>> specifics_by_root;
  for (const auto& entry : kTypeTable) {
    if (std::string(entry.specific) == "Stadium") continue;
    specifics_by_root[entry.root].push_back(entry.specific);
  }
  const std::map<std::string, double>& root_weights =
      params.root_weights.empty() ? default_root_weights() : params.root_weights;
  std::vector<std::string> roots;
  std::vector<double> root_cdf;
  double root_total = 0.0;
  for (const auto& [root, w] : root_weights) {
    if (specifics_by_root.count(root) == 0) {
      throw DataError("synth: unknown root category '" + root + "' in mixture");
    }
    root_total += w;
    roots.push_back(root);
    root_cdf.push_back(root_total);
  }
  if (root_total <= 0.0) throw DataError("synth: category mixture sums to zero");

  std::vector<DraftVenue> drafts;
  drafts.reserve(params.n_venues);
  std::uniform_real_distribution<double> bearing(0.0, 2.0 * 3.14159265358979323846);
  std::lognormal_distribution<double> base_weight(0.0, params.weight_sigma);

  // Anchor venues first: a live site, two stadiums, a park and a sponsor
  // restaurant per hotspot.
  for (size_t h = 0; h < hotspots.size(); ++h) {
    const auto [hlat, hlon] = hotspots[h];
    DraftVenue live;
    live.name = h % 2 == 0 ? "Live Site 2012 Area " + std::to_string(h + 1)
                           : "Olympic Broadcast Compound " + std::to_string(h + 1);
    live.lat = hlat;
    live.lon = hlon;
    live.category = {"Entertainment", "General Entertainment"};
    live.weight = params.anchor_weight;
    drafts.push_back(live);
    for (int s = 0; s < 3; ++s) {
      const auto [slat, slon] =
          offset_position(hlat, hlon, 10.0 + unit(rng) * 50.0, bearing(rng));
      DraftVenue stadium;
      stadium.name = "Stadium " + std::to_string(3 * h + s + 1);
      stadium.lat = slat;
      stadium.lon = slon;
      stadium.category = {"Entertainment", "Stadium"};
      stadium.weight = params.anchor_weight;
      drafts.push_back(stadium);
    }
    {
      const auto [plat, plon] =
          offset_position(hlat, hlon, 150.0 + unit(rng) * 550.0, bearing(rng));
      DraftVenue park;
      park.name = "Park " + std::to_string(h + 1);
      park.lat = plat;
      park.lon = plon;
      park.category = {"Outdoors", "Park"};
      park.weight = params.anchor_weight / 4.0;
      drafts.push_back(park);
    }
    {
      const auto [mlat, mlon] =
          offset_position(hlat, hlon, 80.0 + unit(rng) * 320.0, bearing(rng));
      DraftVenue sponsor;
      sponsor.name = "McDonald's";
      sponsor.lat = mlat;
      sponsor.lon = mlon;
      sponsor.category = {"Food", "Fast Food Restaurant"};
      sponsor.weight = 2.0 * base_weight(rng);
      drafts.push_back(sponsor);
    }
  }
  for (int extra = 0; extra < 2; ++extra) {
    DraftVenue sponsor;
    sponsor.name = "McDonald's";
    sponsor.lat = params.lat_min + unit(rng) * (params.lat_max - params.lat_min);
    sponsor.lon = params.lon_min + unit(rng) * (params.lon_max - params.lon_min);
    sponsor.category = {"Food", "Fast Food Restaurant"};
    sponsor.weight = 2.0 * base_weight(rng);
    drafts.push_back(sponsor);
  }

  while (static_cast<int>(drafts.size()) < params.n_venues) {
    DraftVenue v;
    v.lat = params.lat_min + unit(rng) * (params.lat_max - params.lat_min);
    v.lon = params.lon_min + unit(rng) * (params.lon_max - params.lon_min);
    const double pick = unit(rng) * root_total;
    size_t r = std::upper_bound(root_cdf.begin(), root_cdf.end(), pick) - root_cdf.begin();
    if (r >= roots.size()) r = roots.size() - 1;
    const auto& specifics = specifics_by_root.at(roots[r]);
    const auto& specific =
        specifics[std::min<size_t>(static_cast<size_t>(unit(rng) * specifics.size()),
                                   specifics.size() - 1)];
    v.category = {roots[r], specific};
    v.name = specific + " " + std::to_string(drafts.size() + 1);
    v.weight = base_weight(rng);
    drafts.push_back(v);
  }

  const int id_width = static_cast<int>(std::to_string(drafts.size()).size());
  std::vector<Venue> venues(drafts.size());
  std::vector<double> hotspot_distance(drafts.size());
  for (size_t i = 0; i < drafts.size(); ++i) {
    venues[i] = Venue{"v" + zero_padded(static_cast<int>(i), id_width), drafts[i].name,
                      drafts[i].lat, drafts[i].lon, drafts[i].category};
    double d = haversine_m(drafts[i].lat, drafts[i].lon, hotspots[0].first,
                           hotspots[0].second);
    for (size_t h = 1; h < hotspots.size(); ++h) {
      d = std::min(d, haversine_m(drafts[i].lat, drafts[i].lon, hotspots[h].first,
                                  hotspots[h].second));
    }
    hotspot_distance[i] = d;
  }

  // Event response: the distance-decay boost is modulated by a bounded
  // per-venue affinity to nearby event-type mass, so that neighborhoods rich
  // in entertainment and outdoor activity convert event traffic better than
  // equally distant ones that are not. Mean affinity is about 1.
  std::vector<double> affinity(drafts.size(), 0.0);
  {
    std::vector<size_t> event_sites;
    for (size_t j = 0; j < drafts.size(); ++j) {
      if (taxonomy.is_event_type(drafts[j].category.specific)) event_sites.push_back(j);
    }
    std::vector<double> mass(drafts.size(), 0.0);
    for (size_t i = 0; i < drafts.size(); ++i) {
      for (size_t j : event_sites) {
        if (i == j) continue;
        const double d = haversine_m(drafts[i].lat, drafts[i].lon, drafts[j].lat,
                                     drafts[j].lon);
        // Anchor weights are capped so affinity reflects the surrounding
        // activity mix rather than merely restating hotspot proximity.
        mass[i] += std::min(drafts[j].weight, 3.0) * std::exp(-d / 400.0);
      }
      mass[i] = std::log(mass[i] + 1e-3);
    }
    double mean = 0.0;
    for (double m : mass) mean += m;
    mean /= static_cast<double>(mass.size());
    double var = 0.0;
    for (double m : mass) var += (m - mean) * (m - mean);
    const double sd = std::sqrt(var / static_cast<double>(mass.size())) + 1e-12;
    for (size_t i = 0; i < drafts.size(); ++i) {
      const double z = (mass[i] - mean) / sd;
      affinity[i] = 0.30 + 1.40 / (1.0 + std::exp(-1.5 * z));
    }
  }
  // The planted response combines distance decay, the area's event
  // affinity, and a per-venue lottery with mean one; all three are recorded
  // through the manifest rates.
  std::vector<double> boost(drafts.size());
  {
    const double sigma = params.event_lottery_sigma;
    std::lognormal_distribution<double> lottery(-0.5 * sigma * sigma, sigma);
    for (size_t i = 0; i < drafts.size(); ++i) {
      const double response = sigma > 0.0 ? lottery(rng) : 1.0;
      boost[i] = 1.0 + params.beta * affinity[i] * response *
                           std::exp(-hotspot_distance[i] / params.hotspot_decay_m);
    }
  }

  const int user_width = static_cast<int>(std::to_string(params.n_users).size());
  std::vector<std::string> user_ids(params.n_users);
  std::vector<std::pair<double, double>> homes(params.n_users);
  for (int u = 0; u < params.n_users; ++u) {
    user_ids[u] = "u" + zero_padded(u, user_width);
    homes[u] = {params.lat_min + unit(rng) * (params.lat_max - params.lat_min),
                params.lon_min + unit(rng) * (params.lon_max - params.lon_min)};
  }

  // Check-in sequences: per user-day, a Poisson number of venue draws from
  // the day's selection distribution, chained nearest-first so consecutive
  // pairs tend to be local.
  std::filesystem::create_directories(out_dir);
  const auto path_of = [&](const char* name) {
    return (std::filesystem::path(out_dir) / name).string();
  };
  SynthResult result;
  result.checkins_path = path_of("checkins.jsonl");
  result.venues_path = path_of("venues.jsonl");
  result.social_path = path_of("social.csv");
  result.taxonomy_path = path_of("taxonomy.json");
  result.manifest_path = path_of("manifest.json");
  result.config_path = path_of("config.json");

  std::ofstream checkins_out(result.checkins_path);
  if (!checkins_out) throw DataError("cannot write " + result.checkins_path);
  std::poisson_distribution<int> per_day(params.daily_checkin_rate);
  const int total_days = static_cast<int>(span.length() / kSecondsPerDay);
  std::vector<int> picks;
  std::vector<std::int64_t> seconds;
  // Each user favors venues near a home point; the event boost then shifts
  // that user's selection toward the hotspots. Per-venue check-in counts
  // stay Poisson with exactly computable means (accumulated below).
  std::vector<double> expected_base_rate(venues.size(), 0.0);
  std::vector<double> expected_event_rate(venues.size(), 0.0);
  std::vector<double> user_weight(venues.size());
  std::vector<double> cdf_base(venues.size()), cdf_event(venues.size());
  for (int u = 0; u < params.n_users; ++u) {
    double zu_base = 0.0, zu_event = 0.0;
    for (size_t i = 0; i < venues.size(); ++i) {
      const double home_dist =
          haversine_m(homes[u].first, homes[u].second, venues[i].lat, venues[i].lon);
      user_weight[i] = drafts[i].weight * std::exp(-home_dist / params.home_scale_m);
      zu_base += user_weight[i];
      zu_event += user_weight[i] * boost[i];
    }
    double acc_base = 0.0, acc_event = 0.0;
    for (size_t i = 0; i < venues.size(); ++i) {
      const double share_base = user_weight[i] / zu_base;
      const double share_event = user_weight[i] * boost[i] / zu_event;
      expected_base_rate[i] += params.daily_checkin_rate * share_base;
      expected_event_rate[i] += params.daily_checkin_rate * share_event;
      acc_base += share_base;
      acc_event += share_event;
      cdf_base[i] = acc_base;
      cdf_event[i] = acc_event;
    }
    for (int day = 0; day < total_days; ++day) {
      const UtcSeconds day_start = span.start + static_cast<std::int64_t>(day) * kSecondsPerDay;
      const bool in_event = day_start >= event.start && day_start < event.end;
      const int k = per_day(rng);
      if (k == 0) continue;
      const auto& cdf = in_event ? cdf_event : cdf_base;
      picks.clear();
      for (int j = 0; j < k; ++j) {
        const double p = unit(rng);
        size_t idx = std::upper_bound(cdf.begin(), cdf.end(), p) - cdf.begin();
        if (idx >= venues.size()) idx = venues.size() - 1;
        picks.push_back(static_cast<int>(idx));
      }
      // Nearest-neighbor chaining from the first pick.
      for (size_t a = 0; a + 1 < picks.size(); ++a) {
        size_t best = a + 1;
        double best_d = std::numeric_limits<double>::infinity();
        for (size_t b = a + 1; b < picks.size(); ++b) {
          const double d = haversine_m(venues[picks[a]].lat, venues[picks[a]].lon,
                                       venues[picks[b]].lat, venues[picks[b]].lon);
          if (d < best_d) {
            best_d = d;
            best = b;
          }
        }
        std::swap(picks[a + 1], picks[best]);
      }
      seconds.clear();
      for (int j = 0; j < k; ++j) {
        seconds.push_back(static_cast<std::int64_t>(unit(rng) * kSecondsPerDay));
      }
      std::sort(seconds.begin(), seconds.end());
      for (int j = 0; j < k; ++j) {
        json line = {{"user", user_ids[u]},
                     {"venue", venues[picks[j]].id},
                     {"ts", format_iso8601(day_start + seconds[j])}};
        checkins_out << line.dump() << "\n";
      }
    }
  }
  checkins_out.close();

  {
    std::ofstream out(result.venues_path);
    if (!out) throw DataError("cannot write " + result.venues_path);
    for (const auto& v : venues) {
      json line = {{"id", v.id},
                   {"name", v.name},
                   {"lat", v.lat},
                   {"lon", v.lon},
                   {"category", v.category.root + "/" + v.category.specific}};
      out << line.dump() << "\n";
    }
  }

  {
    std::ofstream out(result.social_path);
    if (!out) throw DataError("cannot write " + result.social_path);
    out << "user_a,user_b\n";
    for (int a = 0; a < params.n_users; ++a) {
      for (int b = a + 1; b < params.n_users; ++b) {
        if (unit(rng) < params.social_edge_prob) {
          out << user_ids[a] << "," << user_ids[b] << "\n";
        }
      }
    }
  }

  {
    std::ofstream out(result.taxonomy_path);
    if (!out) throw DataError("cannot write " + result.taxonomy_path);
    json types = json::object();
    for (const auto& [specific, root] : taxonomy.root_of) types[specific] = root;
    json doc = {{"types", types}, {"event_types", json::array()}};
    for (const auto& t : taxonomy.event_types) doc["event_types"].push_back(t);
    out << doc.dump(2) << "\n";
  }

  // Exact expectations under the generator: user activity is constant, so a
  // venue's daily rate is total activity times its selection share.
  result.manifest.span = span;
  result.manifest.event_window = event;
  result.manifest.pre_window = pre;
  result.manifest.prior_window = prior;
  const double event_len_days = static_cast<double>(event.length()) / kSecondsPerDay;
  const double prior_len_days = static_cast<double>(prior.length()) / kSecondsPerDay;
  const double pre_len_days = static_cast<double>(pre.length()) / kSecondsPerDay;
  result.manifest.venues.reserve(venues.size());
  for (size_t i = 0; i < venues.size(); ++i) {
    VenueTruth t;
    t.venue_id = venues[i].id;
    t.hotspot_distance_m = hotspot_distance[i];
    t.rate_prior_per_day = expected_base_rate[i];
    t.rate_event_per_day = expected_event_rate[i];
    t.expected_prior = t.rate_prior_per_day * prior_len_days;
    t.expected_pre = t.rate_prior_per_day * pre_len_days;
    t.expected_event = t.rate_event_per_day * event_len_days;
    t.expected_ar = t.expected_event - t.expected_prior * event_len_days / prior_len_days;
    t.expected_label = t.expected_ar > 0.0 ? +1 : -1;
    result.manifest.venues.push_back(std::move(t));
  }

  {
    std::ofstream out(result.manifest_path);
    if (!out) throw DataError("cannot write " + result.manifest_path);
    json venues_json = json::array();
    for (const auto& t : result.manifest.venues) {
      venues_json.push_back({{"id", t.venue_id},
                             {"hotspot_distance_m", t.hotspot_distance_m},
                             {"rate_prior_per_day", t.rate_prior_per_day},
                             {"rate_event_per_day", t.rate_event_per_day},
                             {"expected_prior", t.expected_prior},
                             {"expected_pre", t.expected_pre},
                             {"expected_event", t.expected_event},
                             {"expected_ar", t.expected_ar},
                             {"expected_label", t.expected_label}});
    }
    json doc = {
        {"seed", params.seed},
        {"beta", params.beta},
        {"n_venues", params.n_venues},
        {"n_users", params.n_users},
        {"daily_checkin_rate", params.daily_checkin_rate},
        {"hotspot_decay_m", params.hotspot_decay_m},
        {"span_start", format_iso8601(span.start)},
        {"span_end", format_iso8601(span.end)},
        {"event_start", format_iso8601(event.start)},
        {"event_end", format_iso8601(event.end)},
        {"pre_start", format_iso8601(pre.start)},
        {"prior_start", format_iso8601(prior.start)},
        {"venues", std::move(venues_json)},
    };
    out << doc.dump(2) << "\n";
  }

  {
    std::ofstream out(result.config_path);
    if (!out) throw DataError("cannot write " + result.config_path);
    json doc = {
        {"checkins", "checkins.jsonl"},
        {"venues", "venues.jsonl"},
        {"social", "social.csv"},
        {"taxonomy", "taxonomy.json"},
        {"out_dir", "."},
        {"event_start", format_iso8601(event.start)},
        {"event_end", format_iso8601(event.end)},
        {"prior_days", params.prior_days},
        {"radius_m", 200.0},
        {"max_gap_s", kDefaultMaxGapSeconds},
        {"hotspot_patterns", json::array({"Live Site 2012", "Olympic Broadcast Compound"})},
        {"sponsor_pattern", "McDonald"},
        {"span_start", format_iso8601(span.start)},
        {"span_end", format_iso8601(span.end)},
        {"seed", params.seed},
    };
    out << doc.dump(2) << "\n";
  }
  return result;
}

}  // namespace eventlens
