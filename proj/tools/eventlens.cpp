#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <set>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "eventlens/analytics.hpp"
#include "eventlens/corpus.hpp"
#include "eventlens/features.hpp"
#include "eventlens/ml.hpp"
#include "eventlens/mobility.hpp"
#include "eventlens/returns.hpp"
#include "eventlens/synth.hpp"
#include "eventlens/util.hpp"

namespace {

using namespace eventlens;
using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

struct RunConfig {
  std::string checkins, venues, social, taxonomy;
  std::string out_dir = ".";
  std::string event_start, event_end;
  int prior_days = 91;
  double radius_m = 200.0;
  std::int64_t max_gap_s = kDefaultMaxGapSeconds;
  std::vector<std::string> hotspot_patterns = {"Live Site 2012",
                                               "Olympic Broadcast Compound"};
  std::vector<std::string> hotspot_ids;    // explicit override of the patterns
  std::vector<std::string> stadium_types;  // default: every type containing "stadium"
  std::string sponsor_pattern = "McDonald";
  std::string root_category = "Food";
  double space_radius_m = 1000.0;
  std::int64_t min_prior_checkins = 5;
  std::uint64_t seed = 42;
  std::string span_start, span_end;  // optional declared corpus bounds
};

json config_to_json(const RunConfig& rc) {
  return json{{"checkins", rc.checkins},
              {"venues", rc.venues},
              {"social", rc.social},
              {"taxonomy", rc.taxonomy},
              {"out_dir", rc.out_dir},
              {"event_start", rc.event_start},
              {"event_end", rc.event_end},
              {"prior_days", rc.prior_days},
              {"radius_m", rc.radius_m},
              {"max_gap_s", rc.max_gap_s},
              {"hotspot_patterns", rc.hotspot_patterns},
              {"hotspot_ids", rc.hotspot_ids},
              {"stadium_types", rc.stadium_types},
              {"sponsor_pattern", rc.sponsor_pattern},
              {"root_category", rc.root_category},
              {"space_radius_m", rc.space_radius_m},
              {"min_prior_checkins", rc.min_prior_checkins},
              {"seed", rc.seed},
              {"span_start", rc.span_start},
              {"span_end", rc.span_end}};
}

std::string resolve_against(const std::filesystem::path& base, const std::string& path) {
  if (path.empty()) return path;
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (base / p).lexically_normal().string();
}

void load_config_file(const std::string& config_path, RunConfig* rc) {
  std::ifstream in(config_path);
  if (!in) throw DataError("cannot open config file " + config_path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(config_path + ": " + e.what());
  }
  const std::filesystem::path base = std::filesystem::path(config_path).parent_path();
  const auto str = [&](const char* key, std::string* out, bool is_path) {
    if (doc.contains(key)) {
      *out = doc[key].get<std::string>();
      if (is_path) *out = resolve_against(base, *out);
    }
  };
  str("checkins", &rc->checkins, true);
  str("venues", &rc->venues, true);
  str("social", &rc->social, true);
  str("taxonomy", &rc->taxonomy, true);
  str("out_dir", &rc->out_dir, true);
  str("event_start", &rc->event_start, false);
  str("event_end", &rc->event_end, false);
  str("sponsor_pattern", &rc->sponsor_pattern, false);
  str("root_category", &rc->root_category, false);
  str("span_start", &rc->span_start, false);
  str("span_end", &rc->span_end, false);
  if (doc.contains("prior_days")) rc->prior_days = doc["prior_days"].get<int>();
  if (doc.contains("radius_m")) rc->radius_m = doc["radius_m"].get<double>();
  if (doc.contains("max_gap_s")) rc->max_gap_s = doc["max_gap_s"].get<std::int64_t>();
  if (doc.contains("space_radius_m")) rc->space_radius_m = doc["space_radius_m"].get<double>();
  if (doc.contains("min_prior_checkins")) {
    rc->min_prior_checkins = doc["min_prior_checkins"].get<std::int64_t>();
  }
  if (doc.contains("seed")) rc->seed = doc["seed"].get<std::uint64_t>();
  if (doc.contains("hotspot_patterns")) {
    rc->hotspot_patterns = doc["hotspot_patterns"].get<std::vector<std::string>>();
  }
  if (doc.contains("hotspot_ids")) {
    rc->hotspot_ids = doc["hotspot_ids"].get<std::vector<std::string>>();
  }
  if (doc.contains("stadium_types")) {
    rc->stadium_types = doc["stadium_types"].get<std::vector<std::string>>();
  }
}

// Flag values captured per subcommand; only explicitly-set flags override
// the config file.
struct CommonFlags {
  std::string config;
  std::optional<std::string> checkins, venues, social, taxonomy, out_dir;
  std::optional<std::string> event_start, event_end, span_start, span_end;
  std::optional<int> prior_days;
  std::optional<double> radius_m, space_radius_m;
  std::optional<std::int64_t> max_gap_s, min_prior_checkins;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> sponsor_pattern, root_category;
  std::vector<std::string> hotspot_ids, hotspot_patterns, stadium_types;
};

void add_common_flags(CLI::App* cmd, CommonFlags* f) {
  cmd->add_option("--config", f->config, "JSON config file; flags override its values");
  cmd->add_option("--checkins", f->checkins, "check-ins JSON-lines file");
  cmd->add_option("--venues", f->venues, "venues JSON-lines file");
  cmd->add_option("--social", f->social, "social edges CSV file");
  cmd->add_option("--taxonomy", f->taxonomy, "category taxonomy JSON file");
  cmd->add_option("--out", f->out_dir, "output directory");
  cmd->add_option("--event-start", f->event_start, "event window start (ISO-8601)");
  cmd->add_option("--event-end", f->event_end, "event window end, exclusive (ISO-8601)");
  cmd->add_option("--prior-days", f->prior_days, "length of the baseline window in days");
  cmd->add_option("--radius", f->radius_m, "neighborhood radius in meters");
  cmd->add_option("--max-gap", f->max_gap_s, "max transition gap in seconds");
  cmd->add_option("--sponsor", f->sponsor_pattern, "sponsor venue name pattern");
  cmd->add_option("--category", f->root_category, "root category under analysis");
  cmd->add_option("--space-radius", f->space_radius_m,
                  "prediction-space hotspot distance cap in meters");
  cmd->add_option("--min-prior", f->min_prior_checkins,
                  "prediction-space minimum prior-window check-ins");
  cmd->add_option("--seed", f->seed, "random seed");
  cmd->add_option("--hotspot-id", f->hotspot_ids, "explicit hotspot venue id (repeatable)");
  cmd->add_option("--hotspot-pattern", f->hotspot_patterns,
                  "hotspot name pattern (repeatable)");
  cmd->add_option("--stadium-type", f->stadium_types, "stadium venue type (repeatable)");
  cmd->add_option("--span-start", f->span_start, "declared corpus bound (ISO-8601)");
  cmd->add_option("--span-end", f->span_end, "declared corpus bound (ISO-8601)");
}

RunConfig resolve_config(const CommonFlags& f) {
  RunConfig rc;
  if (!f.config.empty()) load_config_file(f.config, &rc);
  if (f.checkins) rc.checkins = *f.checkins;
  if (f.venues) rc.venues = *f.venues;
  if (f.social) rc.social = *f.social;
  if (f.taxonomy) rc.taxonomy = *f.taxonomy;
  if (f.out_dir) rc.out_dir = *f.out_dir;
  if (f.event_start) rc.event_start = *f.event_start;
  if (f.event_end) rc.event_end = *f.event_end;
  if (f.prior_days) rc.prior_days = *f.prior_days;
  if (f.radius_m) rc.radius_m = *f.radius_m;
  if (f.max_gap_s) rc.max_gap_s = *f.max_gap_s;
  if (f.sponsor_pattern) rc.sponsor_pattern = *f.sponsor_pattern;
  if (f.root_category) rc.root_category = *f.root_category;
  if (f.space_radius_m) rc.space_radius_m = *f.space_radius_m;
  if (f.min_prior_checkins) rc.min_prior_checkins = *f.min_prior_checkins;
  if (f.seed) rc.seed = *f.seed;
  if (!f.hotspot_ids.empty()) rc.hotspot_ids = f.hotspot_ids;
  if (!f.hotspot_patterns.empty()) rc.hotspot_patterns = f.hotspot_patterns;
  if (!f.stadium_types.empty()) rc.stadium_types = f.stadium_types;
  if (f.span_start) rc.span_start = *f.span_start;
  if (f.span_end) rc.span_end = *f.span_end;
  return rc;
}

std::optional<TimeWindow> declared_bounds(const RunConfig& rc) {
  if (rc.span_start.empty() || rc.span_end.empty()) return std::nullopt;
  return make_window(parse_iso8601(rc.span_start), parse_iso8601(rc.span_end));
}

Corpus load_from(const RunConfig& rc) {
  if (rc.checkins.empty() || rc.venues.empty() || rc.social.empty() ||
      rc.taxonomy.empty()) {
    throw DataError("all four corpus files must be given (via --config or flags)");
  }
  return load_corpus(rc.checkins, rc.venues, rc.social, rc.taxonomy,
                     declared_bounds(rc));
}

TimeWindow event_window_of(const RunConfig& rc) {
  if (rc.event_start.empty() || rc.event_end.empty()) {
    throw DataError("event_start and event_end must be configured");
  }
  return make_window(parse_iso8601(rc.event_start), parse_iso8601(rc.event_end));
}

EventConfig event_config_of(const RunConfig& rc, const Corpus& corpus) {
  EventConfig cfg;
  cfg.event_window = event_window_of(rc);
  cfg.pre_window = TimeWindow{cfg.event_window.start - cfg.event_window.length(),
                              cfg.event_window.start};
  cfg.prior_window =
      TimeWindow{cfg.event_window.start -
                     static_cast<std::int64_t>(rc.prior_days) * kSecondsPerDay,
                 cfg.event_window.start};
  cfg.radius_m = rc.radius_m;
  cfg.sponsor_name_pattern = rc.sponsor_pattern;
  if (!rc.stadium_types.empty()) {
    cfg.stadium_types = rc.stadium_types;
  } else {
    for (const auto& [specific, root] : corpus.taxonomy().root_of) {
      if (contains_ci(specific, "stadium")) cfg.stadium_types.push_back(specific);
    }
  }
  cfg.hotspot_ids =
      !rc.hotspot_ids.empty() ? rc.hotspot_ids : detect_hotspots(corpus, rc.hotspot_patterns);
  if (cfg.hotspot_ids.empty()) {
    throw DataError("no hotspot venues found (no name matches the configured patterns)");
  }
  return cfg;
}

std::ofstream open_output(const RunConfig& rc, const std::string& name) {
  std::filesystem::create_directories(rc.out_dir);
  const auto path = std::filesystem::path(rc.out_dir) / name;
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

void write_run_manifest(const RunConfig& rc, const std::string& subcommand) {
  std::ofstream out = open_output(rc, "run_" + subcommand + ".json");
  json doc = {{"subcommand", subcommand},
              {"version", kVersion},
              {"seed", rc.seed},
              {"config", config_to_json(rc)},
              {"written_at", format_iso8601(static_cast<UtcSeconds>(std::time(nullptr)))}};
  out << doc.dump(2) << "\n";
}

std::string csv_double(double v) {
  if (std::isnan(v)) return "nan";
  return format_double(v);
}

std::string csv_optional(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

void write_feature_row(std::ofstream& out, const FeatureVector& fv) {
  out << format_double(fv.olympic_distance) << "," << format_double(fv.stadium_distance)
      << "," << csv_optional(fv.sponsor_distance) << ","
      << format_double(fv.nearby_place_entropy) << "," << format_double(fv.jensen_quality)
      << "," << fv.popularity << "," << format_double(fv.entertainment_flow) << ","
      << fv.social_area;
}

int run_validate(const RunConfig& rc) {
  const Corpus corpus = load_from(rc);
  std::cout << "valid corpus: " << corpus.venues().size() << " venues, "
            << corpus.users().size() << " users, " << corpus.checkins().size()
            << " check-ins, " << corpus.social().edges.size() << " social edges\n"
            << "digest " << corpus_digest(corpus) << "\n";
  write_run_manifest(rc, "validate");
  return 0;
}

int run_features(const RunConfig& rc, bool all_venues) {
  const Corpus corpus = load_from(rc);
  const EventConfig cfg = event_config_of(rc, corpus);
  const FeatureEngine engine(corpus, cfg);
  std::vector<std::string> ids;
  if (all_venues) {
    for (const auto& v : corpus.venues()) ids.push_back(v.id);
  } else {
    ids = prediction_space(corpus, cfg,
                           PredictionSpaceOptions{rc.root_category, rc.space_radius_m,
                                                  rc.min_prior_checkins});
  }
  const FeatureMatrix matrix = engine.feature_matrix(ids);
  std::ofstream out = open_output(rc, "features.csv");
  out << "venue_id,olympic_distance,stadium_distance,sponsor_distance,"
         "nearby_place_entropy,jensen_quality,popularity,entertainment_flow,"
         "social_area\n";
  for (const auto& row : matrix.rows) {
    out << row.venue_id << ",";
    write_feature_row(out, row);
    out << "\n";
  }
  write_run_manifest(rc, "features");
  return 0;
}

LabeledDataset build_dataset(const RunConfig& rc, const Corpus& corpus) {
  const EventConfig cfg = event_config_of(rc, corpus);
  const FeatureEngine engine(corpus, cfg);
  return label_instances(engine, PredictionSpaceOptions{rc.root_category, rc.space_radius_m,
                                                        rc.min_prior_checkins});
}

int run_label(const RunConfig& rc) {
  const Corpus corpus = load_from(rc);
  const LabeledDataset dataset = build_dataset(rc, corpus);
  std::ofstream out = open_output(rc, "labels.csv");
  out << "venue_id,R,E,AR,label,olympic_distance,stadium_distance,sponsor_distance,"
         "nearby_place_entropy,jensen_quality,popularity,entertainment_flow,"
         "social_area\n";
  for (const auto& inst : dataset.instances) {
    out << inst.features.venue_id << "," << inst.actual << ","
        << format_double(inst.expected) << "," << format_double(inst.abnormal) << ","
        << inst.label << ",";
    write_feature_row(out, inst.features);
    out << "\n";
  }
  write_run_manifest(rc, "label");
  return 0;
}

int run_rank_eval(const RunConfig& rc) {
  const Corpus corpus = load_from(rc);
  const LabeledDataset dataset = build_dataset(rc, corpus);
  std::ofstream out = open_output(rc, "rank_eval.csv");
  out << "feature,auc\n";
  for (const auto* name : kFeatureNames) {
    std::vector<std::string> ids;
    std::vector<double> values;
    std::vector<int> labels;
    bool absent = false;
    for (const auto& inst : dataset.instances) {
      const auto value = feature_value(inst.features, name);
      if (!value) {
        absent = true;
        break;
      }
      ids.push_back(inst.features.venue_id);
      values.push_back(*value);
      labels.push_back(inst.label);
    }
    if (absent) {
      out << name << ",\n";
      continue;
    }
    const EvalReport report = rank_sweep(ids, values, labels, feature_direction(name));
    out << name << "," << format_double(report.auc) << "\n";
  }
  write_run_manifest(rc, "rank-eval");
  return 0;
}

json report_to_json(const EvalReport& report) {
  json roc = json::array();
  for (const auto& [fpr, tpr] : report.roc_points) roc.push_back({fpr, tpr});
  json pr = json::array();
  for (const auto& p : report.pr_curve) {
    pr.push_back({{"k", p.k}, {"precision", p.precision}, {"recall", p.recall}});
  }
  json doc = {{"auc", report.auc},
              {"roc_points", roc},
              {"pr_curve", pr},
              {"folds", report.folds},
              {"skipped_folds", report.skipped_folds},
              {"used_features", report.used_features}};
  if (!std::isnan(report.precision)) doc["precision"] = report.precision;
  if (!std::isnan(report.recall)) doc["recall"] = report.recall;
  return doc;
}

int run_crossval(const RunConfig& rc, const std::string& model_arg,
                 const std::string& set_arg) {
  const Corpus corpus = load_from(rc);
  const LabeledDataset dataset = build_dataset(rc, corpus);
  std::vector<ModelKind> models;
  if (model_arg == "all") {
    models = {ModelKind::gnb, ModelKind::rf, ModelKind::svm};
  } else {
    models = {parse_model_kind(model_arg)};
  }
  std::vector<FeatureSet> sets;
  if (set_arg == "all") {
    sets = {FeatureSet::G, FeatureSet::M, FeatureSet::GM};
  } else {
    sets = {parse_feature_set(set_arg)};
  }

  std::ofstream out = open_output(rc, "crossval.csv");
  out << "model,set,precision,recall,auc\n";
  json combos = json::object();
  for (ModelKind model : models) {
    for (FeatureSet set : sets) {
      const EvalReport report = loocv(dataset, model, set, rc.seed);
      out << to_string(model) << "," << to_string(set) << ","
          << format_double(report.precision) << "," << format_double(report.recall)
          << "," << format_double(report.auc) << "\n";
      combos[to_string(model) + "/" + to_string(set)] = report_to_json(report);
    }
  }
  std::ofstream report_out = open_output(rc, "crossval_report.json");
  json doc = {{"instances", dataset.instances.size()},
              {"svm_config",
               "C-SVM, C=1, RBF kernel, gamma = 1/(d * pooled variance), "
               "z-scored features, SMO to KKT tolerance 1e-3"},
              {"rf_config", "64 trees, 4 candidate features per split on GM, 3 on G/M"},
              {"results", combos}};
  report_out << doc.dump(2) << "\n";
  write_run_manifest(rc, "crossval");
  return 0;
}

int run_kendall(const RunConfig& rc, int period_days, const std::vector<double>& bins) {
  const Corpus corpus = load_from(rc);
  const TimeWindow anchor = event_window_of(rc);
  const std::int64_t period_len =
      static_cast<std::int64_t>(period_days) * kSecondsPerDay;
  std::ofstream out = open_output(rc, "kendall.csv");
  out << "period_start,bin_max_m,tau,n_items\n";
  if (bins.empty()) {
    const auto series = period_rank_correlation(corpus, rc.root_category, period_len, anchor);
    for (const auto& p : series) {
      out << format_iso8601(p.second.start) << ",," << csv_double(p.tau) << ","
          << p.n_items << "\n";
    }
  } else {
    EventConfig cfg = event_config_of(rc, corpus);
    const auto binned = distance_binned_correlation(corpus, rc.root_category, period_len,
                                                    anchor, bins, cfg.hotspot_ids);
    for (const auto& bin : binned) {
      for (const auto& p : bin.series) {
        out << format_iso8601(p.second.start) << "," << format_double(bin.bin_max_m)
            << "," << csv_double(p.tau) << "," << p.n_items << "\n";
      }
    }
  }
  write_run_manifest(rc, "kendall");
  return 0;
}

int run_popshare(const RunConfig& rc) {
  const Corpus corpus = load_from(rc);
  const TimeWindow event = event_window_of(rc);
  const TimeWindow pre{event.start - event.length(), event.start};
  const auto before = popularity_share(corpus, pre);
  const auto during = popularity_share(corpus, event);
  std::set<std::string> roots;
  for (const auto& [root, share] : before) roots.insert(root);
  for (const auto& [root, share] : during) roots.insert(root);
  std::ofstream out = open_output(rc, "popshare.csv");
  out << "category,share_pre,share_event\n";
  for (const auto& root : roots) {
    const auto b = before.find(root);
    const auto d = during.find(root);
    out << root << "," << format_double(b == before.end() ? 0.0 : b->second) << ","
        << format_double(d == during.end() ? 0.0 : d->second) << "\n";
  }
  write_run_manifest(rc, "popshare");
  return 0;
}

int run_flows(const RunConfig& rc) {
  const Corpus corpus = load_from(rc);
  const TimeWindow event = event_window_of(rc);
  const TimeWindow pre{event.start - event.length(), event.start};
  const TransitionTable before = extract_transitions(corpus, pre, rc.max_gap_s);
  const TransitionTable during = extract_transitions(corpus, event, rc.max_gap_s);
  const auto before_probs = category_flow_matrix(corpus, before, rc.root_category);
  const auto during_probs = category_flow_matrix(corpus, during, rc.root_category);
  const FlowDeltas deltas = flow_deltas(corpus, before, during, rc.root_category);

  const auto prob_of = [](const std::map<std::string, FlowPair>& probs,
                          const std::string& type, bool in_direction) {
    const auto it = probs.find(type);
    if (it == probs.end()) return 0.0;
    return in_direction ? it->second.in_prob : it->second.out_prob;
  };
  std::ofstream out = open_output(rc, "flows.csv");
  out << "type,direction,prob_before,prob_during,delta\n";
  for (const auto& d : deltas.in) {
    out << d.type << ",in," << format_double(prob_of(before_probs, d.type, true)) << ","
        << format_double(prob_of(during_probs, d.type, true)) << ","
        << format_double(d.delta) << "\n";
  }
  for (const auto& d : deltas.out) {
    out << d.type << ",out," << format_double(prob_of(before_probs, d.type, false)) << ","
        << format_double(prob_of(during_probs, d.type, false)) << ","
        << format_double(d.delta) << "\n";
  }
  write_run_manifest(rc, "flows");
  return 0;
}

int run_hotspots(const RunConfig& rc) {
  const Corpus corpus = load_from(rc);
  const auto ids = detect_hotspots(corpus, rc.hotspot_patterns);
  std::ofstream out = open_output(rc, "hotspots.txt");
  for (const auto& id : ids) out << id << "\n";
  write_run_manifest(rc, "hotspots");
  return 0;
}

int run_jensen(const RunConfig& rc) {
  const Corpus corpus = load_from(rc);
  const SpatialIndex index(corpus.venues(), rc.radius_m);
  const JensenTable table(corpus, index, rc.radius_m);
  std::ofstream out = open_output(rc, "jensen.csv");
  out << "type_p,type_v,k\n";
  const auto& types = table.types();
  for (size_t tp = 0; tp < types.size(); ++tp) {
    for (size_t tv = 0; tv < types.size(); ++tv) {
      const auto k = table.coefficient(static_cast<int>(tp), static_cast<int>(tv));
      out << types[tp] << "," << types[tv] << "," << csv_optional(k) << "\n";
    }
  }
  write_run_manifest(rc, "jensen");
  return 0;
}

int run_synth(const RunConfig& rc, const SynthParams& params) {
  const SynthResult result = generate(params, rc.out_dir);
  std::cout << "synthetic corpus written to " << rc.out_dir << " ("
            << result.manifest.venues.size() << " venues)\n";
  write_run_manifest(rc, "synth");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"batch analytics over check-in corpora around large events"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::function<int()> action;

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "generate a seeded synthetic corpus");
  CommonFlags synth_flags;
  SynthParams synth_params;
  synth_cmd->add_option("--out", synth_flags.out_dir, "output directory")->required();
  synth_cmd->add_option("--seed", synth_flags.seed, "random seed");
  synth_cmd->add_option("--beta", synth_params.beta, "event effect strength");
  synth_cmd->add_option("--venues", synth_params.n_venues, "number of venues");
  synth_cmd->add_option("--users", synth_params.n_users, "number of users");
  synth_cmd->add_option("--rate", synth_params.daily_checkin_rate,
                        "per-user daily check-in rate");
  synth_cmd->add_option("--hotspots", synth_params.n_hotspots, "number of hotspots");
  synth_cmd->add_option("--edge-prob", synth_params.social_edge_prob,
                        "social edge probability");
  synth_cmd->add_option("--prior-days", synth_params.prior_days,
                        "baseline window length in days");
  synth_cmd->add_option("--lead-days", synth_params.lead_days,
                        "days of data before the event");
  synth_cmd->add_option("--tail-days", synth_params.tail_days,
                        "days of data after the event");
  synth_cmd->callback([&]() {
    action = [&]() {
      RunConfig rc = resolve_config(synth_flags);
      if (synth_flags.seed) synth_params.seed = *synth_flags.seed;
      rc.seed = synth_params.seed;
      return run_synth(rc, synth_params);
    };
  });

  const auto add_data_subcommand = [&](const char* name, const char* help,
                                       CommonFlags& flags,
                                       std::function<int(const RunConfig&)> body) {
    auto* cmd = app.add_subcommand(name, help);
    add_common_flags(cmd, &flags);
    cmd->callback([&flags, body, &action]() {
      action = [&flags, body]() { return body(resolve_config(flags)); };
    });
    return cmd;
  };

  CommonFlags validate_flags, label_flags, rank_flags, popshare_flags, flows_flags,
      hotspots_flags, jensen_flags;
  add_data_subcommand("validate", "load and validate the corpus", validate_flags,
                      run_validate);
  add_data_subcommand("label", "abnormal-returns labels over the prediction space",
                      label_flags, run_label);
  add_data_subcommand("rank-eval", "single-feature AUC table", rank_flags, run_rank_eval);
  add_data_subcommand("popshare", "check-in share per root category", popshare_flags,
                      run_popshare);
  add_data_subcommand("flows", "transition probability changes around a category",
                      flows_flags, run_flows);
  add_data_subcommand("hotspots", "venues matching the hotspot name patterns",
                      hotspots_flags, run_hotspots);
  add_data_subcommand("jensen", "full inter-type attraction coefficient table",
                      jensen_flags, run_jensen);

  // features (extra flag)
  CommonFlags features_flags;
  bool features_all = false;
  {
    auto* cmd = app.add_subcommand("features", "per-venue feature matrix");
    add_common_flags(cmd, &features_flags);
    cmd->add_flag("--all", features_all, "every venue, not just the prediction space");
    cmd->callback([&]() {
      action = [&]() { return run_features(resolve_config(features_flags), features_all); };
    });
  }

  // crossval (extra flags)
  CommonFlags crossval_flags;
  std::string crossval_model = "all", crossval_set = "all";
  {
    auto* cmd = app.add_subcommand("crossval",
                                   "leave-one-out supervised model evaluation");
    add_common_flags(cmd, &crossval_flags);
    cmd->add_option("--model", crossval_model, "gnb, rf, svm or all");
    cmd->add_option("--set", crossval_set, "G, M, GM or all");
    cmd->callback([&]() {
      action = [&]() {
        return run_crossval(resolve_config(crossval_flags), crossval_model, crossval_set);
      };
    });
  }

  // kendall (extra flags)
  CommonFlags kendall_flags;
  int kendall_period_days = 21;
  std::vector<double> kendall_bins;
  {
    auto* cmd = app.add_subcommand("kendall", "popularity rank correlation per period pair");
    add_common_flags(cmd, &kendall_flags);
    cmd->add_option("--period-days", kendall_period_days, "period length in days");
    cmd->add_option("--bins", kendall_bins,
                    "hotspot distance bin upper edges in meters (repeatable)");
    cmd->callback([&]() {
      action = [&]() {
        return run_kendall(resolve_config(kendall_flags), kendall_period_days, kendall_bins);
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    std::cout << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n" << app.help();
    return 1;
  }

  try {
    return action();
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
