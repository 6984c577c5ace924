#pragma once

// Independent brute-force reference implementations used only by tests.
// They deliberately avoid the library's data structures and algorithmic
// shortcuts: distances use the spherical law of cosines, searches are flat
// scans, tau and AUC count pairs exhaustively.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "eventlens/corpus.hpp"
#include "eventlens/features.hpp"
#include "eventlens/ml.hpp"
#include "eventlens/mobility.hpp"

namespace oracle {

using eventlens::Corpus;
using eventlens::ScoredItem;
using eventlens::TimeWindow;
using eventlens::TransitionTable;

constexpr double kRad = 3.14159265358979323846 / 180.0;

inline double distance_m(double lat1, double lon1, double lat2, double lon2) {
  const double c = std::sin(lat1 * kRad) * std::sin(lat2 * kRad) +
                   std::cos(lat1 * kRad) * std::cos(lat2 * kRad) *
                       std::cos((lon2 - lon1) * kRad);
  return 6371000.0 * std::acos(std::clamp(c, -1.0, 1.0));
}

inline double venue_distance_m(const Corpus& corpus, int a, int b) {
  const auto& va = corpus.venues()[a];
  const auto& vb = corpus.venues()[b];
  return distance_m(va.lat, va.lon, vb.lat, vb.lon);
}

inline std::vector<int> neighborhood(const Corpus& corpus, int center, double radius_m) {
  std::vector<int> members;
  for (size_t i = 0; i < corpus.venues().size(); ++i) {
    if (venue_distance_m(corpus, center, static_cast<int>(i)) <= radius_m) {
      members.push_back(static_cast<int>(i));
    }
  }
  return members;
}

inline std::map<std::string, int> count_by_type(const Corpus& corpus, int center,
                                                double radius_m) {
  std::map<std::string, int> counts;
  for (int m : neighborhood(corpus, center, radius_m)) {
    ++counts[corpus.venues()[m].category.specific];
  }
  return counts;
}

inline std::pair<int, double> nearest_of(const Corpus& corpus, int origin,
                                         const std::vector<int>& candidates) {
  int best = -1;
  double best_d = 0.0;
  for (int c : candidates) {
    const double d = venue_distance_m(corpus, origin, c);
    if (best < 0 || d < best_d ||
        (d == best_d && corpus.venues()[c].id < corpus.venues()[best].id)) {
      best = c;
      best_d = d;
    }
  }
  return {best, best_d};
}

inline double entropy(const std::map<std::string, int>& counts) {
  double total = 0.0;
  for (const auto& [t, c] : counts) total += c;
  double h = 0.0;
  for (const auto& [t, c] : counts) {
    if (c > 0) {
      const double p = c / total;
      h -= p * std::log(p);
    }
  }
  return h;
}

// Direct evaluation of the inter-type coefficient: sum over sites q of the
// source type of N_tv(q,r) / (N(q,r) - N_tp(q,r)), zero-denominator terms
// skipped, absent when either type is missing from the corpus.
inline std::optional<double> jensen_k(const Corpus& corpus, const std::string& tp,
                                      const std::string& tv, double radius_m) {
  const auto& venues = corpus.venues();
  std::int64_t n_tp = 0, n_tv = 0;
  for (const auto& v : venues) {
    if (v.category.specific == tp) ++n_tp;
    if (v.category.specific == tv) ++n_tv;
  }
  if (n_tp == 0 || n_tv == 0) return std::nullopt;
  double sum = 0.0;
  for (size_t q = 0; q < venues.size(); ++q) {
    if (venues[q].category.specific != tp) continue;
    const auto counts = count_by_type(corpus, static_cast<int>(q), radius_m);
    int total = 0;
    for (const auto& [t, c] : counts) total += c;
    const auto tp_it = counts.find(tp);
    const int tp_count = tp_it == counts.end() ? 0 : tp_it->second;
    const int denom = total - tp_count;
    if (denom <= 0) continue;
    const auto tv_it = counts.find(tv);
    const int tv_count = tv_it == counts.end() ? 0 : tv_it->second;
    sum += static_cast<double>(tv_count) / denom;
  }
  const double n = static_cast<double>(venues.size());
  return (n - n_tp) / (static_cast<double>(n_tp) * static_cast<double>(n_tv)) * sum;
}

inline double jensen_quality(const Corpus& corpus, int venue_idx, double radius_m) {
  const auto& venues = corpus.venues();
  const std::string tv = venues[venue_idx].category.specific;
  const auto own_counts = count_by_type(corpus, venue_idx, radius_m);
  double quality = 0.0;
  for (const auto& [tp, root] : corpus.taxonomy().root_of) {
    const auto k = jensen_k(corpus, tp, tv, radius_m);
    if (!k) continue;
    double mean = 0.0;
    int same_type = 0;
    for (size_t u = 0; u < venues.size(); ++u) {
      if (venues[u].category.specific != tv) continue;
      ++same_type;
      const auto counts = count_by_type(corpus, static_cast<int>(u), radius_m);
      const auto it = counts.find(tp);
      mean += it == counts.end() ? 0.0 : it->second;
    }
    mean /= same_type;
    const auto it = own_counts.find(tp);
    const double own = it == own_counts.end() ? 0.0 : it->second;
    quality += *k * (own - mean);
  }
  return quality;
}

// Incident transitions re-derived by scanning the raw transition list.
inline double event_flow_fraction(const Corpus& corpus, const TransitionTable& table,
                                  int venue_idx) {
  int incident = 0, touching = 0;
  for (const auto& t : table.transitions()) {
    int other = -1;
    if (t.from == venue_idx) other = t.to;
    if (t.to == venue_idx) other = t.from;
    if (other < 0) continue;
    ++incident;
    if (corpus.taxonomy().is_event_type(corpus.venues()[other].category.specific)) {
      ++touching;
    }
  }
  return incident == 0 ? 0.0 : static_cast<double>(touching) / incident;
}

inline double entertainment_flow(const Corpus& corpus, const TransitionTable& table,
                                 int venue_idx, double radius_m) {
  const auto members = neighborhood(corpus, venue_idx, radius_m);
  double sum = 0.0;
  for (int m : members) sum += event_flow_fraction(corpus, table, m);
  return sum / static_cast<double>(members.size());
}

inline std::int64_t social_area(const Corpus& corpus, int venue_idx, double radius_m,
                                const TimeWindow& window) {
  std::set<int> area_visitors;
  for (int m : neighborhood(corpus, venue_idx, radius_m)) {
    for (int u : corpus.visitors(m, window)) area_visitors.insert(u);
  }
  std::int64_t pairs = 0;
  for (const auto& [a, b] : corpus.social().edges) {
    if (area_visitors.count(a) != 0 && area_visitors.count(b) != 0) ++pairs;
  }
  return pairs;
}

inline std::vector<std::string> prediction_space(const Corpus& corpus,
                                                 const std::vector<int>& hotspots,
                                                 const TimeWindow& prior,
                                                 const std::string& root, double max_dist_m,
                                                 std::int64_t min_prior) {
  std::vector<std::string> ids;
  for (size_t v = 0; v < corpus.venues().size(); ++v) {
    if (corpus.venues()[v].category.root != root) continue;
    if (corpus.checkin_count(static_cast<int>(v), prior) < min_prior) continue;
    if (oracle::nearest_of(corpus, static_cast<int>(v), hotspots).second > max_dist_m) {
      continue;
    }
    ids.push_back(corpus.venues()[v].id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

// Exhaustive pair counting with the tie convention of tau-b.
inline double kendall_tau(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  std::int64_t concordant = 0, discordant = 0, tied_x_only = 0, tied_y_only = 0;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0.0 && dy == 0.0) continue;
      if (dx == 0.0) {
        ++tied_x_only;
      } else if (dy == 0.0) {
        ++tied_y_only;
      } else if (dx * dy > 0.0) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const double fx = static_cast<double>(concordant + discordant + tied_y_only);
  const double fy = static_cast<double>(concordant + discordant + tied_x_only);
  if (fx <= 0.0 || fy <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(concordant - discordant) / std::sqrt(fx * fy);
}

// P(score_pos > score_neg) + 0.5 P(tie) by checking every (pos, neg) pair.
inline double auc(const std::vector<ScoredItem>& items) {
  double wins = 0.0;
  std::int64_t pairs = 0;
  for (const auto& p : items) {
    if (p.label <= 0) continue;
    for (const auto& q : items) {
      if (q.label > 0) continue;
      ++pairs;
      if (p.score > q.score) {
        wins += 1.0;
      } else if (p.score == q.score) {
        wins += 0.5;
      }
    }
  }
  return wins / static_cast<double>(pairs);
}

struct SweepPoint {
  int k;
  double precision;
  double recall;
};

// Threshold sweep by explicit enumeration of the sorted order.
inline std::vector<SweepPoint> rank_sweep(const std::vector<std::string>& ids,
                                          const std::vector<double>& values,
                                          const std::vector<int>& labels, bool ascending) {
  struct Row {
    std::string id;
    double score;
    int label;
  };
  std::vector<Row> rows;
  for (size_t i = 0; i < ids.size(); ++i) {
    rows.push_back(Row{ids[i], ascending ? -values[i] : values[i], labels[i]});
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  });
  int total_pos = 0;
  for (const auto& r : rows) {
    if (r.label > 0) ++total_pos;
  }
  std::vector<SweepPoint> points;
  int tp = 0;
  for (size_t k = 1; k <= rows.size(); ++k) {
    if (rows[k - 1].label > 0) ++tp;
    points.push_back(SweepPoint{static_cast<int>(k), static_cast<double>(tp) / k,
                                static_cast<double>(tp) / total_pos});
  }
  return points;
}

// Per-point Gaussian naive Bayes posterior computed with plain loops.
inline double gnb_posterior(const std::vector<std::vector<double>>& train,
                            const std::vector<int>& labels,
                            const std::vector<double>& probe) {
  const size_t d = probe.size();
  std::vector<double> sums[2], sqs[2];
  double counts[2] = {0, 0};
  for (int c = 0; c < 2; ++c) {
    sums[c].assign(d, 0.0);
    sqs[c].assign(d, 0.0);
  }
  for (size_t i = 0; i < train.size(); ++i) {
    const int c = labels[i] > 0 ? 1 : 0;
    counts[c] += 1.0;
    for (size_t j = 0; j < d; ++j) {
      sums[c][j] += train[i][j];
      sqs[c][j] += train[i][j] * train[i][j];
    }
  }
  double log_like[2];
  for (int c = 0; c < 2; ++c) {
    log_like[c] = std::log(counts[c] / train.size());
    for (size_t j = 0; j < d; ++j) {
      const double mean = sums[c][j] / counts[c];
      double var = sqs[c][j] / counts[c] - mean * mean;
      if (var < 1e-9) var = 1e-9;
      const double diff = probe[j] - mean;
      log_like[c] += -0.5 * (std::log(2.0 * 3.14159265358979323846 * var) +
                             diff * diff / var);
    }
  }
  const double m = std::max(log_like[0], log_like[1]);
  const double e0 = std::exp(log_like[0] - m), e1 = std::exp(log_like[1] - m);
  return e1 / (e0 + e1);
}

// Dual soft-margin SVM solved by projected gradient ascent with a quadratic
// penalty on the equality constraint; only viable for tiny problems, which
// is exactly what the tests use.
struct QpSvmSolution {
  std::vector<double> alpha;
  double bias = 0.0;
};

inline QpSvmSolution qp_svm(const Eigen::MatrixXd& X, const std::vector<int>& y,
                            double c, double gamma) {
  const int n = static_cast<int>(X.rows());
  Eigen::MatrixXd K(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      K(i, j) = std::exp(-gamma * (X.row(i) - X.row(j)).squaredNorm());
    }
  }
  std::vector<double> ys(n);
  for (int i = 0; i < n; ++i) ys[i] = y[i] > 0 ? 1.0 : -1.0;

  std::vector<double> alpha(n, 0.0);
  double mu = 10.0;
  for (int stage = 0; stage < 7; ++stage, mu *= 10.0) {
    const double lr = 1.0 / (mu * n + 100.0);
    for (int iter = 0; iter < 60000; ++iter) {
      double eq = 0.0;
      for (int i = 0; i < n; ++i) eq += alpha[i] * ys[i];
      for (int i = 0; i < n; ++i) {
        double grad = 1.0;
        for (int j = 0; j < n; ++j) grad -= ys[i] * ys[j] * alpha[j] * K(i, j);
        grad -= 2.0 * mu * eq * ys[i];
        alpha[i] = std::clamp(alpha[i] + lr * grad, 0.0, c);
      }
    }
  }

  // Bias from the non-bound vectors (or the margin midpoint if none).
  QpSvmSolution sol;
  sol.alpha = alpha;
  double bias_sum = 0.0;
  int bias_n = 0;
  for (int i = 0; i < n; ++i) {
    if (alpha[i] > 1e-6 && alpha[i] < c - 1e-6) {
      double f = 0.0;
      for (int j = 0; j < n; ++j) f += alpha[j] * ys[j] * K(i, j);
      bias_sum += f - ys[i];
      ++bias_n;
    }
  }
  if (bias_n > 0) {
    sol.bias = bias_sum / bias_n;
  } else {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      double f = 0.0;
      for (int j = 0; j < n; ++j) f += alpha[j] * ys[j] * K(i, j);
      if (ys[i] > 0) hi = std::min(hi, f - 1.0);
      else lo = std::max(lo, f + 1.0);
    }
    sol.bias = (lo + hi) / 2.0;
  }
  return sol;
}

inline double qp_svm_decision(const Eigen::MatrixXd& X, const std::vector<int>& y,
                              const QpSvmSolution& sol, double gamma,
                              const Eigen::VectorXd& probe) {
  double f = 0.0;
  for (int i = 0; i < X.rows(); ++i) {
    f += sol.alpha[i] * (y[i] > 0 ? 1.0 : -1.0) *
         std::exp(-gamma * (X.row(i).transpose() - probe).squaredNorm());
  }
  return f - sol.bias;
}

}  // namespace oracle
