#include "eventlens/ml.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <thread>

#include "eventlens/util.hpp"

namespace eventlens {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kGnbVarianceFloor = 1e-9;

struct ClassCounts {
  std::int64_t pos = 0;
  std::int64_t neg = 0;
};

ClassCounts count_classes(const std::vector<int>& labels) {
  ClassCounts c;
  for (int l : labels) (l > 0 ? c.pos : c.neg)++;
  return c;
}

}  // namespace

Direction feature_direction(const std::string& feature_name) {
  if (feature_name == "olympic_distance" || feature_name == "stadium_distance" ||
      feature_name == "sponsor_distance") {
    return Direction::ascending;
  }
  return Direction::descending;
}

double roc_auc(const std::vector<ScoredItem>& items) {
  std::int64_t n_pos = 0, n_neg = 0;
  for (const auto& it : items) (it.label > 0 ? n_pos : n_neg)++;
  if (n_pos == 0 || n_neg == 0) {
    throw DataError("roc_auc: both classes must be present");
  }
  std::vector<std::pair<double, int>> sorted;
  sorted.reserve(items.size());
  for (const auto& it : items) sorted.emplace_back(it.score, it.label);
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  // Twice the Mann-Whitney credit, kept integral: 2 per beaten negative,
  // 1 per tied negative.
  std::int64_t credit2 = 0;
  std::int64_t neg_below = 0;
  size_t i = 0;
  while (i < sorted.size()) {
    size_t j = i;
    std::int64_t group_pos = 0, group_neg = 0;
    while (j < sorted.size() && sorted[j].first == sorted[i].first) {
      (sorted[j].second > 0 ? group_pos : group_neg)++;
      ++j;
    }
    credit2 += group_pos * (2 * neg_below + group_neg);
    neg_below += group_neg;
    i = j;
  }
  return static_cast<double>(credit2) / static_cast<double>(2 * n_pos * n_neg);
}

std::vector<std::pair<double, double>> roc_points(const std::vector<ScoredItem>& items) {
  std::int64_t n_pos = 0, n_neg = 0;
  for (const auto& it : items) (it.label > 0 ? n_pos : n_neg)++;
  if (n_pos == 0 || n_neg == 0) {
    throw DataError("roc_points: both classes must be present");
  }
  std::vector<std::pair<double, int>> sorted;
  sorted.reserve(items.size());
  for (const auto& it : items) sorted.emplace_back(it.score, it.label);
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });

  std::vector<std::pair<double, double>> points{{0.0, 0.0}};
  std::int64_t tp = 0, fp = 0;
  size_t i = 0;
  while (i < sorted.size()) {
    size_t j = i;
    while (j < sorted.size() && sorted[j].first == sorted[i].first) {
      (sorted[j].second > 0 ? tp : fp)++;
      ++j;
    }
    points.emplace_back(static_cast<double>(fp) / static_cast<double>(n_neg),
                        static_cast<double>(tp) / static_cast<double>(n_pos));
    i = j;
  }
  return points;
}

EvalReport rank_sweep(const std::vector<std::string>& ids,
                      const std::vector<double>& values, const std::vector<int>& labels,
                      Direction direction) {
  if (ids.size() != values.size() || ids.size() != labels.size()) {
    throw DataError("rank_sweep: input lengths differ");
  }
  const std::int64_t n = static_cast<std::int64_t>(ids.size());
  std::vector<ScoredItem> items(ids.size());
  for (size_t i = 0; i < ids.size(); ++i) {
    const double signed_score =
        direction == Direction::ascending ? -values[i] : values[i];
    items[i] = ScoredItem{ids[i], signed_score, labels[i]};
  }
  const ClassCounts classes = count_classes(labels);
  if (classes.pos == 0 || classes.neg == 0) {
    throw DataError("rank_sweep: both classes must be present");
  }

  std::vector<const ScoredItem*> order;
  order.reserve(items.size());
  for (const auto& it : items) order.push_back(&it);
  std::sort(order.begin(), order.end(), [](const ScoredItem* a, const ScoredItem* b) {
    if (a->score != b->score) return a->score > b->score;
    return a->id < b->id;
  });

  EvalReport report;
  report.auc = roc_auc(items);
  report.roc_points = roc_points(items);
  std::int64_t tp = 0;
  for (std::int64_t k = 1; k <= n; ++k) {
    if (order[k - 1]->label > 0) ++tp;
    report.pr_curve.push_back(
        PrPoint{static_cast<int>(k), static_cast<double>(tp) / static_cast<double>(k),
                static_cast<double>(tp) / static_cast<double>(classes.pos)});
  }
  return report;
}

void Standardizer::fit(const Eigen::MatrixXd& X) {
  const double n = static_cast<double>(X.rows());
  const Eigen::RowVectorXd mu = X.colwise().sum() / n;
  const Eigen::RowVectorXd var =
      (X.rowwise() - mu).array().square().matrix().colwise().sum() / n;
  mean = mu.transpose();
  scale = var.transpose().array().sqrt().matrix();
  for (Eigen::Index j = 0; j < scale.size(); ++j) {
    if (scale[j] < 1e-12) scale[j] = 1.0;
  }
}

Eigen::MatrixXd Standardizer::transform(const Eigen::MatrixXd& X) const {
  Eigen::MatrixXd out = X.rowwise() - mean.transpose();
  out.array().rowwise() /= scale.transpose().array();
  return out;
}

Eigen::VectorXd Standardizer::transform_row(const Eigen::VectorXd& x) const {
  return ((x - mean).array() / scale.array()).matrix();
}

GaussianNb train_gnb(const Eigen::MatrixXd& X, const std::vector<int>& y) {
  const ClassCounts classes = count_classes(y);
  if (classes.pos == 0 || classes.neg == 0) {
    throw DataError("train_gnb: both classes must be present");
  }
  const Eigen::Index d = X.cols();
  GaussianNb model;
  model.mean_pos = Eigen::VectorXd::Zero(d);
  model.mean_neg = Eigen::VectorXd::Zero(d);
  model.var_pos = Eigen::VectorXd::Zero(d);
  model.var_neg = Eigen::VectorXd::Zero(d);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    (y[i] > 0 ? model.mean_pos : model.mean_neg) += X.row(i).transpose();
  }
  model.mean_pos /= static_cast<double>(classes.pos);
  model.mean_neg /= static_cast<double>(classes.neg);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    if (y[i] > 0) {
      model.var_pos += (X.row(i).transpose() - model.mean_pos).array().square().matrix();
    } else {
      model.var_neg += (X.row(i).transpose() - model.mean_neg).array().square().matrix();
    }
  }
  model.var_pos /= static_cast<double>(classes.pos);
  model.var_neg /= static_cast<double>(classes.neg);
  model.var_pos = model.var_pos.cwiseMax(kGnbVarianceFloor);
  model.var_neg = model.var_neg.cwiseMax(kGnbVarianceFloor);
  const double total = static_cast<double>(classes.pos + classes.neg);
  model.log_prior_pos = std::log(static_cast<double>(classes.pos) / total);
  model.log_prior_neg = std::log(static_cast<double>(classes.neg) / total);
  return model;
}

double GaussianNb::score(const Eigen::VectorXd& x) const {
  double log_pos = log_prior_pos;
  double log_neg = log_prior_neg;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double dp = x[j] - mean_pos[j];
    const double dn = x[j] - mean_neg[j];
    log_pos -= 0.5 * (std::log(2.0 * kPi * var_pos[j]) + dp * dp / var_pos[j]);
    log_neg -= 0.5 * (std::log(2.0 * kPi * var_neg[j]) + dn * dn / var_neg[j]);
  }
  // Posterior P(+1) via a stable logistic of the log-odds.
  const double log_odds = log_pos - log_neg;
  if (log_odds >= 0.0) return 1.0 / (1.0 + std::exp(-log_odds));
  const double e = std::exp(log_odds);
  return e / (1.0 + e);
}

namespace {

struct TreeBuilder {
  const Eigen::MatrixXd& X;
  const std::vector<int>& y;
  int m_features;
  std::mt19937_64& rng;
  RandomForest::Tree& tree;
  std::vector<int> feature_pool;

  TreeBuilder(const Eigen::MatrixXd& X_, const std::vector<int>& y_, int m,
              std::mt19937_64& rng_, RandomForest::Tree& tree_)
      : X(X_), y(y_), m_features(m), rng(rng_), tree(tree_) {
    feature_pool.resize(X.cols());
    std::iota(feature_pool.begin(), feature_pool.end(), 0);
  }

  double positive_fraction(const std::vector<int>& rows) const {
    std::int64_t pos = 0;
    for (int r : rows) {
      if (y[r] > 0) ++pos;
    }
    return static_cast<double>(pos) / static_cast<double>(rows.size());
  }

  int build(std::vector<int>& rows) {
    const int node_id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    const double frac = positive_fraction(rows);
    tree.nodes[node_id].positive_fraction = frac;
    if (rows.size() < 2 || frac == 0.0 || frac == 1.0) return node_id;

    // Sample m candidate features without replacement, then scan them in
    // index order so the best-split tie break is stable.
    const int m = std::min<int>(m_features, static_cast<int>(feature_pool.size()));
    for (int i = 0; i < m; ++i) {
      std::uniform_int_distribution<int> pick(i, static_cast<int>(feature_pool.size()) - 1);
      std::swap(feature_pool[i], feature_pool[pick(rng)]);
    }
    std::vector<int> candidates(feature_pool.begin(), feature_pool.begin() + m);
    std::sort(candidates.begin(), candidates.end());

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_impurity = std::numeric_limits<double>::infinity();
    std::vector<std::pair<double, int>> column(rows.size());
    const double n = static_cast<double>(rows.size());
    std::int64_t total_pos = 0;
    for (int r : rows) {
      if (y[r] > 0) ++total_pos;
    }
    for (int f : candidates) {
      for (size_t i = 0; i < rows.size(); ++i) {
        column[i] = {X(rows[i], f), y[rows[i]]};
      }
      std::sort(column.begin(), column.end());
      std::int64_t left_pos = 0;
      for (size_t i = 0; i + 1 < column.size(); ++i) {
        if (column[i].second > 0) ++left_pos;
        if (column[i].first == column[i + 1].first) continue;
        const double nl = static_cast<double>(i + 1);
        const double nr = n - nl;
        const double pl = static_cast<double>(left_pos) / nl;
        const double pr = static_cast<double>(total_pos - left_pos) / nr;
        const double gini =
            nl * (1.0 - pl * pl - (1.0 - pl) * (1.0 - pl)) +
            nr * (1.0 - pr * pr - (1.0 - pr) * (1.0 - pr));
        if (gini < best_impurity) {
          best_impurity = gini;
          best_feature = f;
          best_threshold = column[i].first + (column[i + 1].first - column[i].first) / 2.0;
        }
      }
    }
    if (best_feature < 0) return node_id;  // all candidate columns constant

    std::vector<int> left_rows, right_rows;
    for (int r : rows) {
      (X(r, best_feature) <= best_threshold ? left_rows : right_rows).push_back(r);
    }
    if (left_rows.empty() || right_rows.empty()) return node_id;
    rows.clear();
    rows.shrink_to_fit();
    tree.nodes[node_id].feature = best_feature;
    tree.nodes[node_id].threshold = best_threshold;
    const int left_id = build(left_rows);
    tree.nodes[node_id].left = left_id;
    const int right_id = build(right_rows);
    tree.nodes[node_id].right = right_id;
    return node_id;
  }
};

}  // namespace

RandomForest train_rf(const Eigen::MatrixXd& X, const std::vector<int>& y, int n_trees,
                      int m_features, std::uint64_t seed) {
  const ClassCounts classes = count_classes(y);
  if (classes.pos == 0 || classes.neg == 0) {
    throw DataError("train_rf: both classes must be present");
  }
  if (m_features < 1 || m_features > X.cols()) {
    throw DataError("train_rf: features per split out of range");
  }
  RandomForest forest;
  forest.trees.resize(n_trees);
  const int n = static_cast<int>(X.rows());
  for (int t = 0; t < n_trees; ++t) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(t)));
    std::vector<int> rows(n);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int i = 0; i < n; ++i) rows[i] = pick(rng);
    TreeBuilder builder(X, y, m_features, rng, forest.trees[t]);
    builder.build(rows);
  }
  return forest;
}

double RandomForest::score(const Eigen::VectorXd& x) const {
  double sum = 0.0;
  for (const Tree& tree : trees) {
    int node = 0;
    while (tree.nodes[node].feature >= 0) {
      node = x[tree.nodes[node].feature] <= tree.nodes[node].threshold
                 ? tree.nodes[node].left
                 : tree.nodes[node].right;
    }
    sum += tree.nodes[node].positive_fraction;
  }
  return sum / static_cast<double>(trees.size());
}

namespace {

// Platt-style SMO over the dual of the soft-margin problem, full kernel
// matrix in memory (training sets here are small).
class SmoSolver {
 public:
  SmoSolver(const Eigen::MatrixXd& X, const std::vector<int>& y, double c, double gamma,
            double tol, std::uint64_t seed)
      : c_(c), tol_(tol), rng_(mix_seed(seed, 0x5107)) {
    const int n = static_cast<int>(X.rows());
    y_.resize(n);
    for (int i = 0; i < n; ++i) y_[i] = y[i] > 0 ? 1.0 : -1.0;
    alpha_.assign(n, 0.0);
    errors_.resize(n);
    for (int i = 0; i < n; ++i) errors_[i] = -y_[i];
    // Squared distances via the norm expansion keep kernel setup O(n^2).
    const Eigen::VectorXd sq = X.rowwise().squaredNorm();
    const Eigen::MatrixXd sq_dist =
        (sq.replicate(1, n) + sq.transpose().replicate(n, 1)) - 2.0 * (X * X.transpose());
    kernel_ = (-gamma * sq_dist.array()).exp().matrix();
  }

  bool solve(int max_epochs) {
    int epochs = 0;
    bool examine_all = true;
    int num_changed = 0;
    while (num_changed > 0 || examine_all) {
      if (++epochs > max_epochs) return false;
      num_changed = 0;
      const int n = static_cast<int>(alpha_.size());
      if (examine_all) {
        for (int i = 0; i < n; ++i) num_changed += examine(i);
      } else {
        for (int i = 0; i < n; ++i) {
          if (alpha_[i] > 0.0 && alpha_[i] < c_) num_changed += examine(i);
        }
      }
      if (examine_all) {
        examine_all = false;
      } else if (num_changed == 0) {
        examine_all = true;
      }
    }
    return true;
  }

  const std::vector<double>& alpha() const { return alpha_; }
  double bias() const { return b_; }
  double y(int i) const { return y_[i]; }

 private:
  int examine(int i2) {
    const double y2 = y_[i2];
    const double a2 = alpha_[i2];
    const double e2 = errors_[i2];
    const double r2 = e2 * y2;
    if (!((r2 < -tol_ && a2 < c_) || (r2 > tol_ && a2 > 0.0))) return 0;

    const int n = static_cast<int>(alpha_.size());
    // Best |E1 - E2| over non-bound candidates first.
    int best = -1;
    double best_gap = -1.0;
    for (int i = 0; i < n; ++i) {
      if (alpha_[i] > 0.0 && alpha_[i] < c_) {
        const double gap = std::fabs(errors_[i] - e2);
        if (gap > best_gap) {
          best_gap = gap;
          best = i;
        }
      }
    }
    if (best >= 0 && take_step(best, i2)) return 1;

    std::uniform_int_distribution<int> start_dist(0, n - 1);
    const int start1 = start_dist(rng_);
    for (int k = 0; k < n; ++k) {
      const int i1 = (start1 + k) % n;
      if (alpha_[i1] > 0.0 && alpha_[i1] < c_ && take_step(i1, i2)) return 1;
    }
    const int start2 = start_dist(rng_);
    for (int k = 0; k < n; ++k) {
      const int i1 = (start2 + k) % n;
      if (take_step(i1, i2)) return 1;
    }
    return 0;
  }

  bool take_step(int i1, int i2) {
    if (i1 == i2) return false;
    const double a1 = alpha_[i1], a2 = alpha_[i2];
    const double y1 = y_[i1], y2 = y_[i2];
    const double e1 = errors_[i1], e2 = errors_[i2];
    const double s = y1 * y2;
    double lo, hi;
    if (y1 != y2) {
      lo = std::max(0.0, a2 - a1);
      hi = std::min(c_, c_ + a2 - a1);
    } else {
      lo = std::max(0.0, a1 + a2 - c_);
      hi = std::min(c_, a1 + a2);
    }
    if (lo >= hi) return false;

    const double k11 = kernel_(i1, i1), k22 = kernel_(i2, i2), k12 = kernel_(i1, i2);
    const double eta = k11 + k22 - 2.0 * k12;
    double a2_new;
    if (eta > 0.0) {
      a2_new = a2 + y2 * (e1 - e2) / eta;
      a2_new = std::clamp(a2_new, lo, hi);
    } else {
      // Objective is linear along the constraint segment; move to the
      // better endpoint.
      const double slope = y2 * (e1 - e2);
      if (slope > 1e-12) {
        a2_new = hi;
      } else if (slope < -1e-12) {
        a2_new = lo;
      } else {
        return false;
      }
    }
    if (std::fabs(a2_new - a2) < 1e-12 * (a2_new + a2 + 1e-12)) return false;
    const double a1_new = a1 + s * (a2 - a2_new);

    const double d1 = y1 * (a1_new - a1);
    const double d2 = y2 * (a2_new - a2);
    const double b1 = e1 + d1 * k11 + d2 * k12 + b_;
    const double b2 = e2 + d1 * k12 + d2 * k22 + b_;
    double b_new;
    if (a1_new > 0.0 && a1_new < c_) {
      b_new = b1;
    } else if (a2_new > 0.0 && a2_new < c_) {
      b_new = b2;
    } else {
      b_new = (b1 + b2) / 2.0;
    }

    const int n = static_cast<int>(alpha_.size());
    for (int k = 0; k < n; ++k) {
      errors_[k] += d1 * kernel_(i1, k) + d2 * kernel_(i2, k) - (b_new - b_);
    }
    alpha_[i1] = a1_new;
    alpha_[i2] = a2_new;
    b_ = b_new;
    return true;
  }

  double c_;
  double tol_;
  std::mt19937_64 rng_;
  std::vector<double> y_;
  std::vector<double> alpha_;
  std::vector<double> errors_;
  Eigen::MatrixXd kernel_;
  double b_ = 0.0;
};

}  // namespace

SvmModel train_svm(const Eigen::MatrixXd& X, const std::vector<int>& y,
                   const SvmParams& params) {
  const ClassCounts classes = count_classes(y);
  if (classes.pos == 0 || classes.neg == 0) {
    throw DataError("train_svm: both classes must be present");
  }
  double gamma = params.gamma;
  if (gamma <= 0.0) {
    const double mean = X.mean();
    const double pooled_var = (X.array() - mean).square().mean();
    gamma = 1.0 / (static_cast<double>(X.cols()) * std::max(pooled_var, 1e-12));
  }
  SmoSolver solver(X, y, params.c, gamma, params.kkt_tol, params.seed);
  if (!solver.solve(params.max_epochs)) {
    throw DataError("train_svm: no convergence within the iteration cap");
  }

  std::vector<int> support_rows;
  for (size_t i = 0; i < y.size(); ++i) {
    if (solver.alpha()[i] > 0.0) support_rows.push_back(static_cast<int>(i));
  }
  SvmModel model;
  model.gamma = gamma;
  model.bias = solver.bias();
  model.support.resize(static_cast<Eigen::Index>(support_rows.size()), X.cols());
  model.alpha_y.resize(static_cast<Eigen::Index>(support_rows.size()));
  for (size_t i = 0; i < support_rows.size(); ++i) {
    model.support.row(static_cast<Eigen::Index>(i)) = X.row(support_rows[i]);
    model.alpha_y[static_cast<Eigen::Index>(i)] =
        solver.alpha()[support_rows[i]] * solver.y(support_rows[i]);
  }
  return model;
}

double SvmModel::score(const Eigen::VectorXd& x) const {
  if (support.rows() == 0) return -bias;
  const Eigen::VectorXd sq =
      (support.rowwise() - x.transpose()).rowwise().squaredNorm();
  return ((-gamma * sq.array()).exp() * alpha_y.array()).sum() - bias;
}

ModelKind parse_model_kind(const std::string& name) {
  if (name == "gnb") return ModelKind::gnb;
  if (name == "rf") return ModelKind::rf;
  if (name == "svm") return ModelKind::svm;
  throw DataError("unknown model '" + name + "' (expected gnb, rf or svm)");
}

FeatureSet parse_feature_set(const std::string& name) {
  if (name == "G") return FeatureSet::G;
  if (name == "M") return FeatureSet::M;
  if (name == "GM") return FeatureSet::GM;
  throw DataError("unknown feature set '" + name + "' (expected G, M or GM)");
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::gnb: return "gnb";
    case ModelKind::rf: return "rf";
    case ModelKind::svm: return "svm";
  }
  return "?";
}

std::string to_string(FeatureSet set) {
  switch (set) {
    case FeatureSet::G: return "G";
    case FeatureSet::M: return "M";
    case FeatureSet::GM: return "GM";
  }
  return "?";
}

std::vector<std::string> feature_set_columns(FeatureSet set, bool sponsor_present) {
  std::vector<std::string> geographic = {"stadium_distance", "jensen_quality",
                                         "nearby_place_entropy"};
  if (sponsor_present) geographic.push_back("sponsor_distance");
  const std::vector<std::string> mobility = {"popularity", "entertainment_flow",
                                             "social_area"};
  switch (set) {
    case FeatureSet::G:
      return geographic;
    case FeatureSet::M:
      return mobility;
    case FeatureSet::GM: {
      auto columns = geographic;
      columns.insert(columns.end(), mobility.begin(), mobility.end());
      return columns;
    }
  }
  return {};
}

int rf_features_per_split(FeatureSet set) { return set == FeatureSet::GM ? 4 : 3; }

namespace {

void parallel_for(int n, const std::function<void(int)>& body) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = std::min<unsigned>(hw, static_cast<unsigned>(n));
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> threads;
  std::atomic<int> next{0};
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&]() {
      while (true) {
        const int i = next.fetch_add(1);
        if (i >= n) return;
        body(i);
      }
    });
  }
  for (auto& t : threads) t.join();
}

}  // namespace

EvalReport loocv(const LabeledDataset& dataset, ModelKind kind, FeatureSet set,
                 std::uint64_t seed) {
  const auto& instances = dataset.instances;
  const int n = static_cast<int>(instances.size());
  if (n < 3) throw DataError("loocv: need at least 3 instances");
  const bool sponsor_present =
      std::find(dataset.absent_columns.begin(), dataset.absent_columns.end(),
                "sponsor_distance") == dataset.absent_columns.end();
  const auto columns = feature_set_columns(set, sponsor_present);
  const Eigen::Index d = static_cast<Eigen::Index>(columns.size());

  Eigen::MatrixXd X(n, d);
  std::vector<int> y(n);
  for (int i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const auto value = feature_value(instances[i].features, columns[j]);
      if (!value) {
        throw DataError("loocv: feature '" + columns[j] + "' missing for venue '" +
                        instances[i].features.venue_id + "'");
      }
      X(i, j) = *value;
    }
    y[i] = instances[i].label;
  }
  {
    const ClassCounts classes = count_classes(y);
    if (classes.pos == 0 || classes.neg == 0) {
      throw DataError("loocv: both classes must be present");
    }
  }

  std::vector<double> scores(n, 0.0);
  std::vector<char> skipped(n, 0);
  parallel_for(n, [&](int i) {
    Eigen::MatrixXd train(n - 1, d);
    std::vector<int> train_y;
    train_y.reserve(n - 1);
    Eigen::Index row = 0;
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      train.row(row++) = X.row(k);
      train_y.push_back(y[k]);
    }
    const ClassCounts classes = count_classes(train_y);
    if (classes.pos == 0 || classes.neg == 0) {
      skipped[i] = 1;
      return;
    }
    Standardizer scaler;
    scaler.fit(train);
    const Eigen::MatrixXd train_s = scaler.transform(train);
    const Eigen::VectorXd probe = scaler.transform_row(X.row(i).transpose());
    try {
      switch (kind) {
        case ModelKind::gnb:
          scores[i] = train_gnb(train_s, train_y).score(probe);
          break;
        case ModelKind::rf: {
          const int m = std::min<int>(rf_features_per_split(set), static_cast<int>(d));
          scores[i] =
              train_rf(train_s, train_y, 64, m, mix_seed(seed, static_cast<std::uint64_t>(i)))
                  .score(probe);
          break;
        }
        case ModelKind::svm: {
          SvmParams params;
          params.seed = mix_seed(seed, static_cast<std::uint64_t>(i));
          scores[i] = train_svm(train_s, train_y, params).score(probe);
          break;
        }
      }
    } catch (const std::exception&) {
      // A fold that cannot train (e.g. SVM non-convergence) is skipped and
      // counted, like a single-class fold.
      skipped[i] = 1;
    }
  });

  const double threshold = kind == ModelKind::svm ? 0.0 : 0.5;
  std::vector<ScoredItem> pooled;
  std::int64_t tp = 0, fp = 0, fn = 0;
  for (int i = 0; i < n; ++i) {
    if (skipped[i]) continue;
    pooled.push_back(ScoredItem{instances[i].features.venue_id, scores[i], y[i]});
    const bool predicted_positive = scores[i] > threshold;
    if (predicted_positive && y[i] > 0) ++tp;
    if (predicted_positive && y[i] < 0) ++fp;
    if (!predicted_positive && y[i] > 0) ++fn;
  }
  if (pooled.size() < 2) throw DataError("loocv: too few scored folds");

  EvalReport report;
  report.folds = n;
  report.skipped_folds = static_cast<int>(std::count(skipped.begin(), skipped.end(), 1));
  report.used_features = columns;
  // Skipped folds can leave the pooled scores single-class; the rank metrics
  // are then undefined and stay NaN/empty.
  bool pooled_pos = false, pooled_neg = false;
  for (const auto& item : pooled) (item.label > 0 ? pooled_pos : pooled_neg) = true;
  if (pooled_pos && pooled_neg) {
    report.auc = roc_auc(pooled);
    report.roc_points = roc_points(pooled);
  }
  report.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  report.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;

  // Per-k curve over the pooled ranking, mirroring the unsupervised sweep.
  std::sort(pooled.begin(), pooled.end(), [](const ScoredItem& a, const ScoredItem& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  });
  std::int64_t total_pos = tp + fn;
  std::int64_t running_tp = 0;
  for (size_t k = 1; k <= pooled.size(); ++k) {
    if (pooled[k - 1].label > 0) ++running_tp;
    report.pr_curve.push_back(PrPoint{
        static_cast<int>(k), static_cast<double>(running_tp) / static_cast<double>(k),
        total_pos > 0 ? static_cast<double>(running_tp) / static_cast<double>(total_pos)
                      : 0.0});
  }
  return report;
}

}  // namespace eventlens
