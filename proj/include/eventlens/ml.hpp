#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "eventlens/returns.hpp"

namespace eventlens {

enum class Direction { ascending, descending };

// Distance features rank ascending (small is promising); everything else
// descending.
Direction feature_direction(const std::string& feature_name);

struct ScoredItem {
  std::string id;
  double score = 0.0;
  int label = 0;  // +1 / -1
};

// Mann-Whitney AUC: P(score_pos > score_neg) + 0.5 P(tie), computed from
// integer pair counts. Throws DataError when only one class is present.
double roc_auc(const std::vector<ScoredItem>& items);

// Threshold-swept ROC curve from (0,0) to (1,1), tie groups collapsed.
std::vector<std::pair<double, double>> roc_points(const std::vector<ScoredItem>& items);

struct PrPoint {
  int k = 0;
  double precision = 0.0;
  double recall = 0.0;
};

struct EvalReport {
  double auc = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::pair<double, double>> roc_points;
  std::vector<PrPoint> pr_curve;
  // Pooled values at the default decision threshold (probability 0.5 or
  // decision value 0); NaN for rank sweeps, which have no fixed threshold.
  double precision = std::numeric_limits<double>::quiet_NaN();
  double recall = std::numeric_limits<double>::quiet_NaN();
  int folds = 0;
  int skipped_folds = 0;
  std::vector<std::string> used_features;
};

// Unsupervised single-feature evaluation: rank every candidate by the value
// (directionally signed), predict the top k positive for k = 1..n, record
// precision/recall per k and the rank-based AUC. Ties are broken by id so
// the curves are deterministic.
EvalReport rank_sweep(const std::vector<std::string>& ids,
                      const std::vector<double>& values, const std::vector<int>& labels,
                      Direction direction);

// Z-score parameters fitted on a training matrix; near-constant columns get
// scale 1 so transformed values stay finite.
struct Standardizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;
  void fit(const Eigen::MatrixXd& X);
  Eigen::MatrixXd transform(const Eigen::MatrixXd& X) const;
  Eigen::VectorXd transform_row(const Eigen::VectorXd& x) const;
};

// Gaussian naive Bayes with per-class feature means/variances (variances
// floored at 1e-9) and class priors; scores are posterior P(+1).
struct GaussianNb {
  Eigen::VectorXd mean_pos, var_pos, mean_neg, var_neg;
  double log_prior_pos = 0.0, log_prior_neg = 0.0;
  double score(const Eigen::VectorXd& x) const;
};
GaussianNb train_gnb(const Eigen::MatrixXd& X, const std::vector<int>& y);

// Bagged CART trees, Gini impurity, grown until pure or down to single
// samples, m random candidate features per node. Scores average the leaf
// positive fractions (leaves are pure whenever a split exists, so this
// equals the fraction of trees voting +1 except in no-split degeneracies).
struct RandomForest {
  struct Node {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double positive_fraction = 0.0;
  };
  struct Tree {
    std::vector<Node> nodes;
  };
  std::vector<Tree> trees;
  double score(const Eigen::VectorXd& x) const;
};
RandomForest train_rf(const Eigen::MatrixXd& X, const std::vector<int>& y, int n_trees,
                      int m_features, std::uint64_t seed);

// Soft-margin RBF SVM trained with sequential minimal optimization. Expects
// standardized features; gamma defaults to 1 / (d * pooled variance). The
// score is the signed decision value.
struct SvmParams {
  double c = 1.0;
  double gamma = 0.0;  // <= 0 selects 1 / (d * pooled variance)
  double kkt_tol = 1e-3;
  int max_epochs = 4000;
  std::uint64_t seed = 0;
};
struct SvmModel {
  Eigen::MatrixXd support;   // support vectors, one per row
  Eigen::VectorXd alpha_y;   // alpha_i * y_i per support vector
  double bias = 0.0;
  double gamma = 0.0;
  double score(const Eigen::VectorXd& x) const;
};
SvmModel train_svm(const Eigen::MatrixXd& X, const std::vector<int>& y,
                   const SvmParams& params = {});

enum class ModelKind { gnb, rf, svm };
enum class FeatureSet { G, M, GM };

ModelKind parse_model_kind(const std::string& name);
FeatureSet parse_feature_set(const std::string& name);
std::string to_string(ModelKind kind);
std::string to_string(FeatureSet set);

// Column names per set. The bottom geographic feature (olympic_distance) is
// excluded everywhere; a globally absent sponsor column is dropped.
std::vector<std::string> feature_set_columns(FeatureSet set, bool sponsor_present);

// Random features sampled per split: 4 on the mixed set, 3 otherwise.
int rf_features_per_split(FeatureSet set);

// Leave-one-out cross validation: per fold, refit the standardizer and the
// model on the other n-1 instances and score the held-out one; pool all
// scores for AUC/ROC and precision/recall at the default threshold. Folds
// whose training set degenerates to one class are skipped and counted.
EvalReport loocv(const LabeledDataset& dataset, ModelKind kind, FeatureSet set,
                 std::uint64_t seed);

}  // namespace eventlens
