#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pxc/encoding.hpp"

namespace pxc {

enum class ClassifierKind { Logit, DTree, RForest, Constant };

const char* classifier_name(ClassifierKind k);
ClassifierKind classifier_from_name(const std::string& name);

struct TrainSet {
    FeatureMatrix X;
    std::vector<int> y;
};

TrainSet make_train_set(FeatureMatrix X);  // labels taken from row meta

struct TreeNode {
    int feature = -1;  // -1 for leaves
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double score = 0.0;  // leaf: positive fraction

    bool is_leaf() const { return feature < 0; }
};

struct TrainedClassifier {
    ClassifierKind kind = ClassifierKind::Constant;
    size_t width = 0;

    // logit
    std::vector<double> weights;
    double bias = 0.0;

    std::vector<TreeNode> nodes;                // dtree
    std::vector<std::vector<TreeNode>> forest;  // rforest

    double constant_p = 0.5;

    static TrainedClassifier constant(double p);
};

/// Full-batch gradient descent with Armijo backtracking on
///   mean logistic loss + ||w||^2 / (2 C n).
/// Expects standardized features. Single-class input degenerates to a
/// constant classifier at the class ratio.
TrainedClassifier train_logit(const TrainSet& train, double c, int max_iter = 1000,
                              uint64_t seed = 0);

/// Mean regularized logistic objective and its gradient (d/dw, d/db) at (w, b).
double logit_objective(const FeatureMatrix& X, const std::vector<int>& y,
                       const std::vector<double>& w, double b, double c,
                       std::vector<double>* grad_w = nullptr, double* grad_b = nullptr);

/// CART with Gini impurity. Numeric thresholds at midpoints between sorted
/// distinct values; ties broken toward the lowest feature index, then the
/// lowest threshold. Leaves score the positive fraction.
TrainedClassifier train_dtree(const TrainSet& train, int max_depth, int min_leaf = 1,
                              uint64_t seed = 0);

struct ForestOptions {
    int n_estimators = 100;
    double max_features_frac = 1.0;
    int min_leaf = 1;
    bool bootstrap = true;  // test hook
};

/// Fully grown trees on bootstrap samples; each split draws
/// ceil(frac * width) candidate features from a per-tree seeded stream.
TrainedClassifier train_rforest(const TrainSet& train, const ForestOptions& opts, uint64_t seed);

double predict_proba(const TrainedClassifier& clf, std::span<const double> row);
std::vector<double> predict_proba(const TrainedClassifier& clf, const FeatureMatrix& X);

// ---- hyperparameter search ----

/// Sampling bounds for seeded uniform random search.
struct SearchSpace {
    int logit_c_exp_lo = -15, logit_c_exp_hi = 15;  // C = 2^x
    int dtree_depth_lo = 4, dtree_depth_hi = 30;
    double rf_frac_lo = 0.0, rf_frac_hi = 1.0;
    int kmeans_lo = 2, kmeans_hi = 50;
    int knn_lo = 2, knn_hi = 50;
};

struct HyperParams {
    double logit_c = 1.0;
    int dtree_max_depth = 10;
    double rf_max_features = 1.0;
    int n_estimators = 100;
    int kmeans_k = 5;
    int knn_k = 30;
};

/// Which parameters a configuration actually tunes.
struct ParamNeeds {
    bool logit_c = false;
    bool dtree_depth = false;
    bool rf_frac = false;
    bool kmeans_k = false;
    bool knn_k = false;
};

/// Draws the needed parameters in a fixed order (classifier first, then
/// bucketing) from the trial's seed substream.
HyperParams sample_params(const SearchSpace& space, const ParamNeeds& needs,
                          const HyperParams& base, uint64_t seed, int trial);

/// Case-grouped fold assignment: all prefixes of a case share a fold.
std::vector<int> case_grouped_folds(const std::vector<PrefixInstance>& instances, int n_folds,
                                    uint64_t seed);
/// Prefix-level folds (comparison flag; leaks prefixes of one case across folds).
std::vector<int> prefix_level_folds(size_t n_instances, int n_folds, uint64_t seed);

/// Seeded uniform random search: n_trials draws, each scored by `evaluate`
/// (mean CV AUC); the best score wins, ties to the earliest trial.
HyperParams random_search(const SearchSpace& space, const ParamNeeds& needs, const HyperParams& base,
                          int n_trials, uint64_t seed,
                          const std::function<double(const HyperParams&)>& evaluate);

}  // namespace pxc
