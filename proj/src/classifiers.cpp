#include "pxc/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pxc/errors.hpp"
#include "pxc/rng.hpp"

namespace pxc {

const char* classifier_name(ClassifierKind k) {
    switch (k) {
        case ClassifierKind::Logit: return "logit";
        case ClassifierKind::DTree: return "dtree";
        case ClassifierKind::RForest: return "rforest";
        case ClassifierKind::Constant: return "constant";
    }
    return "?";
}

ClassifierKind classifier_from_name(const std::string& name) {
    if (name == "logit") return ClassifierKind::Logit;
    if (name == "dtree") return ClassifierKind::DTree;
    if (name == "rforest") return ClassifierKind::RForest;
    if (name == "constant") return ClassifierKind::Constant;
    fail(Errc::ConfigError, "unknown classifier: " + name);
}

TrainSet make_train_set(FeatureMatrix X) {
    TrainSet t;
    t.y.reserve(X.rows);
    for (const auto& m : X.meta) t.y.push_back(m.label);
    t.X = std::move(X);
    return t;
}

TrainedClassifier TrainedClassifier::constant(double p) {
    TrainedClassifier c;
    c.kind = ClassifierKind::Constant;
    c.constant_p = p;
    return c;
}

namespace {

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + exp(m)) - y*m, stably
double logistic_loss_term(double margin, int y) {
    double softplus = margin > 0 ? margin + std::log1p(std::exp(-margin)) : std::log1p(std::exp(margin));
    return softplus - y * margin;
}

}  // namespace

double logit_objective(const FeatureMatrix& X, const std::vector<int>& y,
                       const std::vector<double>& w, double b, double c,
                       std::vector<double>* grad_w, double* grad_b) {
    const double n = static_cast<double>(X.rows);
    double loss = 0.0;
    if (grad_w) {
        grad_w->assign(X.width, 0.0);
        *grad_b = 0.0;
    }
    for (size_t r = 0; r < X.rows; ++r) {
        auto row = X.row(r);
        double margin = b;
        for (size_t j = 0; j < X.width; ++j) margin += w[j] * row[j];
        loss += logistic_loss_term(margin, y[r]);
        if (grad_w) {
            double resid = sigmoid(margin) - y[r];
            for (size_t j = 0; j < X.width; ++j) (*grad_w)[j] += resid * row[j];
            *grad_b += resid;
        }
    }
    loss /= n;
    double reg = 0.0;
    for (double v : w) reg += v * v;
    loss += reg / (2.0 * c * n);
    if (grad_w) {
        for (size_t j = 0; j < X.width; ++j) (*grad_w)[j] = (*grad_w)[j] / n + w[j] / (c * n);
        *grad_b /= n;
    }
    return loss;
}

TrainedClassifier train_logit(const TrainSet& train, double c, int max_iter, uint64_t seed) {
    (void)seed;  // deterministic zero init; kept for interface symmetry
    if (c <= 0) fail(Errc::InvalidParams, "C must be positive");
    if (train.X.rows == 0) fail(Errc::InvalidParams, "empty training set");

    double mean_y = std::accumulate(train.y.begin(), train.y.end(), 0.0) / train.y.size();
    if (mean_y == 0.0 || mean_y == 1.0) return TrainedClassifier::constant(mean_y);

    std::vector<double> w(train.X.width, 0.0);
    double b = 0.0;
    std::vector<double> grad(train.X.width);
    double grad_b = 0.0;
    double step = 1.0;

    double f = logit_objective(train.X, train.y, w, b, c, &grad, &grad_b);
    for (int iter = 0; iter < max_iter; ++iter) {
        double g_inf = std::abs(grad_b);
        double g_sq = grad_b * grad_b;
        for (double g : grad) {
            g_inf = std::max(g_inf, std::abs(g));
            g_sq += g * g;
        }
        if (g_inf < 1e-6) break;

        // Armijo backtracking along the negative gradient
        step *= 2.0;
        std::vector<double> w_try(w.size());
        double b_try = b;
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            for (size_t j = 0; j < w.size(); ++j) w_try[j] = w[j] - step * grad[j];
            b_try = b - step * grad_b;
            double f_try = logit_objective(train.X, train.y, w_try, b_try, c, nullptr, nullptr);
            if (f_try <= f - 1e-4 * step * g_sq) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
        w = std::move(w_try);
        b = b_try;
        f = logit_objective(train.X, train.y, w, b, c, &grad, &grad_b);
    }

    TrainedClassifier clf;
    clf.kind = ClassifierKind::Logit;
    clf.width = train.X.width;
    clf.weights = std::move(w);
    clf.bias = b;
    return clf;
}

namespace {

struct CartBuilder {
    const FeatureMatrix& X;
    const std::vector<int>& y;
    int max_depth;
    int min_leaf;
    double subsample_frac;  // feature fraction; 1.0 = consider all
    Rng* rng;               // only consulted when subsample_frac < 1
    std::vector<TreeNode> nodes;
    std::vector<size_t> feature_scratch;

    // indices may contain repetitions (bootstrap)
    int build(std::vector<size_t>& idx, int depth) {
        long n = static_cast<long>(idx.size());
        long pos = 0;
        for (size_t i : idx) pos += y[i];
        double score = static_cast<double>(pos) / static_cast<double>(n);

        bool pure = pos == 0 || pos == n;
        if (pure || depth >= max_depth || n < 2 * min_leaf) return make_leaf(score);

        int best_feature = -1;
        double best_threshold = 0.0;
        double best_impurity = std::numeric_limits<double>::infinity();

        size_t width = X.width;
        size_t n_consider = width;
        const size_t* features = nullptr;
        if (subsample_frac < 1.0) {
            n_consider = std::max<size_t>(
                1, static_cast<size_t>(std::ceil(subsample_frac * static_cast<double>(width) - 1e-12)));
            sample_features(n_consider);
            features = feature_scratch.data();
        }

        std::vector<std::pair<double, int>> vals(idx.size());
        for (size_t fi = 0; fi < n_consider; ++fi) {
            size_t f = features ? features[fi] : fi;
            for (size_t i = 0; i < idx.size(); ++i) vals[i] = {X.at(idx[i], f), y[idx[i]]};
            std::sort(vals.begin(), vals.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });

            long nl = 0, posl = 0;
            for (size_t i = 0; i + 1 < vals.size(); ++i) {
                ++nl;
                posl += vals[i].second;
                if (vals[i].first == vals[i + 1].first) continue;
                long nr = n - nl;
                if (nl < min_leaf || nr < min_leaf) continue;
                long posr = pos - posl;
                double pl = static_cast<double>(posl) / nl;
                double pr = static_cast<double>(posr) / nr;
                double gini = (nl * 2.0 * pl * (1 - pl) + nr * 2.0 * pr * (1 - pr)) / n;
                if (gini < best_impurity) {
                    best_impurity = gini;
                    best_feature = static_cast<int>(f);
                    best_threshold = vals[i].first + 0.5 * (vals[i + 1].first - vals[i].first);
                }
            }
        }
        if (best_feature < 0) return make_leaf(score);  // no split available

        std::vector<size_t> left, right;
        for (size_t i : idx) {
            if (X.at(i, static_cast<size_t>(best_feature)) <= best_threshold) left.push_back(i);
            else right.push_back(i);
        }
        idx.clear();
        idx.shrink_to_fit();

        int node = static_cast<int>(nodes.size());
        nodes.push_back({best_feature, best_threshold, -1, -1, score});
        int l = build(left, depth + 1);
        int r = build(right, depth + 1);
        nodes[static_cast<size_t>(node)].left = l;
        nodes[static_cast<size_t>(node)].right = r;
        return node;
    }

    int make_leaf(double score) {
        nodes.push_back({-1, 0.0, -1, -1, score});
        return static_cast<int>(nodes.size()) - 1;
    }

    // partial Fisher-Yates, then sorted so tie-breaking stays by feature index
    void sample_features(size_t m) {
        size_t width = X.width;
        if (feature_scratch.size() != width) {
            feature_scratch.resize(width);
            std::iota(feature_scratch.begin(), feature_scratch.end(), 0);
        }
        for (size_t i = 0; i < m; ++i) {
            size_t j = static_cast<size_t>(
                rng->uniform_int(static_cast<long>(i), static_cast<long>(width) - 1));
            std::swap(feature_scratch[i], feature_scratch[j]);
        }
        std::sort(feature_scratch.begin(), feature_scratch.begin() + static_cast<long>(m));
    }
};

std::vector<TreeNode> build_tree(const FeatureMatrix& X, const std::vector<int>& y,
                                 std::vector<size_t> idx, int max_depth, int min_leaf,
                                 double frac, Rng* rng) {
    CartBuilder builder{X, y, max_depth, min_leaf, frac, rng, {}, {}};
    builder.build(idx, 0);
    return std::move(builder.nodes);
}

double tree_score(const std::vector<TreeNode>& nodes, std::span<const double> row) {
    int at = 0;
    while (!nodes[static_cast<size_t>(at)].is_leaf()) {
        const TreeNode& nd = nodes[static_cast<size_t>(at)];
        at = row[static_cast<size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right;
    }
    return nodes[static_cast<size_t>(at)].score;
}

}  // namespace

TrainedClassifier train_dtree(const TrainSet& train, int max_depth, int min_leaf, uint64_t seed) {
    (void)seed;
    if (max_depth < 1) fail(Errc::InvalidParams, "max_depth must be >= 1");
    if (train.X.rows == 0) fail(Errc::InvalidParams, "empty training set");
    std::vector<size_t> idx(train.X.rows);
    std::iota(idx.begin(), idx.end(), 0);

    TrainedClassifier clf;
    clf.kind = ClassifierKind::DTree;
    clf.width = train.X.width;
    clf.nodes = build_tree(train.X, train.y, std::move(idx), max_depth, min_leaf, 1.0, nullptr);
    return clf;
}

TrainedClassifier train_rforest(const TrainSet& train, const ForestOptions& opts, uint64_t seed) {
    if (opts.max_features_frac <= 0.0 || opts.max_features_frac > 1.0)
        fail(Errc::InvalidParams, "max_features_frac must be in (0, 1]");
    if (opts.n_estimators < 1) fail(Errc::InvalidParams, "n_estimators must be >= 1");
    if (train.X.rows == 0) fail(Errc::InvalidParams, "empty training set");

    TrainedClassifier clf;
    clf.kind = ClassifierKind::RForest;
    clf.width = train.X.width;
    clf.forest.reserve(static_cast<size_t>(opts.n_estimators));
    const size_t n = train.X.rows;
    for (int t = 0; t < opts.n_estimators; ++t) {
        Rng rng(derive_seed(seed, 0x74726565u, static_cast<uint64_t>(t)));  // "tree"
        std::vector<size_t> idx(n);
        if (opts.bootstrap) {
            for (size_t i = 0; i < n; ++i)
                idx[i] = static_cast<size_t>(rng.uniform_int(0, static_cast<long>(n) - 1));
        } else {
            std::iota(idx.begin(), idx.end(), 0);
        }
        clf.forest.push_back(build_tree(train.X, train.y, std::move(idx),
                                        std::numeric_limits<int>::max(), opts.min_leaf,
                                        opts.max_features_frac, &rng));
    }
    return clf;
}

double predict_proba(const TrainedClassifier& clf, std::span<const double> row) {
    switch (clf.kind) {
        case ClassifierKind::Constant:
            return clf.constant_p;
        case ClassifierKind::Logit: {
            if (row.size() != clf.weights.size())
                fail(Errc::WidthMismatch, "expected " + std::to_string(clf.weights.size()) +
                                              " features, got " + std::to_string(row.size()));
            double z = clf.bias;
            for (size_t j = 0; j < row.size(); ++j) z += clf.weights[j] * row[j];
            return sigmoid(z);
        }
        case ClassifierKind::DTree:
            if (row.size() != clf.width)
                fail(Errc::WidthMismatch, "expected " + std::to_string(clf.width) +
                                              " features, got " + std::to_string(row.size()));
            return tree_score(clf.nodes, row);
        case ClassifierKind::RForest: {
            if (row.size() != clf.width)
                fail(Errc::WidthMismatch, "expected " + std::to_string(clf.width) +
                                              " features, got " + std::to_string(row.size()));
            double sum = 0;
            for (const auto& tree : clf.forest) sum += tree_score(tree, row);
            return sum / static_cast<double>(clf.forest.size());
        }
    }
    fail(Errc::Internal, "unhandled classifier kind");
}

std::vector<double> predict_proba(const TrainedClassifier& clf, const FeatureMatrix& X) {
    std::vector<double> out;
    out.reserve(X.rows);
    for (size_t r = 0; r < X.rows; ++r) out.push_back(predict_proba(clf, X.row(r)));
    return out;
}

HyperParams sample_params(const SearchSpace& space, const ParamNeeds& needs, const HyperParams& base,
                          uint64_t seed, int trial) {
    Rng rng(derive_seed(seed, 0x7472696cu, static_cast<uint64_t>(trial)));  // "tril"
    HyperParams p = base;
    if (needs.logit_c)
        p.logit_c = std::pow(2.0, static_cast<double>(rng.uniform_int(space.logit_c_exp_lo,
                                                                      space.logit_c_exp_hi)));
    if (needs.dtree_depth)
        p.dtree_max_depth = static_cast<int>(rng.uniform_int(space.dtree_depth_lo, space.dtree_depth_hi));
    if (needs.rf_frac) p.rf_max_features = rng.uniform(space.rf_frac_lo, space.rf_frac_hi);
    if (needs.kmeans_k) p.kmeans_k = static_cast<int>(rng.uniform_int(space.kmeans_lo, space.kmeans_hi));
    if (needs.knn_k) p.knn_k = static_cast<int>(rng.uniform_int(space.knn_lo, space.knn_hi));
    return p;
}

std::vector<int> case_grouped_folds(const std::vector<PrefixInstance>& instances, int n_folds,
                                    uint64_t seed) {
    std::vector<std::string> cases;
    std::map<std::string, int> fold_of;
    for (const auto& inst : instances)
        if (fold_of.emplace(inst.case_id(), -1).second) cases.push_back(inst.case_id());

    Rng rng(derive_seed(seed, 0x666f6c64u));  // "fold"
    for (size_t i = cases.size(); i > 1; --i)
        std::swap(cases[i - 1], cases[static_cast<size_t>(rng.uniform_int(0, static_cast<long>(i) - 1))]);
    for (size_t i = 0; i < cases.size(); ++i) fold_of[cases[i]] = static_cast<int>(i % static_cast<size_t>(n_folds));

    std::vector<int> out;
    out.reserve(instances.size());
    for (const auto& inst : instances) out.push_back(fold_of[inst.case_id()]);
    return out;
}

std::vector<int> prefix_level_folds(size_t n_instances, int n_folds, uint64_t seed) {
    std::vector<size_t> order(n_instances);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(derive_seed(seed, 0x666f6c64u));
    for (size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[static_cast<size_t>(rng.uniform_int(0, static_cast<long>(i) - 1))]);
    std::vector<int> out(n_instances);
    for (size_t i = 0; i < order.size(); ++i) out[order[i]] = static_cast<int>(i % static_cast<size_t>(n_folds));
    return out;
}

HyperParams random_search(const SearchSpace& space, const ParamNeeds& needs, const HyperParams& base,
                          int n_trials, uint64_t seed,
                          const std::function<double(const HyperParams&)>& evaluate) {
    if (n_trials < 1) fail(Errc::InvalidParams, "n_trials must be >= 1");
    HyperParams best = base;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int t = 0; t < n_trials; ++t) {
        HyperParams p = sample_params(space, needs, base, seed, t);
        double score = evaluate(p);
        if (std::isfinite(score) && score > best_score) {  // ties keep the earliest trial
            best_score = score;
            best = p;
        }
    }
    return best;
}

}  // namespace pxc
