#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "pxc/bucketing.hpp"
#include "pxc/classifiers.hpp"
#include "pxc/encoding.hpp"
#include "pxc/labeling.hpp"

namespace pxc {

struct PipelineConfig {
    BucketMethod bucketing = BucketMethod::Single;
    EncodingKind encoding = EncodingKind::Agg;
    ClassifierKind classifier = ClassifierKind::RForest;
    HyperParams params;

    int min_len = 1;
    int max_len = 40;
    int gap = 1;
    int level_min_count = 10;
    double level_top_fraction = 1.0;
    int min_bucket_size = 30;
    bool agg_boolean = false;
    bool derive_time = true;
    bool derive_wip = true;  // open_cases inter-case feature
    bool prefix_level_cv = false;
    uint64_t seed = 1;

    /// e.g. "single_agg", "prefix_index"
    std::string method_name() const;

    /// Index encoding is only valid inside fixed-length buckets.
    void validate() const;
};

struct BucketEntry {
    enum class Reason { None, TooSmall, SingleClass };

    bool is_constant = false;
    double constant_p = 0.5;
    Reason reason = Reason::None;

    FeatureSpace space;
    std::optional<Standardizer> scaler;  // logit only
    TrainedClassifier clf;
};

struct TrainedModel {
    PipelineConfig config;
    std::vector<AttributeSchema> schema;  // level-filtered training schema
    std::vector<std::string> alphabet;
    BucketerState bucketer;
    std::map<std::string, BucketEntry> buckets;
    double global_p = 0.5;  // fallback for unseen buckets

    // knn: lazily trained at prediction time from the k nearest neighbors
    FeatureSpace knn_space;
    std::vector<std::vector<double>> knn_cf;
    FeatureMatrix knn_X;
    std::vector<int> knn_y;
};

/// Offline phase on a pre-labeled (and pre-cut) log.
TrainedModel train_offline(const EventLog& log, const std::map<std::string, int>& labels,
                           const PipelineConfig& config);

/// Offline phase: label, cut, then train.
TrainedModel train_offline(const EventLog& log, const Labeling& labeling, const PipelineConfig& config);

/// Bucket, encode, and score one running case. Unseen buckets fall back to
/// the overall training positive ratio.
double predict_online(const TrainedModel& model, const Trace& partial);

/// Raw partial traces need the same derived attributes the model was trained
/// with; applies them per the model config, then scores every trace.
std::vector<std::pair<std::string, double>> predict_online_log(const TrainedModel& model,
                                                               const EventLog& running);

void save_model(const TrainedModel& model, std::ostream& sink);
void save_model_file(const TrainedModel& model, const std::string& path);
TrainedModel load_model(std::istream& source);
TrainedModel load_model_file(const std::string& path);

/// Seeded uniform random search over the method's tunable parameters,
/// scored by case-grouped k-fold cross-validated AUC on the training
/// prefix log. Ties keep the earliest trial.
PipelineConfig random_search_cv(const PrefixLog& prefixes, const std::vector<AttributeSchema>& schema,
                                const std::vector<std::string>& alphabet,
                                const PipelineConfig& config_template, const SearchSpace& space,
                                int n_trials, int folds, uint64_t seed);

/// Internal fitting entry point shared by train_offline and cross-validation:
/// trains on already-built prefixes against an already-filtered schema.
TrainedModel fit_on_prefixes(const PrefixLog& prefixes, const std::vector<AttributeSchema>& schema,
                             const std::vector<std::string>& alphabet, const PipelineConfig& config);

}  // namespace pxc
