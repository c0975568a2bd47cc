#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pxc/prefixing.hpp"

namespace pxc {

enum class BucketMethod { Single, Knn, State, Cluster, PrefixLength };

const char* bucket_method_name(BucketMethod m);
BucketMethod bucket_method_from_name(const std::string& name);

inline constexpr const char* kSingleBucketId = "all";
inline constexpr const char* kUnknownBucketId = "UNKNOWN";

/// Directly-follows graph: edge (a, b) iff b immediately follows a in at
/// least one training trace. Kept for diagnostics; state bucketing only
/// needs the last activity.
struct Dfg {
    std::vector<std::string> nodes;
    std::set<std::pair<std::string, std::string>> edges;

    std::string to_dot() const;
};

Dfg build_dfg(const EventLog& log);

/// Activity-frequency vector in alphabet order (the control-flow slice of the
/// aggregation encoding).
std::vector<double> control_flow_vector(const PrefixInstance& prefix,
                                        const std::vector<std::string>& alphabet);
std::vector<double> control_flow_vector(std::span<const Event> events,
                                        const std::vector<std::string>& alphabet);

struct BucketerState {
    BucketMethod method = BucketMethod::Single;
    std::vector<std::string> alphabet;           // fixed from training
    Dfg dfg;                                     // State only
    std::vector<std::vector<double>> centroids;  // Cluster only
};

/// Lloyd's algorithm with k-means++ seeding; stops when the largest centroid
/// shift drops below tol. An emptied cluster is reseeded to the point
/// farthest from its assigned centroid.
std::vector<std::vector<double>> fit_kmeans(const std::vector<std::vector<double>>& points, int k,
                                            uint64_t seed, int max_iter = 300, double tol = 1e-4);

/// Indices of the k nearest stored vectors (Euclidean); ties broken by
/// insertion order.
std::vector<size_t> knn_select(const std::vector<std::vector<double>>& stored,
                               const std::vector<double>& query, int k);

BucketerState fit_bucketer(BucketMethod method, const PrefixLog& prefixes, const EventLog& log,
                           int kmeans_k, uint64_t seed);

/// single -> "all"; prefix_length -> decimal length; state -> last activity
/// (or UNKNOWN if outside the training alphabet); cluster -> nearest centroid
/// index, ties to the lowest index.
std::string assign_bucket(const BucketerState& state, const PrefixInstance& prefix);

}  // namespace pxc
