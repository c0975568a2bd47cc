#include "pxc/bucketing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pxc/errors.hpp"
#include "pxc/rng.hpp"

namespace pxc {

const char* bucket_method_name(BucketMethod m) {
    switch (m) {
        case BucketMethod::Single: return "single";
        case BucketMethod::Knn: return "knn";
        case BucketMethod::State: return "state";
        case BucketMethod::Cluster: return "cluster";
        case BucketMethod::PrefixLength: return "prefix";
    }
    return "?";
}

BucketMethod bucket_method_from_name(const std::string& name) {
    if (name == "single") return BucketMethod::Single;
    if (name == "knn") return BucketMethod::Knn;
    if (name == "state") return BucketMethod::State;
    if (name == "cluster") return BucketMethod::Cluster;
    if (name == "prefix" || name == "prefix_length") return BucketMethod::PrefixLength;
    fail(Errc::ConfigError, "unknown bucketing method: " + name);
}

std::string Dfg::to_dot() const {
    std::string out = "digraph dfg {\n";
    for (const auto& n : nodes) out += "  \"" + n + "\";\n";
    for (const auto& [a, b] : edges) out += "  \"" + a + "\" -> \"" + b + "\";\n";
    out += "}\n";
    return out;
}

Dfg build_dfg(const EventLog& log) {
    if (log.traces.empty()) fail(Errc::InvalidParams, "cannot build a DFG from an empty log");
    Dfg dfg;
    dfg.nodes = log.activity_alphabet;
    for (const auto& trace : log.traces)
        for (size_t i = 1; i < trace.events.size(); ++i)
            dfg.edges.emplace(trace.events[i - 1].activity, trace.events[i].activity);
    return dfg;
}

std::vector<double> control_flow_vector(std::span<const Event> events,
                                        const std::vector<std::string>& alphabet) {
    std::vector<double> out(alphabet.size(), 0.0);
    for (const auto& ev : events) {
        auto it = std::lower_bound(alphabet.begin(), alphabet.end(), ev.activity);
        if (it != alphabet.end() && *it == ev.activity)
            out[static_cast<size_t>(it - alphabet.begin())] += 1.0;
    }
    return out;
}

std::vector<double> control_flow_vector(const PrefixInstance& prefix,
                                        const std::vector<std::string>& alphabet) {
    return control_flow_vector(prefix.events(), alphabet);
}

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

size_t nearest_centroid(const std::vector<std::vector<double>>& centroids,
                        const std::vector<double>& p) {
    size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (size_t c = 0; c < centroids.size(); ++c) {
        double d = sq_dist(centroids[c], p);
        if (d < best_d) {  // strict: ties keep the lowest index
            best_d = d;
            best = c;
        }
    }
    return best;
}

}  // namespace

std::vector<std::vector<double>> fit_kmeans(const std::vector<std::vector<double>>& points, int k,
                                            uint64_t seed, int max_iter, double tol) {
    if (k < 2) fail(Errc::InvalidParams, "k must be >= 2");
    if (points.size() < static_cast<size_t>(k))
        fail(Errc::InsufficientPoints,
             std::to_string(points.size()) + " points for k=" + std::to_string(k));

    const size_t n = points.size();
    Rng rng(derive_seed(seed, 0x6b6d6561u));  // "kmea"

    // k-means++ seeding
    std::vector<std::vector<double>> centroids;
    centroids.push_back(points[static_cast<size_t>(rng.uniform_int(0, static_cast<long>(n) - 1))]);
    std::vector<double> d2(n);
    while (centroids.size() < static_cast<size_t>(k)) {
        double total = 0;
        for (size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : centroids) best = std::min(best, sq_dist(points[i], c));
            d2[i] = best;
            total += best;
        }
        size_t pick;
        if (total <= 0) {
            pick = static_cast<size_t>(rng.uniform_int(0, static_cast<long>(n) - 1));
        } else {
            double target = rng.uniform() * total;
            double acc = 0;
            pick = n - 1;
            for (size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (acc >= target) {
                    pick = i;
                    break;
                }
            }
        }
        centroids.push_back(points[pick]);
    }

    std::vector<size_t> assign(n, 0);
    for (int iter = 0; iter < max_iter; ++iter) {
        for (size_t i = 0; i < n; ++i) assign[i] = nearest_centroid(centroids, points[i]);

        std::vector<std::vector<double>> sums(centroids.size(),
                                              std::vector<double>(points[0].size(), 0.0));
        std::vector<long> count(centroids.size(), 0);
        for (size_t i = 0; i < n; ++i) {
            ++count[assign[i]];
            for (size_t d = 0; d < points[i].size(); ++d) sums[assign[i]][d] += points[i][d];
        }
        for (size_t c = 0; c < centroids.size(); ++c) {
            if (count[c] > 0) continue;
            // reseed the empty cluster at the point farthest from its centroid
            size_t far = 0;
            double far_d = -1;
            for (size_t i = 0; i < n; ++i) {
                double d = sq_dist(points[i], centroids[assign[i]]);
                if (d > far_d) {
                    far_d = d;
                    far = i;
                }
            }
            size_t old = assign[far];
            for (size_t d = 0; d < points[far].size(); ++d) {
                sums[old][d] -= points[far][d];
                sums[c][d] += points[far][d];
            }
            --count[old];
            ++count[c];
            assign[far] = c;
        }

        double shift = 0;
        for (size_t c = 0; c < centroids.size(); ++c) {
            std::vector<double> updated(points[0].size());
            for (size_t d = 0; d < updated.size(); ++d)
                updated[d] = sums[c][d] / static_cast<double>(count[c]);
            shift = std::max(shift, std::sqrt(sq_dist(updated, centroids[c])));
            centroids[c] = std::move(updated);
        }
        if (shift < tol) break;
    }
    return centroids;
}

std::vector<size_t> knn_select(const std::vector<std::vector<double>>& stored,
                               const std::vector<double>& query, int k) {
    if (k < 1 || static_cast<size_t>(k) > stored.size())
        fail(Errc::KTooLarge, "k=" + std::to_string(k) + " with " + std::to_string(stored.size()) +
                                  " stored instances");
    std::vector<std::pair<double, size_t>> dist;
    dist.reserve(stored.size());
    for (size_t i = 0; i < stored.size(); ++i) dist.emplace_back(sq_dist(stored[i], query), i);
    std::stable_sort(dist.begin(), dist.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<size_t> out(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) out[static_cast<size_t>(i)] = dist[static_cast<size_t>(i)].second;
    return out;
}

BucketerState fit_bucketer(BucketMethod method, const PrefixLog& prefixes, const EventLog& log,
                           int kmeans_k, uint64_t seed) {
    BucketerState state;
    state.method = method;
    state.alphabet = log.activity_alphabet;
    switch (method) {
        case BucketMethod::Single:
        case BucketMethod::PrefixLength:
        case BucketMethod::Knn:
            break;
        case BucketMethod::State:
            state.dfg = build_dfg(log);
            break;
        case BucketMethod::Cluster: {
            std::vector<std::vector<double>> vectors;
            vectors.reserve(prefixes.instances.size());
            for (const auto& p : prefixes.instances)
                vectors.push_back(control_flow_vector(p, state.alphabet));
            state.centroids = fit_kmeans(vectors, kmeans_k, seed);
            break;
        }
    }
    return state;
}

std::string assign_bucket(const BucketerState& state, const PrefixInstance& prefix) {
    switch (state.method) {
        case BucketMethod::Single:
        case BucketMethod::Knn:
            return kSingleBucketId;
        case BucketMethod::PrefixLength:
            return std::to_string(prefix.length);
        case BucketMethod::State: {
            const std::string& last = prefix.last_event().activity;
            if (std::binary_search(state.alphabet.begin(), state.alphabet.end(), last)) return last;
            return kUnknownBucketId;
        }
        case BucketMethod::Cluster: {
            auto v = control_flow_vector(prefix, state.alphabet);
            return std::to_string(nearest_centroid(state.centroids, v));
        }
    }
    fail(Errc::Internal, "unhandled bucket method");
}

}  // namespace pxc
