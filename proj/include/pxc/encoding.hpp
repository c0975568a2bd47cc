#pragma once

#include <string>
#include <vector>

#include "pxc/event_log.hpp"
#include "pxc/prefixing.hpp"

namespace pxc {

enum class EncodingKind { Static, LastState, Agg, Index };

const char* encoding_name(EncodingKind k);
EncodingKind encoding_from_name(const std::string& name);

struct FeatureDescriptor {
    enum class Extractor { AsIs, OneHot, Freq, Min, Max, Mean, Sum, Std, IndexAsIs, IndexOneHot };

    std::string attribute;
    Extractor extractor;
    std::string level;  // OneHot / Freq / IndexOneHot
    int index = 0;      // 1-based event position, index encoding only
};

/// Fitted encoder layout. Every kind carries the static block (case
/// attributes) followed by the event block for the chosen abstraction.
/// Descriptor order is canonical: attributes in schema order, levels in
/// sorted order, indices ascending.
struct FeatureSpace {
    EncodingKind kind = EncodingKind::Agg;
    int index_length = 0;  // L, Index only
    bool boolean_occurrence = false;  // Agg: 0/1 instead of counts
    std::vector<AttributeSchema> case_attrs;
    std::vector<AttributeSchema> event_attrs;  // includes the activity attribute
    std::vector<FeatureDescriptor> descriptors;

    size_t width() const { return descriptors.size(); }
    size_t static_width() const;
};

/// Keeps, for every categorical attribute except the activity, the levels
/// occurring in at least min_count training prefixes, then the top
/// ceil(top_fraction * k) most frequent of those (ties lexicographic).
/// Dropped and unseen values map to the reserved OTHER level, which is always
/// appended. Activity levels pass through unchanged.
std::vector<AttributeSchema> fit_level_filter(const PrefixLog& prefixes,
                                              const std::vector<AttributeSchema>& schema,
                                              int min_count = 10, double top_fraction = 1.0);

FeatureSpace fit_feature_space(const std::vector<AttributeSchema>& filtered_schema, EncodingKind kind,
                               int index_length = 0, bool boolean_occurrence = false);

/// Full vector: static block then event block. Index spaces require
/// prefix.length == index_length (LengthMismatch).
std::vector<double> encode(const PrefixInstance& prefix, const FeatureSpace& space);

// individual blocks (the event-block entry points of the four methods)
std::vector<double> encode_static(const PrefixInstance& prefix, const FeatureSpace& space);
std::vector<double> encode_last_state(const PrefixInstance& prefix, const FeatureSpace& space);
std::vector<double> encode_aggregation(const PrefixInstance& prefix, const FeatureSpace& space);
std::vector<double> encode_index(const PrefixInstance& prefix, const FeatureSpace& space);

struct RowMeta {
    std::string case_id;
    int prefix_length = 0;
    int label = 0;
};

struct FeatureMatrix {
    size_t rows = 0;
    size_t width = 0;
    std::vector<double> values;  // row-major
    std::vector<RowMeta> meta;

    double& at(size_t r, size_t c) { return values[r * width + c]; }
    double at(size_t r, size_t c) const { return values[r * width + c]; }
    std::span<const double> row(size_t r) const { return {values.data() + r * width, width}; }
};

FeatureMatrix encode_matrix(const std::vector<PrefixInstance>& prefixes, const FeatureSpace& space);

struct Standardizer {
    std::vector<double> mean;
    std::vector<double> stddev;  // population; zero-variance columns keep 0
};

Standardizer fit_standardizer(const FeatureMatrix& matrix);
void apply_standardizer(FeatureMatrix& matrix, const Standardizer& s);
void apply_standardizer(std::vector<double>& row, const Standardizer& s);

}  // namespace pxc
