#include "pxc/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

#include "pxc/errors.hpp"

namespace pxc {

const char* encoding_name(EncodingKind k) {
    switch (k) {
        case EncodingKind::Static: return "static";
        case EncodingKind::LastState: return "laststate";
        case EncodingKind::Agg: return "agg";
        case EncodingKind::Index: return "index";
    }
    return "?";
}

EncodingKind encoding_from_name(const std::string& name) {
    if (name == "static") return EncodingKind::Static;
    if (name == "laststate") return EncodingKind::LastState;
    if (name == "agg") return EncodingKind::Agg;
    if (name == "index") return EncodingKind::Index;
    fail(Errc::ConfigError, "unknown encoding: " + name);
}

size_t FeatureSpace::static_width() const {
    size_t w = 0;
    for (const auto& a : case_attrs) w += a.kind == AttrKind::Numeric ? 1 : a.levels.size();
    return w;
}

std::vector<AttributeSchema> fit_level_filter(const PrefixLog& prefixes,
                                              const std::vector<AttributeSchema>& schema,
                                              int min_count, double top_fraction) {
    if (top_fraction <= 0.0 || top_fraction > 1.0)
        fail(Errc::InvalidParams, "top_fraction must be in (0, 1]");

    // level -> number of training prefixes containing it at least once
    std::map<std::string, std::map<std::string, long>> counts;
    for (const auto& inst : prefixes.instances) {
        std::map<std::string, std::set<std::string>> seen;
        for (const auto& ev : inst.events()) {
            for (const auto& [name, val] : ev.payload)
                if (val.kind == AttributeValue::Kind::Categorical) seen[name].insert(val.text);
        }
        for (const auto& [name, levels] : seen)
            for (const auto& level : levels) ++counts[name][level];
    }

    std::vector<AttributeSchema> out;
    out.reserve(schema.size());
    for (const auto& attr : schema) {
        AttributeSchema filtered = attr;
        if (attr.kind != AttrKind::Categorical || attr.is_activity) {
            out.push_back(std::move(filtered));
            continue;
        }
        std::vector<std::pair<std::string, long>> kept;
        auto it = counts.find(attr.name);
        if (it != counts.end()) {
            for (const auto& [level, n] : it->second)
                if (n >= min_count) kept.emplace_back(level, n);
        }
        // top ceil(top_fraction * k) by frequency, ties lexicographic
        std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        auto keep_n = static_cast<size_t>(
            std::ceil(top_fraction * static_cast<double>(kept.size()) - 1e-9));
        kept.resize(std::min(kept.size(), keep_n));

        std::set<std::string> levels;
        for (const auto& [level, n] : kept) levels.insert(level);
        levels.insert(kOtherLevel);
        filtered.levels.assign(levels.begin(), levels.end());
        out.push_back(std::move(filtered));
    }
    return out;
}

namespace {

void push_descriptors_for_attr(std::vector<FeatureDescriptor>& ds, const AttributeSchema& attr,
                               EncodingKind kind, int index) {
    using Ex = FeatureDescriptor::Extractor;
    switch (kind) {
        case EncodingKind::Static:
        case EncodingKind::LastState:
            if (attr.kind == AttrKind::Numeric) {
                ds.push_back({attr.name, Ex::AsIs, {}, 0});
            } else {
                for (const auto& level : attr.levels) ds.push_back({attr.name, Ex::OneHot, level, 0});
            }
            break;
        case EncodingKind::Agg:
            if (attr.kind == AttrKind::Numeric) {
                ds.push_back({attr.name, Ex::Min, {}, 0});
                ds.push_back({attr.name, Ex::Max, {}, 0});
                ds.push_back({attr.name, Ex::Mean, {}, 0});
                ds.push_back({attr.name, Ex::Sum, {}, 0});
                ds.push_back({attr.name, Ex::Std, {}, 0});
            } else {
                for (const auto& level : attr.levels) ds.push_back({attr.name, Ex::Freq, level, 0});
            }
            break;
        case EncodingKind::Index:
            if (attr.kind == AttrKind::Numeric) {
                ds.push_back({attr.name, Ex::IndexAsIs, {}, index});
            } else {
                for (const auto& level : attr.levels)
                    ds.push_back({attr.name, Ex::IndexOneHot, level, index});
            }
            break;
    }
}

}  // namespace

FeatureSpace fit_feature_space(const std::vector<AttributeSchema>& filtered_schema, EncodingKind kind,
                               int index_length, bool boolean_occurrence) {
    if (kind == EncodingKind::Index && index_length < 1)
        fail(Errc::InvalidParams, "index encoding needs a positive length");

    FeatureSpace space;
    space.kind = kind;
    space.index_length = kind == EncodingKind::Index ? index_length : 0;
    space.boolean_occurrence = boolean_occurrence;
    for (const auto& attr : filtered_schema) {
        if (attr.scope == AttrScope::Case) space.case_attrs.push_back(attr);
        else space.event_attrs.push_back(attr);
    }

    // static block first, in every method
    for (const auto& attr : space.case_attrs)
        push_descriptors_for_attr(space.descriptors, attr, EncodingKind::Static, 0);
    switch (kind) {
        case EncodingKind::Static:
            break;
        case EncodingKind::LastState:
        case EncodingKind::Agg:
            for (const auto& attr : space.event_attrs)
                push_descriptors_for_attr(space.descriptors, attr, kind, 0);
            break;
        case EncodingKind::Index:
            for (int i = 1; i <= index_length; ++i)
                for (const auto& attr : space.event_attrs)
                    push_descriptors_for_attr(space.descriptors, attr, kind, i);
            break;
    }
    return space;
}

namespace {

const AttributeValue* find_value(const Event& ev, const AttributeSchema& attr) {
    if (attr.is_activity) return nullptr;  // activity handled by caller
    auto it = ev.payload.find(attr.name);
    return it == ev.payload.end() ? nullptr : &it->second;
}

// level of the event for a categorical attribute: activity name, payload
// value, or the missing marker; values outside the fitted levels become OTHER
std::string event_level(const Event& ev, const AttributeSchema& attr) {
    if (attr.is_activity) return ev.activity;
    const AttributeValue* v = find_value(ev, attr);
    if (!v || v->is_missing()) return kMissingLevel;
    return v->text;
}

void one_hot(std::vector<double>& out, const AttributeSchema& attr, const std::string& raw) {
    const std::string* level = &raw;
    static const std::string other = kOtherLevel;
    if (!std::binary_search(attr.levels.begin(), attr.levels.end(), raw)) level = &other;
    for (const auto& l : attr.levels) out.push_back(l == *level ? 1.0 : 0.0);
}

void numeric_as_is(std::vector<double>& out, const AttributeSchema& attr, const Event& ev) {
    const AttributeValue* v = find_value(ev, attr);
    out.push_back(v && v->kind == AttributeValue::Kind::Numeric ? v->number : 0.0);
}

}  // namespace

std::vector<double> encode_static(const PrefixInstance& prefix, const FeatureSpace& space) {
    std::vector<double> out;
    out.reserve(space.static_width());
    const Event& first = prefix.events().front();
    for (const auto& attr : space.case_attrs) {
        if (attr.kind == AttrKind::Numeric) numeric_as_is(out, attr, first);
        else one_hot(out, attr, event_level(first, attr));
    }
    return out;
}

std::vector<double> encode_last_state(const PrefixInstance& prefix, const FeatureSpace& space) {
    std::vector<double> out;
    const Event& last = prefix.last_event();
    for (const auto& attr : space.event_attrs) {
        if (attr.kind == AttrKind::Numeric) numeric_as_is(out, attr, last);
        else one_hot(out, attr, event_level(last, attr));
    }
    return out;
}

std::vector<double> encode_aggregation(const PrefixInstance& prefix, const FeatureSpace& space) {
    std::vector<double> out;
    auto events = prefix.events();
    for (const auto& attr : space.event_attrs) {
        if (attr.kind == AttrKind::Numeric) {
            double mn = 0, mx = 0, sum = 0, sum_sq = 0;
            long n = 0;
            for (const auto& ev : events) {
                const AttributeValue* v = find_value(ev, attr);
                if (!v || v->kind != AttributeValue::Kind::Numeric) continue;
                double x = v->number;
                if (n == 0) mn = mx = x;
                else {
                    mn = std::min(mn, x);
                    mx = std::max(mx, x);
                }
                sum += x;
                sum_sq += x * x;
                ++n;
            }
            double mean = n ? sum / static_cast<double>(n) : 0.0;
            double var = n ? std::max(0.0, sum_sq / static_cast<double>(n) - mean * mean) : 0.0;
            out.push_back(mn);
            out.push_back(mx);
            out.push_back(mean);
            out.push_back(n ? sum : 0.0);
            out.push_back(std::sqrt(var));
        } else {
            size_t base = out.size();
            out.resize(base + attr.levels.size(), 0.0);
            for (const auto& ev : events) {
                std::string raw = event_level(ev, attr);
                auto it = std::lower_bound(attr.levels.begin(), attr.levels.end(), raw);
                if (it == attr.levels.end() || *it != raw) {
                    it = std::lower_bound(attr.levels.begin(), attr.levels.end(), kOtherLevel);
                    if (it == attr.levels.end() || *it != std::string(kOtherLevel)) continue;
                }
                double& slot = out[base + static_cast<size_t>(it - attr.levels.begin())];
                if (space.boolean_occurrence) slot = 1.0;
                else slot += 1.0;
            }
        }
    }
    return out;
}

std::vector<double> encode_index(const PrefixInstance& prefix, const FeatureSpace& space) {
    if (prefix.length != space.index_length)
        fail(Errc::LengthMismatch, "index encoding fitted for length " +
                                       std::to_string(space.index_length) + ", got " +
                                       std::to_string(prefix.length));
    std::vector<double> out;
    auto events = prefix.events();
    for (int i = 0; i < space.index_length; ++i) {
        const Event& ev = events[static_cast<size_t>(i)];
        for (const auto& attr : space.event_attrs) {
            if (attr.kind == AttrKind::Numeric) numeric_as_is(out, attr, ev);
            else one_hot(out, attr, event_level(ev, attr));
        }
    }
    return out;
}

std::vector<double> encode(const PrefixInstance& prefix, const FeatureSpace& space) {
    std::vector<double> out = encode_static(prefix, space);
    std::vector<double> block;
    switch (space.kind) {
        case EncodingKind::Static: break;
        case EncodingKind::LastState: block = encode_last_state(prefix, space); break;
        case EncodingKind::Agg: block = encode_aggregation(prefix, space); break;
        case EncodingKind::Index: block = encode_index(prefix, space); break;
    }
    out.insert(out.end(), block.begin(), block.end());
    if (out.size() != space.width())
        fail(Errc::Internal, "encoded width " + std::to_string(out.size()) + " != descriptor width " +
                                 std::to_string(space.width()));
    return out;
}

FeatureMatrix encode_matrix(const std::vector<PrefixInstance>& prefixes, const FeatureSpace& space) {
    FeatureMatrix m;
    m.rows = prefixes.size();
    m.width = space.width();
    m.values.reserve(m.rows * m.width);
    m.meta.reserve(m.rows);
    for (const auto& p : prefixes) {
        auto row = encode(p, space);
        m.values.insert(m.values.end(), row.begin(), row.end());
        m.meta.push_back({p.case_id(), p.length, p.label});
    }
    return m;
}

Standardizer fit_standardizer(const FeatureMatrix& matrix) {
    Standardizer s;
    s.mean.assign(matrix.width, 0.0);
    s.stddev.assign(matrix.width, 0.0);
    if (matrix.rows == 0) return s;
    for (size_t r = 0; r < matrix.rows; ++r)
        for (size_t c = 0; c < matrix.width; ++c) s.mean[c] += matrix.at(r, c);
    for (auto& v : s.mean) v /= static_cast<double>(matrix.rows);
    for (size_t r = 0; r < matrix.rows; ++r)
        for (size_t c = 0; c < matrix.width; ++c) {
            double d = matrix.at(r, c) - s.mean[c];
            s.stddev[c] += d * d;
        }
    for (auto& v : s.stddev) v = std::sqrt(v / static_cast<double>(matrix.rows));
    return s;
}

void apply_standardizer(FeatureMatrix& matrix, const Standardizer& s) {
    if (matrix.width != s.mean.size()) fail(Errc::WidthMismatch, "standardizer width mismatch");
    for (size_t r = 0; r < matrix.rows; ++r)
        for (size_t c = 0; c < matrix.width; ++c) {
            double& x = matrix.at(r, c);
            x = s.stddev[c] == 0.0 ? 0.0 : (x - s.mean[c]) / s.stddev[c];
        }
}

void apply_standardizer(std::vector<double>& row, const Standardizer& s) {
    if (row.size() != s.mean.size()) fail(Errc::WidthMismatch, "standardizer width mismatch");
    for (size_t c = 0; c < row.size(); ++c)
        row[c] = s.stddev[c] == 0.0 ? 0.0 : (row[c] - s.mean[c]) / s.stddev[c];
}

}  // namespace pxc
