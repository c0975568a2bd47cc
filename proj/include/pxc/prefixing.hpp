#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "pxc/event_log.hpp"

namespace pxc {

/// A labeled partial trace: the first `length` events of its source trace.
/// The source trace is shared between all prefixes generated from it.
struct PrefixInstance {
    std::shared_ptr<const Trace> source;
    int length = 0;
    int label = 0;

    const std::string& case_id() const { return source->case_id; }
    int source_length() const { return static_cast<int>(source->events.size()); }
    std::span<const Event> events() const {
        return {source->events.data(), static_cast<size_t>(length)};
    }
    const Event& last_event() const { return source->events[static_cast<size_t>(length) - 1]; }
};

struct PrefixParams {
    int min_len = 1;
    int max_len = 40;
    int gap = 1;
};

struct PrefixLog {
    std::vector<PrefixInstance> instances;
    PrefixParams params;
};

/// One instance per trace per length in {min_len + j*gap} up to
/// min(max_len, |trace|). Every trace needs a label entry.
PrefixLog build_prefix_log(const EventLog& log, const std::map<std::string, int>& labels,
                           int min_len, int max_len, int gap);

/// Smallest length by which at least ceil(quantile * n_minority) traces of the
/// minority class have finished, capped at hard_cap. Minority = class with
/// fewer traces, ties resolved to class 1.
int compute_max_eval_length(const EventLog& log, const std::map<std::string, int>& labels,
                            double quantile, int hard_cap);

}  // namespace pxc
