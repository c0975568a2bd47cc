#include "pxc/labeling.hpp"

#include <algorithm>

#include "pxc/errors.hpp"

namespace pxc {

Labeling Labeling::ltl_violation(LtlPtr f, std::set<std::string> cut) {
    Labeling l;
    l.kind = LabelKind::LtlViolation;
    l.formula = std::move(f);
    l.cut_activities = std::move(cut);
    return l;
}

Labeling Labeling::duration_slow(std::optional<double> threshold_s) {
    Labeling l;
    l.kind = LabelKind::DurationSlow;
    l.threshold_s = threshold_s;
    return l;
}

Labeling Labeling::activity_presence(std::string activity, std::set<std::string> cut) {
    Labeling l;
    l.kind = LabelKind::ActivityPresence;
    l.presence_activity = std::move(activity);
    l.cut_activities = std::move(cut);
    return l;
}

int label_ltl_violation(const Trace& trace, const LtlFormula& formula) {
    return eval_ltl(trace, formula, 1) ? 0 : 1;
}

int label_activity_presence(const Trace& trace, const std::string& activity) {
    for (const auto& ev : trace.events)
        if (ev.activity == activity) return 1;
    return 0;
}

std::map<std::string, int> label_duration(const EventLog& log, std::optional<double> threshold_s) {
    std::vector<double> durations;
    durations.reserve(log.traces.size());
    for (const auto& t : log.traces)
        durations.push_back(t.events.back().timestamp - t.events.front().timestamp);

    double threshold;
    if (threshold_s) {
        threshold = *threshold_s;
    } else {
        std::vector<double> sorted = durations;
        std::sort(sorted.begin(), sorted.end());
        threshold = sorted[(sorted.size() - 1) / 2];  // lower median
    }

    std::map<std::string, int> labels;
    for (size_t i = 0; i < log.traces.size(); ++i)
        labels[log.traces[i].case_id] = durations[i] > threshold ? 1 : 0;
    return labels;
}

Trace cut_before_first(const Trace& trace, const std::set<std::string>& activities) {
    size_t cut = trace.events.size();
    for (size_t i = 0; i < trace.events.size(); ++i) {
        if (activities.count(trace.events[i].activity)) {
            cut = i;
            break;
        }
    }
    if (cut == 0)
        fail(Errc::EmptyResult, "first event of case \"" + trace.case_id + "\" is a cut activity");
    Trace out;
    out.case_id = trace.case_id;
    out.events.assign(trace.events.begin(), trace.events.begin() + static_cast<long>(cut));
    return out;
}

std::pair<EventLog, std::map<std::string, int>> apply_labeling(const EventLog& log, const Labeling& labeling) {
    std::map<std::string, int> labels;
    switch (labeling.kind) {
        case LabelKind::LtlViolation:
            if (!labeling.formula) fail(Errc::ConfigError, "ltl_violation labeling requires a formula");
            for (const auto& t : log.traces) labels[t.case_id] = label_ltl_violation(t, *labeling.formula);
            break;
        case LabelKind::ActivityPresence:
            for (const auto& t : log.traces)
                labels[t.case_id] = label_activity_presence(t, labeling.presence_activity);
            break;
        case LabelKind::DurationSlow:
            labels = label_duration(log, labeling.threshold_s);
            break;
    }

    EventLog out = log;
    if (!labeling.cut_activities.empty()) {
        std::vector<Trace> kept;
        kept.reserve(log.traces.size());
        for (const auto& t : log.traces) {
            try {
                kept.push_back(cut_before_first(t, labeling.cut_activities));
            } catch (const Error& e) {
                if (e.code() != Errc::EmptyResult) throw;
                labels.erase(t.case_id);  // trace excluded from the task
            }
        }
        out.traces = std::move(kept);
        rebuild_observed(out);
    }
    return {std::move(out), std::move(labels)};
}

}  // namespace pxc
