#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>

#include "pxc/event_log.hpp"
#include "pxc/ltl.hpp"

namespace pxc {

enum class LabelKind { LtlViolation, DurationSlow, ActivityPresence };

/// Trace-level binary outcome rule. Labels are computed on completed traces;
/// cut_activities additionally truncate each trace just before the first
/// occurrence of an outcome-revealing activity.
struct Labeling {
    LabelKind kind = LabelKind::LtlViolation;
    LtlPtr formula;                       // LtlViolation
    std::optional<double> threshold_s;    // DurationSlow; nullopt = median of the log
    std::string presence_activity;        // ActivityPresence
    std::set<std::string> cut_activities;

    static Labeling ltl_violation(LtlPtr f, std::set<std::string> cut = {});
    static Labeling duration_slow(std::optional<double> threshold_s);
    static Labeling activity_presence(std::string activity, std::set<std::string> cut = {});
};

/// 1 iff the formula is violated (evaluates false at position 1).
int label_ltl_violation(const Trace& trace, const LtlFormula& formula);

/// 1 iff some event has the given activity.
int label_activity_presence(const Trace& trace, const std::string& activity);

/// Case duration = last - first timestamp; label 1 ("slow") iff duration is
/// strictly greater than the threshold. nullopt threshold resolves to the
/// median duration over the log (even count: lower median).
std::map<std::string, int> label_duration(const EventLog& log, std::optional<double> threshold_s);

/// Longest prefix containing none of the given activities. Throws EmptyResult
/// when the first event already matches (the trace must be dropped).
Trace cut_before_first(const Trace& trace, const std::set<std::string>& activities);

/// Labels every trace, then applies cutting; traces whose cut is empty are
/// dropped from both the returned log and the label map.
std::pair<EventLog, std::map<std::string, int>> apply_labeling(const EventLog& log, const Labeling& labeling);

}  // namespace pxc
