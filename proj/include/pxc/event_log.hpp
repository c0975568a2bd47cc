#pragma once

#include <compare>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pxc {

inline constexpr const char* kMissingLevel = "⊥";  // reserved level for missing categoricals
inline constexpr const char* kOtherLevel = "OTHER";     // reserved level for filtered-out categoricals

enum class AttrScope { Case, Event };
enum class AttrKind { Categorical, Numeric };

struct AttributeValue {
    enum class Kind { Missing, Categorical, Numeric };

    Kind kind = Kind::Missing;
    std::string text;
    double number = 0.0;

    static AttributeValue missing() { return {}; }
    static AttributeValue categorical(std::string level) {
        return {Kind::Categorical, std::move(level), 0.0};
    }
    static AttributeValue numeric(double v) { return {Kind::Numeric, {}, v}; }

    bool is_missing() const { return kind == Kind::Missing; }
    bool operator==(const AttributeValue&) const = default;
};

struct AttributeSchema {
    std::string name;
    AttrScope scope = AttrScope::Event;
    AttrKind kind = AttrKind::Categorical;
    std::vector<std::string> levels;  // sorted, duplicate-free; empty for numeric
    bool is_activity = false;

    bool operator==(const AttributeSchema&) const = default;
};

struct Event {
    std::string activity;
    std::string case_id;
    double timestamp = 0.0;  // seconds since Unix epoch, UTC
    std::map<std::string, AttributeValue> payload;

    bool operator==(const Event&) const = default;
};

struct Trace {
    std::string case_id;
    std::vector<Event> events;

    bool operator==(const Trace&) const = default;
};

struct EventLog {
    std::vector<Trace> traces;
    std::vector<AttributeSchema> schema;
    std::vector<std::string> activity_alphabet;  // sorted, unique

    // column names for canonical re-emission
    std::string case_column, activity_column, timestamp_column;
    std::vector<std::string> column_order;  // original non-ignored columns, file order

    const AttributeSchema* find_attribute(const std::string& name) const;
    bool operator==(const EventLog&) const = default;
};

struct SchemaConfig {
    std::string case_id;
    std::string activity;
    std::string timestamp;
    std::vector<std::string> static_attrs;
    std::vector<std::string> dynamic_attrs;
    std::vector<std::string> ignore;
};

SchemaConfig load_schema_config(const std::string& path);
SchemaConfig parse_schema_config(const std::string& json_text);

/// ISO-8601 timestamp, naive times treated as UTC. Microsecond resolution.
/// Accepts "YYYY-MM-DD[ T]HH:MM[:SS[.ffffff]][Z|+HH:MM|-HH:MM]".
std::optional<double> parse_timestamp(const std::string& text);
std::string format_timestamp(double seconds_since_epoch);

// calendar helpers, UTC
int timestamp_month(double ts);    // 1..12
int timestamp_weekday(double ts);  // 0 = Monday .. 6 = Sunday
int timestamp_hour(double ts);     // 0..23

EventLog parse_event_log(std::istream& csv_stream, const SchemaConfig& config);
EventLog parse_event_log_file(const std::string& csv_path, const SchemaConfig& config);

/// Appends the six per-event time features (month, weekday, hour, elapsed_prev,
/// elapsed_start, position) as numeric event attributes. Idempotent.
EventLog derive_time_features(const EventLog& log);

/// Appends open_cases: the number of traces whose [first, last] timestamp span
/// contains the event's timestamp.
EventLog derive_open_cases(const EventLog& log);

/// Canonical re-emission: original columns in file order, then derived columns.
void write_event_log(const EventLog& log, std::ostream& out);
void write_event_log_file(const EventLog& log, const std::string& path);

/// Recomputes activity_alphabet and categorical level lists from the traces
/// actually present (used after splitting or trimming a log).
void rebuild_observed(EventLog& log);

}  // namespace pxc
