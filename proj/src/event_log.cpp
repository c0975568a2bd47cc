#include "pxc/event_log.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "pxc/csv.hpp"
#include "pxc/errors.hpp"

namespace pxc {

namespace {

// days_from_civil / civil_from_days, the usual proleptic-Gregorian conversion
long days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    long era = (y >= 0 ? y : y - 399) / 400;
    unsigned yoe = static_cast<unsigned>(y - era * 400);
    unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long>(doe) - 719468;
}

void civil_from_days(long z, int& y, unsigned& m, unsigned& d) {
    z += 719468;
    long era = (z >= 0 ? z : z - 146096) / 146097;
    unsigned doe = static_cast<unsigned>(z - era * 146097);
    unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    int yr = static_cast<int>(yoe) + static_cast<int>(era) * 400;
    unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y = yr + (m <= 2);
}

long floor_div(long a, long b) { return a / b - ((a % b != 0) && ((a < 0) != (b < 0))); }

bool parse_int_field(const char*& p, const char* end, int digits, int& out) {
    if (end - p < digits) return false;
    int v = 0;
    for (int i = 0; i < digits; ++i) {
        if (p[i] < '0' || p[i] > '9') return false;
        v = v * 10 + (p[i] - '0');
    }
    p += digits;
    out = v;
    return true;
}

bool parse_real(const std::string& text, double& out) {
    const char* begin = text.c_str();
    const char* end = begin + text.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end > begin && (end[-1] == ' ' || end[-1] == '\t')) --end;
    if (begin == end) return false;
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end && std::isfinite(out);
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace

const AttributeSchema* EventLog::find_attribute(const std::string& name) const {
    for (const auto& a : schema)
        if (a.name == name) return &a;
    return nullptr;
}

std::optional<double> parse_timestamp(const std::string& text) {
    const char* p = text.c_str();
    const char* end = p + text.size();
    while (p < end && *p == ' ') ++p;
    while (end > p && end[-1] == ' ') --end;

    int year, month, day, hour, minute, second = 0;
    if (!parse_int_field(p, end, 4, year) || p >= end || *p != '-') return std::nullopt;
    ++p;
    if (!parse_int_field(p, end, 2, month) || p >= end || *p != '-') return std::nullopt;
    ++p;
    if (!parse_int_field(p, end, 2, day)) return std::nullopt;
    if (p >= end || (*p != ' ' && *p != 'T')) return std::nullopt;
    ++p;
    if (!parse_int_field(p, end, 2, hour) || p >= end || *p != ':') return std::nullopt;
    ++p;
    if (!parse_int_field(p, end, 2, minute)) return std::nullopt;
    if (p < end && *p == ':') {
        ++p;
        if (!parse_int_field(p, end, 2, second)) return std::nullopt;
    }
    if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 || second > 60)
        return std::nullopt;

    double frac = 0.0;
    if (p < end && *p == '.') {
        ++p;
        double scale = 0.1;
        bool any = false;
        while (p < end && *p >= '0' && *p <= '9') {
            frac += (*p - '0') * scale;
            scale *= 0.1;
            ++p;
            any = true;
        }
        if (!any) return std::nullopt;
    }

    long offset_s = 0;
    if (p < end) {
        if (*p == 'Z') {
            ++p;
        } else if (*p == '+' || *p == '-') {
            int sign = (*p == '+') ? 1 : -1;
            ++p;
            int oh, om = 0;
            if (!parse_int_field(p, end, 2, oh)) return std::nullopt;
            if (p < end && *p == ':') ++p;
            if (p < end && !parse_int_field(p, end, 2, om)) return std::nullopt;
            offset_s = sign * (oh * 3600L + om * 60L);
        }
    }
    if (p != end) return std::nullopt;

    long days = days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day));
    double ts = static_cast<double>(days) * 86400.0 + hour * 3600.0 + minute * 60.0 + second + frac;
    return ts - static_cast<double>(offset_s);
}

std::string format_timestamp(double ts) {
    double floor_s = std::floor(ts);
    long micros = std::lround((ts - floor_s) * 1e6);
    if (micros == 1000000) {  // fraction rounded up to a full second
        floor_s += 1.0;
        micros = 0;
    }
    long total = static_cast<long>(floor_s);
    long days = floor_div(total, 86400);
    long sod = total - days * 86400;
    int y;
    unsigned m, d;
    civil_from_days(days, y, m, d);
    char buf[48];
    int n = std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02ld:%02ld:%02ld", y, m, d, sod / 3600,
                          (sod % 3600) / 60, sod % 60);
    std::string out(buf, static_cast<size_t>(n));
    if (micros != 0) {
        std::snprintf(buf, sizeof(buf), "%06ld", micros);
        std::string frac(buf);
        while (frac.back() == '0') frac.pop_back();
        out += '.';
        out += frac;
    }
    return out;
}

int timestamp_month(double ts) {
    long days = floor_div(static_cast<long>(std::floor(ts)), 86400);
    int y;
    unsigned m, d;
    civil_from_days(days, y, m, d);
    return static_cast<int>(m);
}

int timestamp_weekday(double ts) {
    long days = floor_div(static_cast<long>(std::floor(ts)), 86400);
    // 1970-01-01 was a Thursday (index 3 when Monday = 0)
    return static_cast<int>(((days % 7) + 7 + 3) % 7);
}

int timestamp_hour(double ts) {
    long total = static_cast<long>(std::floor(ts));
    long sod = total - floor_div(total, 86400) * 86400;
    return static_cast<int>(sod / 3600);
}

SchemaConfig parse_schema_config(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        fail(Errc::ConfigError, std::string("schema config is not valid JSON: ") + e.what());
    }
    SchemaConfig cfg;
    try {
        cfg.case_id = j.at("case_id").get<std::string>();
        cfg.activity = j.at("activity").get<std::string>();
        cfg.timestamp = j.at("timestamp").get<std::string>();
        if (j.contains("static")) cfg.static_attrs = j["static"].get<std::vector<std::string>>();
        if (j.contains("dynamic")) cfg.dynamic_attrs = j["dynamic"].get<std::vector<std::string>>();
        if (j.contains("ignore")) cfg.ignore = j["ignore"].get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        fail(Errc::ConfigError, std::string("schema config: ") + e.what());
    }
    return cfg;
}

SchemaConfig load_schema_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::IoFailure, "cannot open schema file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_schema_config(ss.str());
}

namespace {

struct RawRow {
    long file_order;
    double timestamp;
    std::vector<std::string> fields;
};

}  // namespace

EventLog parse_event_log(std::istream& csv_stream, const SchemaConfig& config) {
    CsvReader reader(csv_stream);
    auto header = reader.next();
    if (!header) fail(Errc::Corrupt, "empty CSV input");

    std::unordered_map<std::string, size_t> col_index;
    for (size_t i = 0; i < header->size(); ++i) col_index.emplace((*header)[i], i);

    auto require = [&](const std::string& name) -> size_t {
        auto it = col_index.find(name);
        if (it == col_index.end()) fail(Errc::MissingColumn, "column not found: " + name);
        return it->second;
    };
    size_t case_col = require(config.case_id);
    size_t act_col = require(config.activity);
    size_t ts_col = require(config.timestamp);

    struct DataCol {
        std::string name;
        size_t index;
        AttrScope scope;
    };
    std::vector<DataCol> data_cols;
    std::set<std::string> ignored(config.ignore.begin(), config.ignore.end());
    std::set<std::string> statics(config.static_attrs.begin(), config.static_attrs.end());
    std::set<std::string> dynamics(config.dynamic_attrs.begin(), config.dynamic_attrs.end());
    for (const auto& name : config.static_attrs) require(name);
    for (const auto& name : config.dynamic_attrs) require(name);

    EventLog log;
    log.case_column = config.case_id;
    log.activity_column = config.activity;
    log.timestamp_column = config.timestamp;
    for (const auto& name : *header) {
        if (ignored.count(name)) continue;
        bool known = name == config.case_id || name == config.activity || name == config.timestamp ||
                     statics.count(name) || dynamics.count(name);
        if (!known) continue;  // undeclared columns are ignored
        log.column_order.push_back(name);
        if (statics.count(name)) data_cols.push_back({name, col_index[name], AttrScope::Case});
        else if (dynamics.count(name)) data_cols.push_back({name, col_index[name], AttrScope::Event});
    }

    // read rows, group by case
    std::vector<std::string> case_order;
    std::unordered_map<std::string, std::vector<RawRow>> by_case;
    long n_cols = static_cast<long>(header->size());
    while (auto rec = reader.next()) {
        if (rec->size() == 1 && (*rec)[0].empty()) continue;  // blank line
        if (static_cast<long>(rec->size()) != n_cols)
            fail(Errc::Corrupt, "record " + std::to_string(reader.record_number()) + " has " +
                                    std::to_string(rec->size()) + " fields, expected " +
                                    std::to_string(n_cols));
        const std::string& cid = (*rec)[case_col];
        const std::string& act = (*rec)[act_col];
        if (cid.empty()) fail(Errc::Corrupt, "empty case id at record " + std::to_string(reader.record_number()));
        if (act.empty()) fail(Errc::Corrupt, "empty activity at record " + std::to_string(reader.record_number()));
        auto ts = parse_timestamp((*rec)[ts_col]);
        if (!ts)
            fail(Errc::TimestampParse, "unparseable timestamp \"" + (*rec)[ts_col] + "\" at record " +
                                           std::to_string(reader.record_number()));
        auto it = by_case.find(cid);
        if (it == by_case.end()) {
            case_order.push_back(cid);
            it = by_case.emplace(cid, std::vector<RawRow>{}).first;
        }
        it->second.push_back({reader.record_number(), *ts, std::move(*rec)});
    }

    // kind inference: a column is numeric iff every non-missing value parses as a real number
    std::vector<AttrKind> kinds(data_cols.size(), AttrKind::Numeric);
    std::vector<bool> any_value(data_cols.size(), false);
    for (const auto& cid : case_order) {
        for (const auto& row : by_case[cid]) {
            for (size_t a = 0; a < data_cols.size(); ++a) {
                const std::string& raw = row.fields[data_cols[a].index];
                if (raw.empty()) continue;
                any_value[a] = true;
                double v;
                if (kinds[a] == AttrKind::Numeric && !parse_real(raw, v)) kinds[a] = AttrKind::Categorical;
            }
        }
    }
    for (size_t a = 0; a < data_cols.size(); ++a)
        if (!any_value[a]) kinds[a] = AttrKind::Categorical;  // all-missing column

    // materialize traces
    std::vector<std::set<std::string>> level_sets(data_cols.size());
    std::set<std::string> alphabet;
    for (const auto& cid : case_order) {
        auto& rows = by_case[cid];
        std::stable_sort(rows.begin(), rows.end(), [](const RawRow& x, const RawRow& y) {
            return x.timestamp < y.timestamp;  // stable: file order breaks ties
        });
        Trace trace;
        trace.case_id = cid;
        trace.events.reserve(rows.size());
        for (const auto& row : rows) {
            Event ev;
            ev.case_id = cid;
            ev.activity = row.fields[act_col];
            ev.timestamp = row.timestamp;
            alphabet.insert(ev.activity);
            for (size_t a = 0; a < data_cols.size(); ++a) {
                const std::string& raw = row.fields[data_cols[a].index];
                AttributeValue val;
                if (raw.empty()) {
                    val = kinds[a] == AttrKind::Categorical
                              ? AttributeValue::categorical(kMissingLevel)
                              : AttributeValue::missing();
                } else if (kinds[a] == AttrKind::Numeric) {
                    double v;
                    parse_real(raw, v);
                    val = AttributeValue::numeric(v);
                } else {
                    val = AttributeValue::categorical(raw);
                }
                if (val.kind == AttributeValue::Kind::Categorical) level_sets[a].insert(val.text);
                ev.payload.emplace(data_cols[a].name, std::move(val));
            }
            trace.events.push_back(std::move(ev));
        }
        // case attributes must be constant within the trace
        for (size_t a = 0; a < data_cols.size(); ++a) {
            if (data_cols[a].scope != AttrScope::Case) continue;
            const AttributeValue& first = trace.events.front().payload.at(data_cols[a].name);
            for (const auto& ev : trace.events) {
                if (!(ev.payload.at(data_cols[a].name) == first))
                    fail(Errc::InconsistentCaseAttribute,
                         "case attribute \"" + data_cols[a].name + "\" varies within case \"" + cid + "\"");
            }
        }
        log.traces.push_back(std::move(trace));
    }

    log.activity_alphabet.assign(alphabet.begin(), alphabet.end());

    // schema in original column order; the activity column is carried as a
    // categorical event attribute exempt from level filtering
    for (const auto& name : log.column_order) {
        if (name == config.case_id || name == config.timestamp) continue;
        if (name == config.activity) {
            AttributeSchema s;
            s.name = name;
            s.scope = AttrScope::Event;
            s.kind = AttrKind::Categorical;
            s.levels = log.activity_alphabet;
            s.is_activity = true;
            log.schema.push_back(std::move(s));
            continue;
        }
        for (size_t a = 0; a < data_cols.size(); ++a) {
            if (data_cols[a].name != name) continue;
            AttributeSchema s;
            s.name = name;
            s.scope = data_cols[a].scope;
            s.kind = kinds[a];
            s.levels.assign(level_sets[a].begin(), level_sets[a].end());
            log.schema.push_back(std::move(s));
        }
    }
    return log;
}

EventLog parse_event_log_file(const std::string& csv_path, const SchemaConfig& config) {
    std::ifstream in(csv_path, std::ios::binary);
    if (!in) fail(Errc::IoFailure, "cannot open log file: " + csv_path);
    return parse_event_log(in, config);
}

namespace {

const char* kTimeFeatureNames[] = {"month", "weekday", "hour", "elapsed_prev", "elapsed_start", "position"};

void upsert_numeric_event_attr(EventLog& log, const std::string& name) {
    for (auto& s : log.schema)
        if (s.name == name) return;
    AttributeSchema s;
    s.name = name;
    s.scope = AttrScope::Event;
    s.kind = AttrKind::Numeric;
    log.schema.push_back(std::move(s));
}

}  // namespace

EventLog derive_time_features(const EventLog& log) {
    EventLog out = log;
    for (auto& trace : out.traces) {
        double start = trace.events.front().timestamp;
        double prev = start;
        for (size_t i = 0; i < trace.events.size(); ++i) {
            Event& ev = trace.events[i];
            ev.payload["month"] = AttributeValue::numeric(timestamp_month(ev.timestamp));
            ev.payload["weekday"] = AttributeValue::numeric(timestamp_weekday(ev.timestamp));
            ev.payload["hour"] = AttributeValue::numeric(timestamp_hour(ev.timestamp));
            ev.payload["elapsed_prev"] = AttributeValue::numeric(i == 0 ? 0.0 : ev.timestamp - prev);
            ev.payload["elapsed_start"] = AttributeValue::numeric(ev.timestamp - start);
            ev.payload["position"] = AttributeValue::numeric(static_cast<double>(i + 1));
            prev = ev.timestamp;
        }
    }
    for (const char* name : kTimeFeatureNames) upsert_numeric_event_attr(out, name);
    return out;
}

EventLog derive_open_cases(const EventLog& log) {
    EventLog out = log;
    std::vector<double> firsts, lasts;
    firsts.reserve(log.traces.size());
    lasts.reserve(log.traces.size());
    for (const auto& t : log.traces) {
        firsts.push_back(t.events.front().timestamp);
        lasts.push_back(t.events.back().timestamp);
    }
    std::sort(firsts.begin(), firsts.end());
    std::sort(lasts.begin(), lasts.end());
    for (auto& trace : out.traces) {
        for (auto& ev : trace.events) {
            double t = ev.timestamp;
            auto started = std::upper_bound(firsts.begin(), firsts.end(), t) - firsts.begin();
            auto ended = std::lower_bound(lasts.begin(), lasts.end(), t) - lasts.begin();
            ev.payload["open_cases"] = AttributeValue::numeric(static_cast<double>(started - ended));
        }
    }
    upsert_numeric_event_attr(out, "open_cases");
    return out;
}

void write_event_log(const EventLog& log, std::ostream& out) {
    std::vector<std::string> header = log.column_order;
    std::vector<const AttributeSchema*> derived;
    for (const auto& s : log.schema) {
        if (std::find(log.column_order.begin(), log.column_order.end(), s.name) == log.column_order.end()) {
            header.push_back(s.name);
            derived.push_back(&s);
        }
    }
    write_csv_record(out, header);

    std::vector<std::string> fields(header.size());
    for (const auto& trace : log.traces) {
        for (const auto& ev : trace.events) {
            size_t i = 0;
            auto emit_value = [&](const std::string& name) -> std::string {
                if (name == log.case_column) return ev.case_id;
                if (name == log.activity_column) return ev.activity;
                if (name == log.timestamp_column) return format_timestamp(ev.timestamp);
                auto it = ev.payload.find(name);
                if (it == ev.payload.end()) return "";
                switch (it->second.kind) {
                    case AttributeValue::Kind::Missing: return "";
                    case AttributeValue::Kind::Categorical: return it->second.text;
                    case AttributeValue::Kind::Numeric: return format_double(it->second.number);
                }
                return "";
            };
            for (const auto& name : header) fields[i++] = emit_value(name);
            write_csv_record(out, fields);
        }
    }
}

void write_event_log_file(const EventLog& log, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::IoFailure, "cannot open for writing: " + path);
    write_event_log(log, out);
    if (!out.good()) fail(Errc::IoFailure, "write failed: " + path);
}

void rebuild_observed(EventLog& log) {
    std::set<std::string> alphabet;
    std::map<std::string, std::set<std::string>> levels;
    for (const auto& trace : log.traces) {
        for (const auto& ev : trace.events) {
            alphabet.insert(ev.activity);
            for (const auto& [name, val] : ev.payload)
                if (val.kind == AttributeValue::Kind::Categorical) levels[name].insert(val.text);
        }
    }
    log.activity_alphabet.assign(alphabet.begin(), alphabet.end());
    for (auto& s : log.schema) {
        if (s.kind != AttrKind::Categorical) continue;
        if (s.is_activity) {
            s.levels = log.activity_alphabet;
        } else {
            auto it = levels.find(s.name);
            if (it == levels.end()) s.levels.clear();
            else s.levels.assign(it->second.begin(), it->second.end());
        }
    }
}

}  // namespace pxc
