#include "pxc/prefixing.hpp"

#include <algorithm>
#include <cmath>

#include "pxc/errors.hpp"

namespace pxc {

PrefixLog build_prefix_log(const EventLog& log, const std::map<std::string, int>& labels,
                           int min_len, int max_len, int gap) {
    if (min_len < 1 || max_len < min_len || gap < 1)
        fail(Errc::InvalidParams, "need max_len >= min_len >= 1 and gap >= 1");

    PrefixLog out;
    out.params = {min_len, max_len, gap};
    for (const auto& trace : log.traces) {
        auto it = labels.find(trace.case_id);
        if (it == labels.end()) fail(Errc::MissingLabel, "no label for case \"" + trace.case_id + "\"");
        auto shared = std::make_shared<const Trace>(trace);
        int limit = std::min(max_len, static_cast<int>(trace.events.size()));
        for (int l = min_len; l <= limit; l += gap)
            out.instances.push_back({shared, l, it->second});
    }
    return out;
}

int compute_max_eval_length(const EventLog& log, const std::map<std::string, int>& labels,
                            double quantile, int hard_cap) {
    std::vector<int> lengths[2];
    for (const auto& trace : log.traces) {
        auto it = labels.find(trace.case_id);
        if (it == labels.end()) fail(Errc::MissingLabel, "no label for case \"" + trace.case_id + "\"");
        lengths[it->second].push_back(static_cast<int>(trace.events.size()));
    }
    if (lengths[0].empty() || lengths[1].empty())
        fail(Errc::SingleClass, "both classes required to compute the evaluation length");

    // tie goes to class 1
    int minority = lengths[1].size() <= lengths[0].size() ? 1 : 0;
    auto& ls = lengths[minority];
    std::sort(ls.begin(), ls.end());
    auto need = static_cast<size_t>(std::ceil(quantile * static_cast<double>(ls.size()) - 1e-9));
    need = std::max<size_t>(1, std::min(need, ls.size()));
    return std::min(hard_cap, ls[need - 1]);
}

}  // namespace pxc
