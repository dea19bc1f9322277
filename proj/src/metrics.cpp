#include "orchsim/metrics.hpp"

#include <sstream>

#include <json.hpp>

namespace orchsim {

using nlohmann::json;

namespace {

const char* record_type_name(LogRecord::Type t) {
    switch (t) {
        case LogRecord::Type::Event: return "event";
        case LogRecord::Type::Bind: return "bind";
        case LogRecord::Type::Release: return "release";
        case LogRecord::Type::Provision: return "provision";
        case LogRecord::Type::NodeReady: return "node_ready";
        case LogRecord::Type::Drain: return "drain";
        case LogRecord::Type::Terminate: return "terminate";
        case LogRecord::Type::Requeue: return "requeue";
        case LogRecord::Type::Sample: return "sample";
    }
    return "unknown";
}

}  // namespace

std::string LogRecord::to_json_line() const {
    json j;
    j["t"] = t;
    j["seq"] = seq;
    j["type"] = record_type_name(type);
    if (!kind.empty()) j["kind"] = kind;
    if (!subject.empty()) j["subject"] = subject;
    if (!detail.empty()) j["detail"] = detail;
    if (type == Type::Sample) {
        j["pending"] = value;
        j["workers"] = value2;
    }
    return j.dump();
}

std::string RunLog::to_jsonl() const {
    std::ostringstream out;
    for (const LogRecord& rec : records) out << rec.to_json_line() << "\n";
    return out.str();
}

std::string RunReport::to_json() const {
    json j;
    j["scenario"] = scenario;
    j["seed"] = seed;
    j["pods"] = {
        {"submitted", pods_submitted}, {"bound", pods_bound},       {"succeeded", pods_succeeded},
        {"failed", pods_failed},       {"unbound", pods_unbound},
    };
    j["avg_scheduling_delay_min"] = avg_scheduling_delay_min;
    j["avg_scheduling_delay_s_sum"] = avg_delay_numerator_s;
    j["total_scheduling_duration_min"] = total_scheduling_duration_min;
    j["total_scheduling_duration_s"] = total_scheduling_duration_s;
    j["throughput_pods_per_min"] = throughput_pods_per_min;
    j["duration_degenerate"] = duration_degenerate;
    j["cost_micro_usd"] = cost_micro;
    j["cost_usd"] = cost_usd;
    j["qos_violations"] = qos_violations;
    j["evictions"] = evictions;
    j["launches"] = launches;
    j["workers_final"] = workers_final;
    json ev = json::object();
    for (std::size_t k = 0; k < k_event_kind_count; ++k) {
        if (events_dispatched[k] > 0) ev[event_kind_name(static_cast<EventKind>(k))] = events_dispatched[k];
    }
    j["events_dispatched"] = ev;
    return j.dump(2) + "\n";
}

std::string RunReport::series_csv(bool workers) const {
    const std::vector<SeriesPoint>& series = workers ? worker_series : pending_series;
    std::ostringstream out;
    out << "t_s,count\n";
    for (const SeriesPoint& p : series) out << p.t << ',' << p.count << "\n";
    return out.str();
}

// The replay walks records in order and maintains the same counters the
// live collector saw: a pod is pending from submission (arrival record or
// requeue record) until a bind names it; workers count provisions minus
// terminations.
std::vector<SeriesPoint> replay_pending_series(const RunLog& log) {
    std::vector<SeriesPoint> series;
    std::int64_t pending = 0;
    for (const LogRecord& rec : log.records) {
        switch (rec.type) {
            case LogRecord::Type::Event:
                if (rec.kind == "pod_arrival" && rec.detail == "submit") ++pending;
                break;
            case LogRecord::Type::Requeue:
                ++pending;
                break;
            case LogRecord::Type::Bind:
                --pending;
                break;
            case LogRecord::Type::Sample:
                series.push_back({rec.t, pending});
                break;
            default:
                break;
        }
    }
    return series;
}

std::vector<SeriesPoint> replay_worker_series(const RunLog& log) {
    std::vector<SeriesPoint> series;
    std::int64_t workers = 0;
    for (const LogRecord& rec : log.records) {
        switch (rec.type) {
            case LogRecord::Type::Provision:
                ++workers;
                break;
            case LogRecord::Type::Terminate:
                --workers;
                break;
            case LogRecord::Type::Sample:
                series.push_back({rec.t, workers});
                break;
            default:
                break;
        }
    }
    return series;
}

}  // namespace orchsim
