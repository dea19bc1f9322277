#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orchsim/accounting.hpp"
#include "orchsim/cluster.hpp"
#include "orchsim/kernel.hpp"
#include "orchsim/types.hpp"

namespace orchsim {

// One line of the run trace: either a dispatched kernel event or a state
// action taken while handling it. Records appear in execution order, so a
// replay of the trace reconstructs every intermediate state the run went
// through.
struct LogRecord {
    enum class Type : std::uint8_t {
        Event,      // kernel dispatch
        Bind,       // pod -> node
        Release,    // pod leaves node (detail = reason)
        Provision,  // node created (detail = template)
        NodeReady,
        Drain,      // node enters draining
        Terminate,  // node gone
        Requeue,    // evicted pod re-enters pending
        Sample,     // monitoring sample (pending count, worker count)
    };

    Type type = Type::Event;
    SimTime t = 0;
    std::uint64_t seq = 0;  // seq of the causing kernel event
    std::string kind;       // event kind name, for Type::Event
    std::string subject;    // pod or node id
    std::string detail;
    std::int64_t value = 0;   // Sample: pending count
    std::int64_t value2 = 0;  // Sample: worker count

    std::string to_json_line() const;
};

struct RunLog {
    std::vector<LogRecord> records;

    void add(LogRecord rec) { records.push_back(std::move(rec)); }
    std::string to_jsonl() const;
};

struct SeriesPoint {
    SimTime t = 0;
    std::int64_t count = 0;
    bool operator==(const SeriesPoint&) const = default;
};

// Table-style results for one run. Delay and duration are reported in
// minutes to match cluster-operations dashboards; the raw second values
// stay alongside so nothing is lost to unit conversion.
struct RunReport {
    std::string scenario;
    std::uint64_t seed = 0;
    std::uint64_t pods_submitted = 0;
    std::uint64_t pods_bound = 0;
    std::uint64_t pods_succeeded = 0;
    std::uint64_t pods_failed = 0;
    std::uint64_t pods_unbound = 0;  // never bound by end of run

    SimTime avg_delay_numerator_s = 0;  // sum of (bind - submit) over bound pods
    double avg_scheduling_delay_min = 0.0;
    SimTime total_scheduling_duration_s = 0;
    double total_scheduling_duration_min = 0.0;
    double throughput_pods_per_min = 0.0;
    bool duration_degenerate = false;  // no bindings, or single instant: see README

    Money cost_micro = 0;
    std::string cost_usd;

    std::uint64_t qos_violations = 0;
    std::uint64_t evictions = 0;
    std::uint64_t launches = 0;
    std::uint64_t workers_final = 0;  // provisioning + ready at end of run

    std::vector<SeriesPoint> pending_series;
    std::vector<SeriesPoint> worker_series;

    std::array<std::uint64_t, k_event_kind_count> events_dispatched{};

    std::string to_json() const;                    // deterministic, sorted keys
    std::string series_csv(bool workers) const;     // "t_s,count" table
};

// Collects the periodic monitoring samples during a run.
class MetricsCollector {
public:
    void sample(SimTime t, std::int64_t pending, std::int64_t workers) {
        pending_series_.push_back({t, pending});
        worker_series_.push_back({t, workers});
    }

    const std::vector<SeriesPoint>& pending_series() const { return pending_series_; }
    const std::vector<SeriesPoint>& worker_series() const { return worker_series_; }

private:
    std::vector<SeriesPoint> pending_series_;
    std::vector<SeriesPoint> worker_series_;
};

// Recomputes both series from the trace alone; used to prove the sampled
// series are a pure function of the log.
std::vector<SeriesPoint> replay_pending_series(const RunLog& log);
std::vector<SeriesPoint> replay_worker_series(const RunLog& log);

}  // namespace orchsim
