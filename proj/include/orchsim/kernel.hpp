#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <vector>

#include "orchsim/types.hpp"

namespace orchsim {

enum class EventKind : std::uint8_t {
    PodArrival,
    PodStarted,
    PodCompleted,
    SchedulingCycle,
    MonitoringTick,
    NodeReady,
    BillingBoundary,
    PreemptionRevocation,
    ScaleOutPermitted,
};

constexpr std::size_t k_event_kind_count = 9;

const char* event_kind_name(EventKind kind);

struct Event {
    SimTime time = 0;
    std::uint64_t seq = 0;  // global insertion counter, breaks time ties
    EventKind kind = EventKind::PodArrival;
    std::uint32_t subject = 0;  // pod or node index, meaning depends on kind
};

struct EventHandle {
    SimTime time = 0;
    std::uint64_t seq = 0;
};

// Dispatch totals returned by run_until, indexed by EventKind.
struct RunStats {
    std::array<std::uint64_t, k_event_kind_count> dispatched{};
    std::uint64_t total = 0;
    SimTime last_event_time = 0;
};

// Discrete-event core: a clock and a queue ordered by (time, seq).
//
// seq is assigned at push, so simultaneous events dispatch in insertion
// order and every run over the same push sequence replays identically.
// Handlers may push new events at the current clock or later; pushing into
// the past is a causality violation and throws.
class Kernel {
public:
    using Handler = std::function<void(const Event&)>;
    using Observer = std::function<void(const Event&)>;

    SimTime now() const { return clock_; }
    bool empty() const { return queue_.empty(); }
    std::size_t queued() const { return queue_.size(); }

    void register_handler(EventKind kind, Handler fn) { handlers_[static_cast<std::size_t>(kind)] = std::move(fn); }

    // Called before each event is handed to its handler. Used for trace
    // capture and invariant probes in tests.
    void set_observer(Observer fn) { observer_ = std::move(fn); }

    EventHandle push_event(SimTime time, EventKind kind, std::uint32_t subject);

    // Dispatches events in (time, seq) order until the queue is empty or the
    // next event lies beyond t_end. The clock follows the last dispatched
    // event and never moves backwards; with nothing dispatched it stays put.
    RunStats run_until(SimTime t_end = std::numeric_limits<SimTime>::max());

private:
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            if (a.time != b.time) return a.time > b.time;
            return a.seq > b.seq;
        }
    };

    SimTime clock_ = 0;
    std::uint64_t next_seq_ = 0;
    std::priority_queue<Event, std::vector<Event>, Later> queue_;
    std::array<Handler, k_event_kind_count> handlers_{};
    Observer observer_;
};

}  // namespace orchsim
