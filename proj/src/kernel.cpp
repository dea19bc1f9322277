#include "orchsim/kernel.hpp"

#include <string>

namespace orchsim {

const char* event_kind_name(EventKind kind) {
    switch (kind) {
        case EventKind::PodArrival: return "pod_arrival";
        case EventKind::PodStarted: return "pod_started";
        case EventKind::PodCompleted: return "pod_completed";
        case EventKind::SchedulingCycle: return "scheduling_cycle";
        case EventKind::MonitoringTick: return "monitoring_tick";
        case EventKind::NodeReady: return "node_ready";
        case EventKind::BillingBoundary: return "billing_boundary";
        case EventKind::PreemptionRevocation: return "preemption_revocation";
        case EventKind::ScaleOutPermitted: return "scale_out_permitted";
    }
    return "unknown";
}

EventHandle Kernel::push_event(SimTime time, EventKind kind, std::uint32_t subject) {
    if (time < clock_) {
        throw SimError("push_event: event at t=" + std::to_string(time) + " is before clock t=" +
                       std::to_string(clock_));
    }
    Event ev{time, next_seq_++, kind, subject};
    queue_.push(ev);
    return {ev.time, ev.seq};
}

RunStats Kernel::run_until(SimTime t_end) {
    RunStats stats;
    while (!queue_.empty() && queue_.top().time <= t_end) {
        Event ev = queue_.top();
        queue_.pop();
        clock_ = ev.time;
        if (observer_) observer_(ev);
        const Handler& fn = handlers_[static_cast<std::size_t>(ev.kind)];
        if (!fn) {
            throw SimError(std::string("run_until: no handler registered for ") + event_kind_name(ev.kind));
        }
        fn(ev);
        ++stats.dispatched[static_cast<std::size_t>(ev.kind)];
        ++stats.total;
        stats.last_event_time = ev.time;
    }
    return stats;
}

}  // namespace orchsim
