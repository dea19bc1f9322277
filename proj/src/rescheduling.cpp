#include "orchsim/rescheduling.hpp"

namespace orchsim {

SimTime checkpoint_downtime(const Pod& pod, SimTime checkpoint_rate_mib_s) {
    if (checkpoint_rate_mib_s == 0) {
        throw SimError("checkpoint_downtime: zero checkpoint rate");
    }
    const SimTime mem = static_cast<SimTime>(pod.request.mem_mib);
    return (mem + checkpoint_rate_mib_s - 1) / checkpoint_rate_mib_s;  // ceil
}

std::optional<EvictionPlan> eviction_plan(const Pod& pod, SimTime checkpoint_rate_mib_s) {
    switch (pod.movability) {
        case Movability::MovableStateless:
            return EvictionPlan{pod.index, ResumeMode::RestartFromZero, 0};
        case Movability::MovableCheckpointable:
            return EvictionPlan{pod.index, ResumeMode::ResumeRemaining, checkpoint_downtime(pod, checkpoint_rate_mib_s)};
        case Movability::Pinned:
            return std::nullopt;
    }
    return std::nullopt;
}

std::optional<DrainPlan> plan_drain(const Cluster& cluster, NodeIndex node, SimTime checkpoint_rate_mib_s) {
    const Node& n = cluster.node(node);
    DrainPlan plan;
    for (PodIndex pi : n.bound_pods) {
        std::optional<EvictionPlan> ev = eviction_plan(cluster.pod(pi), checkpoint_rate_mib_s);
        if (!ev) return std::nullopt;  // pinned pod on board
        plan.evictions.push_back(*ev);
    }
    return plan;
}

SimTime remaining_at(const Pod& pod, SimTime t) {
    const SimTime total = pod.remaining_duration.value_or(pod.nominal_duration.value_or(0));
    if (!pod.start_time || t <= *pod.start_time) return total;
    const SimTime executed = t - *pod.start_time;
    return executed >= total ? 0 : total - executed;
}

void apply_resume(Pod& pod, ResumeMode mode, SimTime t) {
    if (mode == ResumeMode::RestartFromZero) {
        pod.remaining_duration = pod.nominal_duration;
    }
    // ResumeRemaining: remaining_duration was fixed at eviction time.
    if (pod.deadline && t > *pod.deadline) {
        pod.qos_violated = true;
    }
}

}  // namespace orchsim
