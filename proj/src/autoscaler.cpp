#include "orchsim/autoscaler.hpp"

#include "orchsim/rescheduling.hpp"

namespace orchsim {

ScaleOutDecision SimpleAutoscaler::scale_out_request(SimTime t) {
    ScaleOutDecision d;
    d.template_index = template_index_;
    if (!last_launch_ || t - *last_launch_ >= interval_) {
        d.launch = true;
        last_launch_ = t;
        return d;
    }
    d.permitted_at = *last_launch_ + interval_;
    return d;
}

bool eviction_preserves_deadline(const Pod& pod, SimTime t, SimTime checkpoint_rate_mib_s) {
    if (!pod.deadline) return true;
    std::optional<EvictionPlan> plan = eviction_plan(pod, checkpoint_rate_mib_s);
    if (!plan) return false;  // pinned: eviction not even possible
    SimTime rework = plan->mode == ResumeMode::RestartFromZero ? pod.nominal_duration.value_or(0)
                                                               : remaining_at(pod, t);
    // Assumes the pod rebinds as soon as its downtime ends; queueing delay
    // after the requeue is not modelled here.
    const SimTime finish = t + plan->downtime + rework;
    return finish <= *pod.deadline;
}

ReviewOutcome billing_boundary_review(const Cluster& cluster, NodeIndex node_i, SimTime t,
                                      const ReviewConfig& config) {
    const Node& n = cluster.node(node_i);
    const NodeTemplate& tpl = cluster.node_template(n.template_index);
    if (t < n.launch_time || (t - n.launch_time) % tpl.billing_period != 0) {
        throw SimError("billing_boundary_review: t=" + std::to_string(t) + " is not a billing boundary of " + n.id);
    }
    if (n.state != NodeState::Ready) return ReviewOutcome::Keep;

    for (PodIndex pi : n.bound_pods) {
        const Pod& p = cluster.pod(pi);
        if (p.movability == Movability::Pinned) return ReviewOutcome::Keep;
        if (!eviction_preserves_deadline(p, t, config.checkpoint_rate_mib_s)) return ReviewOutcome::Keep;
    }

    if (cluster.cpu_utilization() >= config.utilization_threshold) return ReviewOutcome::Keep;

    if (!n.bound_pods.empty()) {
        // The evicted pods will need somewhere to go; draining the last
        // Ready node would strand them with no autoscaler obliged to help.
        bool other_ready = false;
        for (const Node& other : cluster.nodes()) {
            if (other.index != node_i && other.state == NodeState::Ready) {
                other_ready = true;
                break;
            }
        }
        if (!other_ready) return ReviewOutcome::Keep;
    }
    return ReviewOutcome::Drain;
}

int HpaState::evaluate(double utilization, std::uint32_t current_replicas) {
    const bool now_above = utilization > spec_.threshold;
    const bool now_below = spec_.lower_threshold > 0.0 && utilization < spec_.lower_threshold;
    int delta = 0;
    if (now_above && !above_ && current_replicas < spec_.max_replicas) {
        delta = 1;
    } else if (now_below && !below_ && current_replicas > spec_.min_replicas) {
        delta = -1;
    }
    above_ = now_above;
    below_ = now_below;
    return delta;
}

}  // namespace orchsim
