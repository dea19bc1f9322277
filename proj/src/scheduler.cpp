#include "orchsim/scheduler.hpp"

#include <limits>

#include "orchsim/estimator.hpp"

namespace orchsim {

std::vector<NodeIndex> filter_nodes(const Cluster& cluster, const Pod& pod, const SchedulerSpec& spec,
                                    const UsageEstimator* estimator) {
    std::vector<NodeIndex> out;
    for (NodeIndex i = 0; i < cluster.node_count(); ++i) {
        const Node& n = cluster.node(i);
        if (n.state != NodeState::Ready) continue;
        if (spec.kind == SchedulerKind::CostAware && pod.app_class == AppClass::CustomerFacingService &&
            cluster.node_template(n.template_index).pricing == PricingModel::Preemptible) {
            continue;
        }
        if (pod.request.fits_in(cluster.free_capacity(i, spec.capacity_mode, estimator))) {
            out.push_back(i);
        }
    }
    return out;
}

namespace {

// Lower rank = more preferred pricing for this pod. Services belong on
// stable capacity; fault-tolerant batch work soaks up the rebated
// preemptible pool first.
std::int64_t pricing_rank(const Pod& pod, PricingModel pricing, const SchedulerSpec& spec) {
    std::int64_t rank = 0;
    if (is_service_class(pod.app_class)) {
        switch (pricing) {
            case PricingModel::Reserved: rank = 0; break;
            case PricingModel::OnDemand: rank = 1 + spec.on_demand_penalty; break;
            case PricingModel::Preemptible: rank = 2 + spec.on_demand_penalty; break;
        }
    } else if (pod.fault_tolerant) {
        switch (pricing) {
            case PricingModel::Preemptible: rank = 0; break;
            case PricingModel::OnDemand: rank = 1; break;
            case PricingModel::Reserved: rank = 2; break;
        }
    } else {
        switch (pricing) {
            case PricingModel::Reserved: rank = 0; break;
            case PricingModel::OnDemand: rank = 1; break;
            case PricingModel::Preemptible: rank = 2; break;
        }
    }
    return rank;
}

// Penalty for mixing movable and pinned workloads on one machine: such
// nodes can neither be drained (pinned stays) nor safely committed to
// long-lived placement (movable churns).
std::int64_t mixing_cost(const Cluster& cluster, const Pod& pod, const Node& n, const SchedulerSpec& spec) {
    bool pod_movable = pod.movability != Movability::Pinned;
    bool node_has_pinned = false;
    bool node_has_movable = false;
    for (PodIndex pi : n.bound_pods) {
        if (cluster.pod(pi).movability == Movability::Pinned) {
            node_has_pinned = true;
        } else {
            node_has_movable = true;
        }
    }
    if ((pod_movable && node_has_pinned) || (!pod_movable && node_has_movable)) {
        return spec.mixing_penalty;
    }
    return 0;
}

}  // namespace

NodeIndex select_node(const Cluster& cluster, const Pod& pod, const std::vector<NodeIndex>& candidates,
                      const SchedulerSpec& spec, Rng& rng) {
    if (candidates.empty()) {
        throw SimError("select_node: empty candidate list for " + pod.id);
    }
    switch (spec.kind) {
        case SchedulerKind::Random:
            return candidates[rng.bounded(candidates.size())];
        case SchedulerKind::Spread: {
            NodeIndex best = candidates[0];
            std::int64_t best_load = std::numeric_limits<std::int64_t>::max();
            for (NodeIndex i : candidates) {
                std::int64_t load = cluster.node(i).used_requests.cpu_m;
                if (load < best_load) {
                    best_load = load;
                    best = i;
                }
            }
            return best;
        }
        case SchedulerKind::BinPack: {
            NodeIndex best = candidates[0];
            std::int64_t best_load = -1;
            for (NodeIndex i : candidates) {
                std::int64_t load = cluster.node(i).used_requests.cpu_m;
                if (load > best_load) {
                    best_load = load;
                    best = i;
                }
            }
            return best;
        }
        case SchedulerKind::CostAware: {
            NodeIndex best = candidates[0];
            // key: (pricing rank, mixing, -load); smaller wins, first
            // candidate (= lowest node index) wins ties.
            std::int64_t bk0 = std::numeric_limits<std::int64_t>::max();
            std::int64_t bk1 = 0, bk2 = 0;
            for (NodeIndex i : candidates) {
                const Node& n = cluster.node(i);
                std::int64_t k0 = pricing_rank(pod, cluster.node_template(n.template_index).pricing, spec);
                std::int64_t k1 = mixing_cost(cluster, pod, n, spec);
                std::int64_t k2 = -n.used_requests.cpu_m;
                if (std::tie(k0, k1, k2) < std::tie(bk0, bk1, bk2)) {
                    bk0 = k0;
                    bk1 = k1;
                    bk2 = k2;
                    best = i;
                }
            }
            return best;
        }
    }
    throw SimError("select_node: unknown policy");
}

CycleOutcome run_cycle(Cluster& cluster, const std::vector<PodIndex>& pending_fcfs, const SchedulerSpec& spec,
                       Rng& rng, SimTime t, const UsageEstimator* estimator) {
    CycleOutcome outcome;
    for (PodIndex pi : pending_fcfs) {
        const Pod& pod = cluster.pod(pi);
        if (pod.state != PodState::Pending) {
            throw SimError("run_cycle: " + pod.id + " in queue but " + pod_state_name(pod.state));
        }
        std::vector<NodeIndex> candidates = filter_nodes(cluster, pod, spec, estimator);
        if (candidates.empty()) {
            outcome.unschedulable.push_back(pi);
            continue;
        }
        NodeIndex target = select_node(cluster, pod, candidates, spec, rng);
        cluster.bind_pod(pi, target, t, spec.capacity_mode, estimator);
        outcome.bound.emplace_back(pi, target);
    }
    return outcome;
}

}  // namespace orchsim
