#pragma once

#include <vector>

#include "orchsim/cluster.hpp"
#include "orchsim/rng.hpp"
#include "orchsim/scenario.hpp"

namespace orchsim {

// Ready nodes with room for the pod under the policy's capacity mode, in
// ascending node order. Cost-aware scheduling additionally refuses to offer
// preemptible machines to customer-facing services: a revocation there is
// a user-visible outage, no matter the price.
std::vector<NodeIndex> filter_nodes(const Cluster& cluster, const Pod& pod, const SchedulerSpec& spec,
                                    const UsageEstimator* estimator);

// Picks one node from a non-empty candidate list.
//
//   random  - uniform draw
//   spread  - least bound cpu requests, lowest index on ties
//   binpack - most bound cpu requests still fitting, lowest index on ties
//   cost_aware - lexicographic (pricing rank for the pod's class,
//                movability-mixing penalty, binpack), lowest index on ties
NodeIndex select_node(const Cluster& cluster, const Pod& pod, const std::vector<NodeIndex>& candidates,
                      const SchedulerSpec& spec, Rng& rng);

struct CycleOutcome {
    std::vector<std::pair<PodIndex, NodeIndex>> bound;  // in binding order
    std::vector<PodIndex> unschedulable;                // still pending, in queue order
};

// One scheduling pass over the pending queue in FCFS submit order. Each pod
// is bound to the selected node immediately (so later pods in the same
// batch see the updated capacity) or recorded as unschedulable and left
// pending. The caller owns follow-up actions such as scale-out requests,
// which should happen at most once per returned batch.
CycleOutcome run_cycle(Cluster& cluster, const std::vector<PodIndex>& pending_fcfs, const SchedulerSpec& spec,
                       Rng& rng, SimTime t, const UsageEstimator* estimator);

}  // namespace orchsim
