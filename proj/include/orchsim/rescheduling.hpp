#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orchsim/cluster.hpp"
#include "orchsim/types.hpp"

namespace orchsim {

// How an eviction treats the pod's progress.
enum class ResumeMode : std::uint8_t {
    RestartFromZero,  // stateless: downtime 0, all progress lost
    ResumeRemaining,  // checkpointable: pay checkpoint transfer, keep progress
};

struct EvictionPlan {
    PodIndex pod = 0;
    ResumeMode mode = ResumeMode::RestartFromZero;
    SimTime downtime = 0;  // checkpoint transfer time before the pod may requeue
};

// Migration is checkpoint-kill-resume: the checkpoint transfer dominates
// the downtime, estimated as memory footprint over the checkpoint
// streaming rate, rounded up to whole seconds.
SimTime checkpoint_downtime(const Pod& pod, SimTime checkpoint_rate_mib_s);

// Disposition for evicting one pod. Pinned pods have none: nullopt.
std::optional<EvictionPlan> eviction_plan(const Pod& pod, SimTime checkpoint_rate_mib_s);

struct DrainPlan {
    std::vector<EvictionPlan> evictions;  // in bound order
};

// Plans the eviction of everything on the node. Refuses (nullopt) if any
// bound pod is pinned; a drain must never move what promised not to move.
std::optional<DrainPlan> plan_drain(const Cluster& cluster, NodeIndex node, SimTime checkpoint_rate_mib_s);

// Applies the resume disposition at requeue time: restart-from-zero
// restores the full nominal duration, resume-remaining keeps what was left
// at eviction. A pod whose deadline already passed is requeued anyway but
// flagged as a QoS violation.
void apply_resume(Pod& pod, ResumeMode mode, SimTime t);

// Work left at time t for a running pod, before overheads.
SimTime remaining_at(const Pod& pod, SimTime t);

}  // namespace orchsim
