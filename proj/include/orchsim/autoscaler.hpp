#pragma once

#include <optional>
#include <vector>

#include "orchsim/cluster.hpp"
#include "orchsim/scenario.hpp"
#include "orchsim/types.hpp"

namespace orchsim {

struct ScaleOutDecision {
    bool launch = false;
    std::uint32_t template_index = 0;
    // When a launch is rejected only because the interval has not elapsed,
    // the first time one would be allowed again. Lets the driver re-ask at
    // exactly that moment instead of polling.
    std::optional<SimTime> permitted_at;
};

// Serializes scale-out: at most one launch per provisioning interval, one
// node per grant, always the same predefined template. The interval should
// cover the boot delay plus some contingency so a provisioning decision can
// take effect before the next one is made.
class SimpleAutoscaler {
public:
    SimpleAutoscaler(std::uint32_t template_index, SimTime provisioning_interval)
        : template_index_(template_index), interval_(provisioning_interval) {}

    ScaleOutDecision scale_out_request(SimTime t);

    std::optional<SimTime> last_launch() const { return last_launch_; }

private:
    std::uint32_t template_index_;
    SimTime interval_;
    std::optional<SimTime> last_launch_;
};

enum class ReviewOutcome : std::uint8_t { Keep, Drain };

struct ReviewConfig {
    double utilization_threshold = 0.7;
    SimTime checkpoint_rate_mib_s = 256;
};

// Scale-in review, runs only on a node's billing boundary: terminating a
// VM earlier wastes money already spent, so boundaries are the only points
// where giving a machine back is free. Drains iff every bound pod is
// movable, every deadline still holds after eviction + restart, the
// cluster is underutilized, and at least one other Ready node survives to
// take the evicted pods. Throws if called off-boundary.
ReviewOutcome billing_boundary_review(const Cluster& cluster, NodeIndex node, SimTime t, const ReviewConfig& config);

// Deadline slack if the pod is evicted at t and resumes after its
// checkpoint downtime. Pods without a deadline always pass.
bool eviction_preserves_deadline(const Pod& pod, SimTime t, SimTime checkpoint_rate_mib_s);

// Horizontal scaling signal for one service group. Edge-triggered: a
// replica is added the moment mean utilization crosses strictly above the
// threshold and removed when it falls below the lower threshold, so a
// plateau above the threshold scales up once, not every tick.
class HpaState {
public:
    explicit HpaState(const ServiceSpec& spec) : spec_(spec) {}

    // utilization: mean over running replicas of usage/request, in [0, inf).
    // Returns the replica delta: +1, -1 or 0.
    int evaluate(double utilization, std::uint32_t current_replicas);

    const ServiceSpec& spec() const { return spec_; }

private:
    ServiceSpec spec_;
    bool above_ = false;
    bool below_ = false;
};

}  // namespace orchsim
