#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orchsim/kernel.hpp"
#include "orchsim/types.hpp"

namespace orchsim {

class UsageEstimator;

enum class AppClass : std::uint8_t {
    CustomerFacingService,
    InternalService,
    BatchAnalytics,
    PreprocessingTask,
    CronJob,
};

enum class Movability : std::uint8_t {
    MovableStateless,      // can be killed anywhere and restarted from zero
    MovableCheckpointable, // can be checkpointed and resumed where it left off
    Pinned,                // must never be moved by the platform
};

enum class PodState : std::uint8_t {
    Pending,
    Bound,
    Starting,
    Running,
    Succeeded,
    Evicted,
    Failed,
};

enum class NodeState : std::uint8_t {
    Provisioning,
    Ready,
    Draining,
    Terminated,
};

enum class PricingModel : std::uint8_t {
    Reserved,
    OnDemand,
    Preemptible,
};

enum class ReleaseReason : std::uint8_t {
    Completed,
    Evicted,
    Failed,
    Revoked,
};

enum class CapacityMode : std::uint8_t {
    Requested,      // free = capacity - sum of bound requests
    Opportunistic,  // free = capacity - sum of usage reservations
};

const char* app_class_name(AppClass v);
const char* movability_name(Movability v);
const char* pod_state_name(PodState v);
const char* node_state_name(NodeState v);
const char* pricing_model_name(PricingModel v);
const char* release_reason_name(ReleaseReason v);

std::optional<AppClass> app_class_from_name(const std::string& s);
std::optional<Movability> movability_from_name(const std::string& s);
std::optional<PricingModel> pricing_model_from_name(const std::string& s);

bool is_service_class(AppClass v);

// One point of a piecewise-constant usage profile: from t onward the pod
// consumes this much until the next point takes over.
struct UsagePoint {
    SimTime t = 0;
    ResourceVector usage;
};

struct Pod {
    PodIndex index = 0;
    std::string id;
    SimTime submit_time = 0;
    ResourceVector request;
    // Nominal run length once started. Unset means the pod runs until the
    // horizon (long-lived service replica).
    std::optional<SimTime> nominal_duration;
    AppClass app_class = AppClass::BatchAnalytics;
    Movability movability = Movability::MovableStateless;
    bool fault_tolerant = true;
    std::optional<SimTime> deadline;
    std::vector<UsagePoint> usage_profile;

    PodState state = PodState::Pending;
    std::optional<NodeIndex> node;
    std::optional<SimTime> bind_time;
    std::optional<SimTime> start_time;
    std::optional<SimTime> finish_time;
    // Work left to run the next time the pod starts. Checkpoint-resumed
    // pods carry the unfinished remainder; stateless restarts reset to the
    // nominal duration.
    std::optional<SimTime> remaining_duration;
    std::uint32_t evictions = 0;
    bool qos_violated = false;

    // seq of the pending PodStarted / PodCompleted event for the current
    // placement. An event whose seq no longer matches is stale (the pod was
    // released in between) and must be ignored.
    std::optional<std::uint64_t> started_event_seq;
    std::optional<std::uint64_t> completed_event_seq;

    ResourceVector usage_at(SimTime t) const;
};

struct NodeTemplate {
    std::string name;
    ResourceVector capacity;
    PricingModel pricing = PricingModel::OnDemand;
    Money rate_micro = 0;            // per billing period (Reserved: flat, once)
    std::uint32_t discount_ppm = 1000000;  // preemptible rebate, parts per million of rate
    SimTime billing_period = 60;
    SimTime boot_delay = 90;
};

struct Node {
    NodeIndex index = 0;
    std::string id;
    std::uint32_t template_index = 0;
    NodeState state = NodeState::Provisioning;
    SimTime launch_time = 0;  // billing starts here
    std::optional<SimTime> ready_time;
    std::optional<SimTime> terminate_time;
    std::vector<PodIndex> bound_pods;
    ResourceVector used_requests;  // running sum of bound pod requests
};

struct ClusterConfig {
    SimTime pod_start_overhead = 0;  // bind -> running
    SimTime runtime_overhead = 25;   // added to every pod execution
};

// Mutable cluster state: the node fleet, the pod table, and the capacity
// bookkeeping. Event follow-ups (NodeReady, PodStarted) are queued on the
// kernel; interpreting them is the driver's job.
class Cluster {
public:
    Cluster(Kernel& kernel, ClusterConfig config) : kernel_(&kernel), config_(config) {}

    const ClusterConfig& config() const { return config_; }

    std::uint32_t add_template(NodeTemplate tpl);
    const NodeTemplate& node_template(std::uint32_t index) const { return templates_.at(index); }
    const std::vector<NodeTemplate>& templates() const { return templates_; }
    std::optional<std::uint32_t> find_template(const std::string& name) const;

    PodIndex add_pod(Pod pod);
    Pod& pod(PodIndex i) { return pods_.at(i); }
    const Pod& pod(PodIndex i) const { return pods_.at(i); }
    std::size_t pod_count() const { return pods_.size(); }

    Node& node(NodeIndex i) { return nodes_.at(i); }
    const Node& node(NodeIndex i) const { return nodes_.at(i); }
    std::size_t node_count() const { return nodes_.size(); }
    const std::vector<Node>& nodes() const { return nodes_; }

    // Creates a node from the template and queues its NodeReady at
    // t + boot_delay. Billing runs from t regardless of readiness.
    NodeIndex provision_node(std::uint32_t template_index, SimTime t);

    // Creates a node that is already Ready at t, for the initial fleet.
    NodeIndex add_ready_node(std::uint32_t template_index, SimTime t);

    void mark_node_ready(NodeIndex i, SimTime t);

    // Begins shutdown: no new binds. The node must already be empty of
    // bound pods; eviction is the rescheduler's job.
    void start_draining(NodeIndex i);
    void terminate_node(NodeIndex i, SimTime t);

    // Capacity left on a Ready node under the given accounting mode. The
    // opportunistic mode replaces each running pod's request with its usage
    // reservation (estimate capped at request) and is never smaller than
    // the requested mode would report.
    ResourceVector free_capacity(NodeIndex i, CapacityMode mode, const UsageEstimator* estimator = nullptr) const;

    // Binds a Pending pod to a Ready node at t and queues PodStarted at
    // t + pod_start_overhead. The pod must fit in free_capacity under the
    // given mode.
    void bind_pod(PodIndex pod, NodeIndex node, SimTime t, CapacityMode mode = CapacityMode::Requested,
                  const UsageEstimator* estimator = nullptr);

    // Transition Starting -> Running; records start_time.
    void mark_pod_running(PodIndex pod, SimTime t);

    // Removes the pod from its node and resolves its state: Completed ->
    // Succeeded, Failed -> Failed, Evicted -> Evicted, Revoked -> Evicted
    // for fault-tolerant pods and Failed otherwise. Requeueing an Evicted
    // pod is the rescheduler's decision, not ours.
    void release_pod(PodIndex pod, SimTime t, ReleaseReason reason);

    // Re-enters an Evicted pod into Pending.
    void requeue_pod(PodIndex pod);

    ResourceVector total_capacity_ready() const;
    ResourceVector total_bound_requests() const;

    // Fraction of Ready cpu capacity covered by bound requests, in [0, inf).
    double cpu_utilization() const;

    // Throws SimError if any node's request bookkeeping disagrees with its
    // bound pod set, or if requests exceed capacity while oversubscription
    // is disabled.
    void check_capacity_invariant(bool oversubscription_enabled = false) const;

private:
    void transition(Pod& p, PodState to);

    Kernel* kernel_;
    ClusterConfig config_;
    std::vector<NodeTemplate> templates_;
    std::vector<Node> nodes_;
    std::vector<Pod> pods_;
};

}  // namespace orchsim
