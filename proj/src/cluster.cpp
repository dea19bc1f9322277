#include "orchsim/cluster.hpp"

#include <algorithm>

#include "orchsim/estimator.hpp"

namespace orchsim {

const char* app_class_name(AppClass v) {
    switch (v) {
        case AppClass::CustomerFacingService: return "customer_facing_service";
        case AppClass::InternalService: return "internal_service";
        case AppClass::BatchAnalytics: return "batch_analytics";
        case AppClass::PreprocessingTask: return "preprocessing_task";
        case AppClass::CronJob: return "cron_job";
    }
    return "unknown";
}

const char* movability_name(Movability v) {
    switch (v) {
        case Movability::MovableStateless: return "movable_stateless";
        case Movability::MovableCheckpointable: return "movable_checkpointable";
        case Movability::Pinned: return "pinned";
    }
    return "unknown";
}

const char* pod_state_name(PodState v) {
    switch (v) {
        case PodState::Pending: return "pending";
        case PodState::Bound: return "bound";
        case PodState::Starting: return "starting";
        case PodState::Running: return "running";
        case PodState::Succeeded: return "succeeded";
        case PodState::Evicted: return "evicted";
        case PodState::Failed: return "failed";
    }
    return "unknown";
}

const char* node_state_name(NodeState v) {
    switch (v) {
        case NodeState::Provisioning: return "provisioning";
        case NodeState::Ready: return "ready";
        case NodeState::Draining: return "draining";
        case NodeState::Terminated: return "terminated";
    }
    return "unknown";
}

const char* pricing_model_name(PricingModel v) {
    switch (v) {
        case PricingModel::Reserved: return "reserved";
        case PricingModel::OnDemand: return "on_demand";
        case PricingModel::Preemptible: return "preemptible";
    }
    return "unknown";
}

const char* release_reason_name(ReleaseReason v) {
    switch (v) {
        case ReleaseReason::Completed: return "completed";
        case ReleaseReason::Evicted: return "evicted";
        case ReleaseReason::Failed: return "failed";
        case ReleaseReason::Revoked: return "revoked";
    }
    return "unknown";
}

std::optional<AppClass> app_class_from_name(const std::string& s) {
    for (AppClass v : {AppClass::CustomerFacingService, AppClass::InternalService, AppClass::BatchAnalytics,
                       AppClass::PreprocessingTask, AppClass::CronJob}) {
        if (s == app_class_name(v)) return v;
    }
    return std::nullopt;
}

std::optional<Movability> movability_from_name(const std::string& s) {
    for (Movability v : {Movability::MovableStateless, Movability::MovableCheckpointable, Movability::Pinned}) {
        if (s == movability_name(v)) return v;
    }
    return std::nullopt;
}

std::optional<PricingModel> pricing_model_from_name(const std::string& s) {
    for (PricingModel v : {PricingModel::Reserved, PricingModel::OnDemand, PricingModel::Preemptible}) {
        if (s == pricing_model_name(v)) return v;
    }
    return std::nullopt;
}

bool is_service_class(AppClass v) {
    return v == AppClass::CustomerFacingService || v == AppClass::InternalService;
}

ResourceVector Pod::usage_at(SimTime t) const {
    ResourceVector u;
    for (const UsagePoint& p : usage_profile) {
        if (p.t > t) break;
        u = p.usage;
    }
    return u;
}

std::uint32_t Cluster::add_template(NodeTemplate tpl) {
    templates_.push_back(std::move(tpl));
    return static_cast<std::uint32_t>(templates_.size() - 1);
}

std::optional<std::uint32_t> Cluster::find_template(const std::string& name) const {
    for (std::uint32_t i = 0; i < templates_.size(); ++i) {
        if (templates_[i].name == name) return i;
    }
    return std::nullopt;
}

PodIndex Cluster::add_pod(Pod pod) {
    pod.index = static_cast<PodIndex>(pods_.size());
    if (!pod.request.non_negative()) {
        throw ValidationError("pod " + pod.id + ": negative resource request");
    }
    if (pod.remaining_duration.has_value() == false && pod.nominal_duration.has_value()) {
        pod.remaining_duration = pod.nominal_duration;
    }
    pods_.push_back(std::move(pod));
    return pods_.back().index;
}

NodeIndex Cluster::provision_node(std::uint32_t template_index, SimTime t) {
    const NodeTemplate& tpl = templates_.at(template_index);
    Node n;
    n.index = static_cast<NodeIndex>(nodes_.size());
    n.id = "node-" + std::to_string(n.index);
    n.template_index = template_index;
    n.state = NodeState::Provisioning;
    n.launch_time = t;
    nodes_.push_back(std::move(n));
    kernel_->push_event(t + tpl.boot_delay, EventKind::NodeReady, nodes_.back().index);
    return nodes_.back().index;
}

NodeIndex Cluster::add_ready_node(std::uint32_t template_index, SimTime t) {
    templates_.at(template_index);  // bounds check
    Node n;
    n.index = static_cast<NodeIndex>(nodes_.size());
    n.id = "node-" + std::to_string(n.index);
    n.template_index = template_index;
    n.state = NodeState::Ready;
    n.launch_time = t;
    n.ready_time = t;
    nodes_.push_back(std::move(n));
    return nodes_.back().index;
}

void Cluster::mark_node_ready(NodeIndex i, SimTime t) {
    Node& n = nodes_.at(i);
    if (n.state != NodeState::Provisioning) {
        throw SimError("mark_node_ready: " + n.id + " is " + node_state_name(n.state));
    }
    n.state = NodeState::Ready;
    n.ready_time = t;
}

void Cluster::start_draining(NodeIndex i) {
    Node& n = nodes_.at(i);
    if (n.state != NodeState::Ready) {
        throw SimError("start_draining: " + n.id + " is " + node_state_name(n.state));
    }
    if (!n.bound_pods.empty()) {
        throw SimError("start_draining: " + n.id + " still holds pods");
    }
    n.state = NodeState::Draining;
}

void Cluster::terminate_node(NodeIndex i, SimTime t) {
    Node& n = nodes_.at(i);
    if (n.state == NodeState::Terminated) {
        throw SimError("terminate_node: " + n.id + " already terminated");
    }
    if (!n.bound_pods.empty()) {
        throw SimError("terminate_node: " + n.id + " still holds pods");
    }
    n.state = NodeState::Terminated;
    n.terminate_time = t;
}

ResourceVector Cluster::free_capacity(NodeIndex i, CapacityMode mode, const UsageEstimator* estimator) const {
    const Node& n = nodes_.at(i);
    if (n.state != NodeState::Ready) {
        throw SimError("free_capacity: " + n.id + " is " + node_state_name(n.state));
    }
    const ResourceVector cap = templates_.at(n.template_index).capacity;
    if (mode == CapacityMode::Requested || estimator == nullptr) {
        return cap - n.used_requests;
    }
    // Opportunistic: reserve the estimated usage (capped at the request)
    // for each bound pod, falling back to the full request when no estimate
    // exists yet.
    ResourceVector reserved;
    for (PodIndex pi : n.bound_pods) {
        const Pod& p = pods_.at(pi);
        reserved += estimator->reservation_for(p);
    }
    return cap - reserved;
}

void Cluster::transition(Pod& p, PodState to) {
    const PodState from = p.state;
    bool ok = false;
    switch (to) {
        case PodState::Pending: ok = (from == PodState::Evicted); break;
        case PodState::Bound: ok = (from == PodState::Pending); break;
        case PodState::Starting: ok = (from == PodState::Bound); break;
        case PodState::Running: ok = (from == PodState::Starting); break;
        case PodState::Succeeded:
        case PodState::Evicted:
        case PodState::Failed:
            ok = (from == PodState::Bound || from == PodState::Starting || from == PodState::Running);
            break;
    }
    if (!ok) {
        throw SimError("pod " + p.id + ": illegal transition " + pod_state_name(from) + " -> " + pod_state_name(to));
    }
    p.state = to;
}

void Cluster::bind_pod(PodIndex pod_i, NodeIndex node_i, SimTime t, CapacityMode mode,
                       const UsageEstimator* estimator) {
    Pod& p = pods_.at(pod_i);
    Node& n = nodes_.at(node_i);
    if (p.state != PodState::Pending) {
        throw SimError("bind_pod: " + p.id + " is " + pod_state_name(p.state));
    }
    if (n.state != NodeState::Ready) {
        throw SimError("bind_pod: " + n.id + " is " + node_state_name(n.state));
    }
    if (t < p.submit_time) {
        throw SimError("bind_pod: " + p.id + " bound before submission");
    }
    if (!p.request.fits_in(free_capacity(node_i, mode, estimator))) {
        throw SimError("bind_pod: " + p.id + " does not fit on " + n.id);
    }
    transition(p, PodState::Bound);
    transition(p, PodState::Starting);
    p.node = node_i;
    p.bind_time = t;
    n.bound_pods.push_back(pod_i);
    n.used_requests += p.request;
    EventHandle h = kernel_->push_event(t + config_.pod_start_overhead, EventKind::PodStarted, pod_i);
    p.started_event_seq = h.seq;
}

void Cluster::mark_pod_running(PodIndex pod_i, SimTime t) {
    Pod& p = pods_.at(pod_i);
    transition(p, PodState::Running);
    p.start_time = t;
}

void Cluster::release_pod(PodIndex pod_i, SimTime t, ReleaseReason reason) {
    Pod& p = pods_.at(pod_i);
    if (!p.node.has_value()) {
        throw SimError("release_pod: " + p.id + " is not bound");
    }
    Node& n = nodes_.at(*p.node);
    auto it = std::find(n.bound_pods.begin(), n.bound_pods.end(), pod_i);
    if (it == n.bound_pods.end()) {
        throw SimError("release_pod: " + p.id + " missing from " + n.id);
    }
    n.bound_pods.erase(it);
    n.used_requests -= p.request;

    switch (reason) {
        case ReleaseReason::Completed:
            transition(p, PodState::Succeeded);
            p.finish_time = t;
            p.remaining_duration = 0;
            break;
        case ReleaseReason::Failed:
            transition(p, PodState::Failed);
            p.finish_time = t;
            break;
        case ReleaseReason::Evicted:
            transition(p, PodState::Evicted);
            ++p.evictions;
            break;
        case ReleaseReason::Revoked:
            // The machine under the pod disappeared. Fault-tolerant pods go
            // back to the queue and start over; the rest are lost.
            if (p.fault_tolerant) {
                transition(p, PodState::Evicted);
                ++p.evictions;
            } else {
                transition(p, PodState::Failed);
                p.finish_time = t;
            }
            break;
    }
    p.node.reset();
    p.started_event_seq.reset();
    p.completed_event_seq.reset();
}

void Cluster::requeue_pod(PodIndex pod_i) {
    Pod& p = pods_.at(pod_i);
    transition(p, PodState::Pending);
    p.bind_time.reset();
    p.start_time.reset();
}

ResourceVector Cluster::total_capacity_ready() const {
    ResourceVector total;
    for (const Node& n : nodes_) {
        if (n.state == NodeState::Ready) total += templates_.at(n.template_index).capacity;
    }
    return total;
}

ResourceVector Cluster::total_bound_requests() const {
    ResourceVector total;
    for (const Node& n : nodes_) total += n.used_requests;
    return total;
}

double Cluster::cpu_utilization() const {
    const ResourceVector cap = total_capacity_ready();
    if (cap.cpu_m == 0) return 0.0;
    return static_cast<double>(total_bound_requests().cpu_m) / static_cast<double>(cap.cpu_m);
}

void Cluster::check_capacity_invariant(bool oversubscription_enabled) const {
    for (const Node& n : nodes_) {
        ResourceVector sum;
        for (PodIndex pi : n.bound_pods) sum += pods_.at(pi).request;
        if (!(sum == n.used_requests)) {
            throw SimError("capacity bookkeeping out of sync on " + n.id);
        }
        if (!oversubscription_enabled && (n.state == NodeState::Ready || n.state == NodeState::Draining) &&
            !sum.fits_in(templates_.at(n.template_index).capacity)) {
            throw SimError("bound requests exceed capacity on " + n.id);
        }
        if (n.state == NodeState::Terminated && !n.bound_pods.empty()) {
            throw SimError("terminated node " + n.id + " holds pods");
        }
    }
}

}  // namespace orchsim
