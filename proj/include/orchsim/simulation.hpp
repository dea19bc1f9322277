#pragma once

#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "orchsim/autoscaler.hpp"
#include "orchsim/cluster.hpp"
#include "orchsim/estimator.hpp"
#include "orchsim/kernel.hpp"
#include "orchsim/metrics.hpp"
#include "orchsim/rescheduling.hpp"
#include "orchsim/scenario.hpp"
#include "orchsim/types.hpp"

namespace orchsim {

struct RunResult {
    RunReport report;
    RunLog log;
};

// Wires one scenario onto the event kernel and runs it to completion.
//
// Everything here is deterministic in (scenario, seed): simultaneous
// events dispatch in push order, and all pushes derive from the scenario
// and the seeded generator. The load-bearing ordering decisions:
//
//  - arrival events are pushed at setup before the periodic chains, so a
//    pod submitted at t is visible to the scheduling cycle at t;
//  - the monitoring tick chain is pushed before the cycle chain and both
//    re-arm themselves, so at any shared timestamp the tick samples the
//    queue before the cycle mutates it;
//  - completions, node readiness, requeues and scale-out permits request
//    a same-timestamp reactive scheduling cycle, so freed or added
//    capacity is used the moment it appears instead of waiting out the
//    rest of the cycle period.
class Simulation {
public:
    explicit Simulation(Scenario scenario);

    // Observes cluster state between dispatches; installed by tests that
    // check invariants event by event.
    using Inspector = std::function<void(const Cluster&, const Event&)>;
    void set_inspector(Inspector fn) { inspector_ = std::move(fn); }

    RunResult run();

    const Cluster& cluster() const { return cluster_; }

private:
    struct ServiceRuntime {
        ServiceSpec spec;
        HpaState hpa;
        std::vector<PodIndex> replicas;  // all ever created, in creation order
        std::uint32_t spawned = 0;
    };

    void setup();
    void add_workload_pod(Pod pod);
    PodIndex spawn_service_replica(ServiceRuntime& svc, SimTime t);
    void arm_revocations(NodeIndex node, SimTime from);

    void on_pod_arrival(const Event& ev);
    void on_pod_started(const Event& ev);
    void on_pod_completed(const Event& ev);
    void on_scheduling_cycle(const Event& ev);
    void on_monitoring_tick(const Event& ev);
    void on_node_ready(const Event& ev);
    void on_billing_boundary(const Event& ev);
    void on_preemption_revocation(const Event& ev);
    void on_scale_out_permitted(const Event& ev);

    void do_cycle(SimTime t);
    void request_reactive_cycle(SimTime t);
    void evict_pod(PodIndex pod, SimTime t, const EvictionPlan& plan, ReleaseReason reason);
    void drain_node(NodeIndex node, SimTime t, const DrainPlan& plan);
    std::int64_t worker_count() const;
    bool run_live() const { return active_pods_ > 0; }

    void log_action(LogRecord::Type type, SimTime t, std::string subject, std::string detail = "",
                    std::int64_t value = 0, std::int64_t value2 = 0);

    RunReport build_report(const RunStats& stats);

    Scenario scenario_;
    Kernel kernel_;
    Cluster cluster_;
    UsageEstimator estimator_;
    Rng rng_;
    Rng preemption_root_;
    std::optional<SimpleAutoscaler> simple_autoscaler_;
    std::vector<ServiceRuntime> services_;

    // Pods waiting for placement, FCFS by (submit time, pod index).
    std::set<std::pair<SimTime, PodIndex>> pending_;
    std::vector<std::optional<ResumeMode>> pending_resume_;
    // Time of each pod's first placement; rebinds after eviction do not
    // reset it. Scheduling delay is submit -> first bind.
    std::vector<std::optional<SimTime>> first_bind_;

    MetricsCollector metrics_;
    RunLog log_;
    Inspector inspector_;

    std::uint64_t active_pods_ = 0;  // pods not yet Succeeded or Failed
    std::uint64_t current_event_seq_ = 0;
    bool reactive_cycle_queued_ = false;
    std::optional<SimTime> permit_pushed_at_;
    std::optional<SimTime> last_bind_time_;
    SimTime first_submit_ = 0;
    std::uint64_t dynamic_launches_ = 0;
};

// Convenience wrapper: scenario in, result out, optional seed override.
RunResult run_scenario(Scenario scenario, std::optional<std::uint64_t> seed_override = std::nullopt);

}  // namespace orchsim
