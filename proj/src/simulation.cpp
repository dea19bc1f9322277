#include "orchsim/simulation.hpp"

#include <algorithm>
#include <limits>

#include "orchsim/accounting.hpp"
#include "orchsim/scheduler.hpp"
#include "orchsim/workload.hpp"

namespace orchsim {

Simulation::Simulation(Scenario scenario)
    : scenario_(std::move(scenario)),
      cluster_(kernel_, scenario_.overheads),
      estimator_(scenario_.estimator),
      rng_(scenario_.seed),
      // Fixed tag, derived before any scheduling draw, so the revocation
      // clocks are independent of how many random choices the scheduler
      // makes along the way.
      preemption_root_(rng_.derive(1)) {}

void Simulation::setup() {
    kernel_.register_handler(EventKind::PodArrival, [this](const Event& e) { on_pod_arrival(e); });
    kernel_.register_handler(EventKind::PodStarted, [this](const Event& e) { on_pod_started(e); });
    kernel_.register_handler(EventKind::PodCompleted, [this](const Event& e) { on_pod_completed(e); });
    kernel_.register_handler(EventKind::SchedulingCycle, [this](const Event& e) { on_scheduling_cycle(e); });
    kernel_.register_handler(EventKind::MonitoringTick, [this](const Event& e) { on_monitoring_tick(e); });
    kernel_.register_handler(EventKind::NodeReady, [this](const Event& e) { on_node_ready(e); });
    kernel_.register_handler(EventKind::BillingBoundary, [this](const Event& e) { on_billing_boundary(e); });
    kernel_.register_handler(EventKind::PreemptionRevocation,
                             [this](const Event& e) { on_preemption_revocation(e); });
    kernel_.register_handler(EventKind::ScaleOutPermitted, [this](const Event& e) { on_scale_out_permitted(e); });

    kernel_.set_observer([this](const Event& ev) {
        current_event_seq_ = ev.seq;
        LogRecord rec;
        rec.type = LogRecord::Type::Event;
        rec.t = ev.time;
        rec.seq = ev.seq;
        rec.kind = event_kind_name(ev.kind);
        switch (ev.kind) {
            case EventKind::PodArrival:
            case EventKind::PodStarted:
            case EventKind::PodCompleted: {
                const Pod& p = cluster_.pod(ev.subject);
                rec.subject = p.id;
                if (ev.kind == EventKind::PodArrival) {
                    rec.detail = p.state == PodState::Evicted ? "requeue" : "submit";
                }
                break;
            }
            case EventKind::NodeReady:
            case EventKind::BillingBoundary:
            case EventKind::PreemptionRevocation:
                rec.subject = cluster_.node(ev.subject).id;
                break;
            case EventKind::SchedulingCycle:
                rec.detail = ev.subject == 1 ? "reactive" : "periodic";
                break;
            case EventKind::MonitoringTick:
            case EventKind::ScaleOutPermitted:
                break;
        }
        log_.add(std::move(rec));
        if (inspector_) inspector_(cluster_, ev);
    });

    for (const NodeTemplate& tpl : scenario_.templates) cluster_.add_template(tpl);

    if (scenario_.autoscaler.kind == AutoscalerKind::Simple) {
        std::optional<std::uint32_t> ti = cluster_.find_template(scenario_.autoscaler.template_name);
        if (!ti) {
            throw ValidationError("autoscaler template '" + scenario_.autoscaler.template_name + "' is not defined");
        }
        simple_autoscaler_.emplace(*ti, scenario_.autoscaler.provisioning_interval);
    }

    // Arrival events go in first, so at any timestamp they dispatch ahead
    // of the monitoring tick, which in turn was pushed ahead of the
    // scheduling cycle: samples see the queue as of the tick, cycles see
    // every pod submitted up to and including their own timestamp.
    for (Pod& pod : materialize_workload(scenario_)) add_workload_pod(std::move(pod));
    for (const ServiceSpec& spec : scenario_.services) {
        services_.push_back(ServiceRuntime{spec, HpaState(spec), {}, 0});
        for (std::uint32_t r = 0; r < spec.replicas; ++r) spawn_service_replica(services_.back(), 0);
    }

    first_submit_ = 0;
    if (cluster_.pod_count() > 0) {
        first_submit_ = std::numeric_limits<SimTime>::max();
        for (PodIndex pi = 0; pi < cluster_.pod_count(); ++pi) {
            first_submit_ = std::min(first_submit_, cluster_.pod(pi).submit_time);
        }
    }

    kernel_.push_event(0, EventKind::MonitoringTick, 0);
    kernel_.push_event(0, EventKind::SchedulingCycle, 0);

    for (const InitialNodeGroup& group : scenario_.initial_nodes) {
        std::optional<std::uint32_t> ti = cluster_.find_template(group.template_name);
        if (!ti) {
            throw ValidationError("initial node template '" + group.template_name + "' is not defined");
        }
        const NodeTemplate& tpl = cluster_.node_template(*ti);
        for (std::uint32_t k = 0; k < group.count; ++k) {
            NodeIndex ni = cluster_.add_ready_node(*ti, 0);
            log_action(LogRecord::Type::Provision, 0, cluster_.node(ni).id, "initial");
            log_action(LogRecord::Type::NodeReady, 0, cluster_.node(ni).id);
            if (scenario_.consolidation.enabled) {
                kernel_.push_event(tpl.billing_period, EventKind::BillingBoundary, ni);
            }
            if (scenario_.preemption.rate_per_node_hour > 0 && tpl.pricing == PricingModel::Preemptible) {
                arm_revocations(ni, 0);
            }
        }
    }
}

void Simulation::add_workload_pod(Pod pod) {
    const SimTime submit = pod.submit_time;
    const PodIndex pi = cluster_.add_pod(std::move(pod));
    first_bind_.push_back(std::nullopt);
    pending_resume_.push_back(std::nullopt);
    ++active_pods_;
    kernel_.push_event(submit, EventKind::PodArrival, pi);
}

PodIndex Simulation::spawn_service_replica(ServiceRuntime& svc, SimTime t) {
    Pod p;
    p.id = svc.spec.name + "-" + std::to_string(svc.spawned++);
    p.submit_time = t;
    p.request = svc.spec.request;
    p.nominal_duration = std::nullopt;  // runs until the horizon or scale-in
    p.app_class = svc.spec.app_class;
    p.movability = svc.spec.movability;
    p.fault_tolerant = false;
    p.usage_profile = svc.spec.cpu_profile;
    const PodIndex pi = cluster_.add_pod(std::move(p));
    first_bind_.push_back(std::nullopt);
    pending_resume_.push_back(std::nullopt);
    svc.replicas.push_back(pi);
    ++active_pods_;
    kernel_.push_event(t, EventKind::PodArrival, pi);
    return pi;
}

void Simulation::arm_revocations(NodeIndex node, SimTime from) {
    const std::vector<RevocationEvent> revs = preemption_events(
        preemption_root_, scenario_.preemption.rate_per_node_hour, scenario_.horizon, {node}, {from});
    for (const RevocationEvent& rv : revs) {
        kernel_.push_event(rv.t, EventKind::PreemptionRevocation, rv.node);
    }
}

void Simulation::on_pod_arrival(const Event& ev) {
    const PodIndex pi = ev.subject;
    Pod& p = cluster_.pod(pi);
    if (p.state == PodState::Evicted) {
        const ResumeMode mode = pending_resume_.at(pi).value_or(ResumeMode::RestartFromZero);
        pending_resume_[pi].reset();
        apply_resume(p, mode, ev.time);
        cluster_.requeue_pod(pi);
        log_action(LogRecord::Type::Requeue, ev.time, p.id,
                   mode == ResumeMode::ResumeRemaining ? "resume_remaining" : "restart_from_zero");
        pending_.insert({p.submit_time, pi});
        // A requeue means capacity opened somewhere else (or must be found
        // now); don't leave the pod hanging for the rest of the cycle.
        request_reactive_cycle(ev.time);
    } else {
        // Fresh submissions wait for the periodic cycle: the control plane
        // only notices new pods when its scheduling loop comes around.
        pending_.insert({p.submit_time, pi});
    }
}

void Simulation::on_pod_started(const Event& ev) {
    const PodIndex pi = ev.subject;
    Pod& p = cluster_.pod(pi);
    if (!p.started_event_seq || *p.started_event_seq != ev.seq) return;  // pod was released meanwhile
    p.started_event_seq.reset();
    cluster_.mark_pod_running(pi, ev.time);
    if (p.remaining_duration) {
        const EventHandle h = kernel_.push_event(
            ev.time + *p.remaining_duration + cluster_.config().runtime_overhead, EventKind::PodCompleted, pi);
        p.completed_event_seq = h.seq;
    }
}

void Simulation::on_pod_completed(const Event& ev) {
    const PodIndex pi = ev.subject;
    Pod& p = cluster_.pod(pi);
    if (!p.completed_event_seq || *p.completed_event_seq != ev.seq) return;  // pod was released meanwhile
    cluster_.release_pod(pi, ev.time, ReleaseReason::Completed);
    log_action(LogRecord::Type::Release, ev.time, p.id, "completed");
    --active_pods_;
    if (!pending_.empty()) request_reactive_cycle(ev.time);
}

void Simulation::on_scheduling_cycle(const Event& ev) {
    if (ev.subject == 1) reactive_cycle_queued_ = false;
    do_cycle(ev.time);
    if (ev.subject == 0 && run_live() && ev.time + scenario_.scheduling_cycle <= scenario_.horizon) {
        kernel_.push_event(ev.time + scenario_.scheduling_cycle, EventKind::SchedulingCycle, 0);
    }
}

void Simulation::do_cycle(SimTime t) {
    if (pending_.empty()) return;
    std::vector<PodIndex> queue;
    queue.reserve(pending_.size());
    for (const auto& [submit, pi] : pending_) queue.push_back(pi);

    const CycleOutcome outcome = run_cycle(cluster_, queue, scenario_.scheduler, rng_, t, &estimator_);

    for (const auto& [pi, ni] : outcome.bound) {
        const Pod& p = cluster_.pod(pi);
        pending_.erase({p.submit_time, pi});
        if (!first_bind_[pi]) first_bind_[pi] = t;
        last_bind_time_ = t;
        log_action(LogRecord::Type::Bind, t, p.id, cluster_.node(ni).id);
    }

    if (!outcome.unschedulable.empty() && simple_autoscaler_) {
        const ScaleOutDecision d = simple_autoscaler_->scale_out_request(t);
        if (d.launch) {
            const NodeIndex ni = cluster_.provision_node(d.template_index, t);
            ++dynamic_launches_;
            const NodeTemplate& tpl = cluster_.node_template(d.template_index);
            log_action(LogRecord::Type::Provision, t, cluster_.node(ni).id, tpl.name);
            if (scenario_.consolidation.enabled) {
                kernel_.push_event(t + tpl.billing_period, EventKind::BillingBoundary, ni);
            }
        } else if (d.permitted_at && permit_pushed_at_ != d.permitted_at) {
            kernel_.push_event(*d.permitted_at, EventKind::ScaleOutPermitted, 0);
            permit_pushed_at_ = d.permitted_at;
        }
    }
}

void Simulation::on_monitoring_tick(const Event& ev) {
    const SimTime t = ev.time;

    // Sample first: the series must reflect the queue as the monitoring
    // loop saw it, before anything this tick triggers mutates it.
    const std::int64_t pending_now = static_cast<std::int64_t>(pending_.size());
    const std::int64_t workers_now = worker_count();
    metrics_.sample(t, pending_now, workers_now);
    log_action(LogRecord::Type::Sample, t, "", "", pending_now, workers_now);

    for (PodIndex pi = 0; pi < cluster_.pod_count(); ++pi) {
        const Pod& p = cluster_.pod(pi);
        if (p.state == PodState::Running && !p.usage_profile.empty()) {
            estimator_.record(p, t, p.usage_at(t));
        }
    }

    for (ServiceRuntime& svc : services_) {
        std::uint32_t live = 0;
        std::uint32_t running = 0;
        double util_sum = 0.0;
        for (PodIndex pi : svc.replicas) {
            const Pod& p = cluster_.pod(pi);
            switch (p.state) {
                case PodState::Pending:
                case PodState::Bound:
                case PodState::Starting:
                    ++live;
                    break;
                case PodState::Running:
                    ++live;
                    ++running;
                    if (svc.spec.request.cpu_m > 0) {
                        util_sum += static_cast<double>(p.usage_at(t).cpu_m) /
                                    static_cast<double>(svc.spec.request.cpu_m);
                    }
                    break;
                default:
                    break;
            }
        }
        if (running == 0) continue;
        const int delta = svc.hpa.evaluate(util_sum / running, live);
        if (delta > 0) {
            spawn_service_replica(svc, t);
        } else if (delta < 0) {
            // Retire the newest running replica; older ones hold the
            // longest-lived connections.
            for (auto it = svc.replicas.rbegin(); it != svc.replicas.rend(); ++it) {
                if (cluster_.pod(*it).state != PodState::Running) continue;
                cluster_.release_pod(*it, t, ReleaseReason::Completed);
                log_action(LogRecord::Type::Release, t, cluster_.pod(*it).id, "completed");
                --active_pods_;
                if (!pending_.empty()) request_reactive_cycle(t);
                break;
            }
        }
    }

    if (run_live() && t + scenario_.monitoring_timestep <= scenario_.horizon) {
        kernel_.push_event(t + scenario_.monitoring_timestep, EventKind::MonitoringTick, 0);
    }
}

void Simulation::on_node_ready(const Event& ev) {
    const NodeIndex ni = ev.subject;
    if (cluster_.node(ni).state != NodeState::Provisioning) return;  // node was torn down while booting
    cluster_.mark_node_ready(ni, ev.time);
    log_action(LogRecord::Type::NodeReady, ev.time, cluster_.node(ni).id);
    const NodeTemplate& tpl = cluster_.node_template(cluster_.node(ni).template_index);
    if (scenario_.preemption.rate_per_node_hour > 0 && tpl.pricing == PricingModel::Preemptible) {
        arm_revocations(ni, ev.time);
    }
    if (!pending_.empty()) request_reactive_cycle(ev.time);
}

void Simulation::on_billing_boundary(const Event& ev) {
    const NodeIndex ni = ev.subject;
    const Node& n = cluster_.node(ni);
    if (n.state == NodeState::Terminated) return;  // chain outlived the node
    if (!run_live()) return;                       // nothing left to place, stop reviewing
    const ReviewConfig cfg{scenario_.consolidation.utilization_threshold, scenario_.checkpoint_rate_mib_s};
    if (billing_boundary_review(cluster_, ni, ev.time, cfg) == ReviewOutcome::Drain) {
        const std::optional<DrainPlan> plan = plan_drain(cluster_, ni, scenario_.checkpoint_rate_mib_s);
        if (!plan) {
            throw SimError("drain approved for " + n.id + " but no eviction plan exists");
        }
        drain_node(ni, ev.time, *plan);
        return;
    }
    kernel_.push_event(ev.time + cluster_.node_template(n.template_index).billing_period,
                       EventKind::BillingBoundary, ni);
}

void Simulation::on_preemption_revocation(const Event& ev) {
    const NodeIndex ni = ev.subject;
    const Node& n = cluster_.node(ni);
    if (n.state != NodeState::Ready) return;  // already drained or revoked earlier
    const std::vector<PodIndex> victims = n.bound_pods;
    for (PodIndex pi : victims) {
        const bool fault_tolerant = cluster_.pod(pi).fault_tolerant;
        cluster_.release_pod(pi, ev.time, ReleaseReason::Revoked);
        log_action(LogRecord::Type::Release, ev.time, cluster_.pod(pi).id, "revoked");
        if (fault_tolerant) {
            // The machine vanished under the pod: no checkpoint window, so
            // even checkpointable pods restart from zero.
            pending_resume_[pi] = ResumeMode::RestartFromZero;
            kernel_.push_event(ev.time, EventKind::PodArrival, pi);
        } else {
            --active_pods_;
        }
    }
    cluster_.start_draining(ni);
    cluster_.terminate_node(ni, ev.time);
    log_action(LogRecord::Type::Terminate, ev.time, cluster_.node(ni).id, "revoked");
    if (!pending_.empty()) request_reactive_cycle(ev.time);
}

void Simulation::on_scale_out_permitted(const Event& ev) {
    permit_pushed_at_.reset();
    if (!pending_.empty()) request_reactive_cycle(ev.time);
}

void Simulation::request_reactive_cycle(SimTime t) {
    if (reactive_cycle_queued_) return;
    kernel_.push_event(t, EventKind::SchedulingCycle, 1);
    reactive_cycle_queued_ = true;
}

void Simulation::evict_pod(PodIndex pod, SimTime t, const EvictionPlan& plan, ReleaseReason reason) {
    Pod& p = cluster_.pod(pod);
    if (plan.mode == ResumeMode::ResumeRemaining && p.state == PodState::Running) {
        p.remaining_duration = remaining_at(p, t);
    }
    cluster_.release_pod(pod, t, reason);
    log_action(LogRecord::Type::Release, t, p.id, release_reason_name(reason));
    pending_resume_[pod] = plan.mode;
    kernel_.push_event(t + plan.downtime, EventKind::PodArrival, pod);
}

void Simulation::drain_node(NodeIndex node, SimTime t, const DrainPlan& plan) {
    for (const EvictionPlan& ep : plan.evictions) {
        evict_pod(ep.pod, t, ep, ReleaseReason::Evicted);
    }
    cluster_.start_draining(node);
    log_action(LogRecord::Type::Drain, t, cluster_.node(node).id);
    cluster_.terminate_node(node, t);
    log_action(LogRecord::Type::Terminate, t, cluster_.node(node).id, "drained");
}

std::int64_t Simulation::worker_count() const {
    std::int64_t count = 0;
    for (const Node& n : cluster_.nodes()) {
        if (n.state == NodeState::Provisioning || n.state == NodeState::Ready) ++count;
    }
    return count;
}

void Simulation::log_action(LogRecord::Type type, SimTime t, std::string subject, std::string detail,
                            std::int64_t value, std::int64_t value2) {
    LogRecord rec;
    rec.type = type;
    rec.t = t;
    rec.seq = current_event_seq_;
    rec.subject = std::move(subject);
    rec.detail = std::move(detail);
    rec.value = value;
    rec.value2 = value2;
    log_.add(std::move(rec));
}

RunResult Simulation::run() {
    setup();
    const RunStats stats = kernel_.run_until(scenario_.horizon);

    cluster_.check_capacity_invariant(scenario_.scheduler.capacity_mode == CapacityMode::Opportunistic);
    std::uint64_t terminal = 0;
    for (PodIndex pi = 0; pi < cluster_.pod_count(); ++pi) {
        const PodState s = cluster_.pod(pi).state;
        if (s == PodState::Succeeded || s == PodState::Failed) ++terminal;
    }
    if (active_pods_ != cluster_.pod_count() - terminal) {
        throw SimError("pod accounting out of sync at end of run");
    }

    RunResult result;
    result.report = build_report(stats);
    result.log = std::move(log_);
    return result;
}

RunReport Simulation::build_report(const RunStats& stats) {
    RunReport r;
    r.scenario = scenario_.name;
    r.seed = scenario_.seed;
    r.pods_submitted = cluster_.pod_count();

    SimTime delay_sum = 0;
    for (PodIndex pi = 0; pi < cluster_.pod_count(); ++pi) {
        const Pod& p = cluster_.pod(pi);
        if (p.state == PodState::Succeeded) ++r.pods_succeeded;
        if (p.state == PodState::Failed) ++r.pods_failed;
        if (first_bind_[pi]) {
            ++r.pods_bound;
            delay_sum += *first_bind_[pi] - p.submit_time;
        } else {
            ++r.pods_unbound;
        }
        r.evictions += p.evictions;
        bool violated = p.qos_violated;
        if (p.deadline && p.finish_time && *p.finish_time > *p.deadline) violated = true;
        if (p.deadline && !p.finish_time && stats.last_event_time > *p.deadline) violated = true;
        if (violated) ++r.qos_violations;
    }

    r.avg_delay_numerator_s = delay_sum;
    if (r.pods_bound > 0) {
        r.avg_scheduling_delay_min = minutes(delay_sum) / static_cast<double>(r.pods_bound);
        r.total_scheduling_duration_s = *last_bind_time_ - first_submit_;
        r.total_scheduling_duration_min = minutes(r.total_scheduling_duration_s);
        if (r.total_scheduling_duration_s == 0) {
            // All bindings happened in the submission instant; pods-per-
            // minute over a zero-length window is meaningless, not infinite.
            r.duration_degenerate = true;
        } else {
            r.throughput_pods_per_min =
                static_cast<double>(r.pods_bound) / r.total_scheduling_duration_min;
        }
    } else {
        r.duration_degenerate = true;
    }

    const SimTime cutoff = scenario_.billing_cutoff == BillingCutoff::LastBind ? last_bind_time_.value_or(0)
                                                                               : stats.last_event_time;
    const CostSummary cost = total_cost(cluster_, cutoff);
    r.cost_micro = cost.total_micro;
    r.cost_usd = format_usd(cost.total_micro);

    r.launches = dynamic_launches_;
    r.workers_final = static_cast<std::uint64_t>(worker_count());
    r.pending_series = metrics_.pending_series();
    r.worker_series = metrics_.worker_series();
    r.events_dispatched = stats.dispatched;
    return r;
}

RunResult run_scenario(Scenario scenario, std::optional<std::uint64_t> seed_override) {
    if (seed_override) scenario.seed = *seed_override;
    Simulation sim(std::move(scenario));
    return sim.run();
}

}  // namespace orchsim
