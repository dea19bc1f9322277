#include <doctest.h>

#include "orchsim/cluster.hpp"
#include "orchsim/estimator.hpp"

using namespace orchsim;

namespace {

NodeTemplate small_template() {
    NodeTemplate tpl;
    tpl.name = "small";
    tpl.capacity = {750, 2048};
    tpl.pricing = PricingModel::OnDemand;
    tpl.rate_micro = 1000;
    tpl.billing_period = 60;
    tpl.boot_delay = 90;
    return tpl;
}

Pod batch_pod(const std::string& id, SimTime submit, ResourceVector request, SimTime duration) {
    Pod p;
    p.id = id;
    p.submit_time = submit;
    p.request = request;
    p.nominal_duration = duration;
    return p;
}

}  // namespace

TEST_CASE("pod walks the full lifecycle and lands in succeeded") {
    Kernel kernel;
    Cluster cluster(kernel, ClusterConfig{5, 25});
    std::uint32_t tpl = cluster.add_template(small_template());
    NodeIndex n = cluster.add_ready_node(tpl, 0);
    PodIndex p = cluster.add_pod(batch_pod("p0", 0, {250, 64}, 100));

    CHECK(cluster.pod(p).state == PodState::Pending);
    CHECK(cluster.pod(p).remaining_duration == 100);  // seeded from the nominal duration

    cluster.bind_pod(p, n, 10);
    CHECK(cluster.pod(p).state == PodState::Starting);
    CHECK(cluster.pod(p).bind_time == 10);
    CHECK(cluster.node(n).used_requests == ResourceVector{250, 64});
    CHECK(cluster.pod(p).started_event_seq.has_value());
    CHECK(kernel.queued() == 1);  // the queued start event, at bind + overhead

    cluster.mark_pod_running(p, 15);
    CHECK(cluster.pod(p).state == PodState::Running);
    CHECK(cluster.pod(p).start_time == 15);

    cluster.release_pod(p, 140, ReleaseReason::Completed);
    CHECK(cluster.pod(p).state == PodState::Succeeded);
    CHECK(cluster.pod(p).finish_time == 140);
    CHECK(cluster.pod(p).remaining_duration == 0);
    CHECK(cluster.node(n).bound_pods.empty());
    CHECK(cluster.node(n).used_requests == ResourceVector{0, 0});
    cluster.check_capacity_invariant();
}

TEST_CASE("bind refuses anything that breaks placement preconditions") {
    Kernel kernel;
    Cluster cluster(kernel, ClusterConfig{});
    std::uint32_t tpl = cluster.add_template(small_template());
    NodeIndex ready = cluster.add_ready_node(tpl, 0);
    NodeIndex booting = cluster.provision_node(tpl, 0);

    PodIndex big = cluster.add_pod(batch_pod("big", 0, {800, 64}, 100));   // wider than the machine
    PodIndex late = cluster.add_pod(batch_pod("late", 50, {100, 64}, 100));
    PodIndex ok = cluster.add_pod(batch_pod("ok", 0, {700, 64}, 100));
    PodIndex second = cluster.add_pod(batch_pod("second", 0, {100, 64}, 100));

    CHECK_THROWS_AS(cluster.bind_pod(big, ready, 0), SimError);
    CHECK_THROWS_AS(cluster.bind_pod(late, ready, 10), SimError);  // bound before submission
    CHECK_THROWS_AS(cluster.bind_pod(ok, booting, 0), SimError);   // node not ready yet

    cluster.bind_pod(ok, ready, 0);
    CHECK_THROWS_AS(cluster.bind_pod(ok, ready, 0), SimError);        // not pending any more
    CHECK_THROWS_AS(cluster.bind_pod(second, ready, 0), SimError);    // 700 + 100 > 750
    CHECK(cluster.free_capacity(ready, CapacityMode::Requested) == ResourceVector{50, 1984});
}

TEST_CASE("illegal state transitions are rejected") {
    Kernel kernel;
    Cluster cluster(kernel, ClusterConfig{});
    std::uint32_t tpl = cluster.add_template(small_template());
    NodeIndex n = cluster.add_ready_node(tpl, 0);
    PodIndex p = cluster.add_pod(batch_pod("p", 0, {100, 64}, 50));

    CHECK_THROWS_AS(cluster.mark_pod_running(p, 0), SimError);  // never bound
    CHECK_THROWS_AS(cluster.requeue_pod(p), SimError);          // pending, not evicted
    cluster.bind_pod(p, n, 0);
    cluster.mark_pod_running(p, 0);
    CHECK_THROWS_AS(cluster.mark_pod_running(p, 1), SimError);  // already running
}

TEST_CASE("revocation fate depends on fault tolerance") {
    Kernel kernel;
    Cluster cluster(kernel, ClusterConfig{});
    std::uint32_t tpl = cluster.add_template(small_template());
    NodeIndex n = cluster.add_ready_node(tpl, 0);

    Pod tolerant = batch_pod("tolerant", 0, {100, 64}, 500);
    tolerant.fault_tolerant = true;
    Pod fragile = batch_pod("fragile", 0, {100, 64}, 500);
    fragile.fault_tolerant = false;

    PodIndex pt = cluster.add_pod(std::move(tolerant));
    PodIndex pf = cluster.add_pod(std::move(fragile));
    cluster.bind_pod(pt, n, 0);
    cluster.bind_pod(pf, n, 0);
    cluster.mark_pod_running(pt, 0);
    cluster.mark_pod_running(pf, 0);

    cluster.release_pod(pt, 100, ReleaseReason::Revoked);
    cluster.release_pod(pf, 100, ReleaseReason::Revoked);
    CHECK(cluster.pod(pt).state == PodState::Evicted);
    CHECK(cluster.pod(pt).evictions == 1);
    CHECK(cluster.pod(pf).state == PodState::Failed);
    CHECK(cluster.pod(pf).finish_time == 100);

    // The survivor goes back to pending with its placement wiped.
    cluster.requeue_pod(pt);
    CHECK(cluster.pod(pt).state == PodState::Pending);
    CHECK_FALSE(cluster.pod(pt).bind_time.has_value());
    CHECK_FALSE(cluster.pod(pt).start_time.has_value());
}

TEST_CASE("opportunistic capacity shrinks reservations to estimated usage") {
    Kernel kernel;
    Cluster cluster(kernel, ClusterConfig{});
    std::uint32_t tpl = cluster.add_template(small_template());
    NodeIndex n = cluster.add_ready_node(tpl, 0);
    UsageEstimator estimator(EstimatorConfig{EstimatorStatistic::Median, 3, 120});

    PodIndex a = cluster.add_pod(batch_pod("a", 0, {500, 64}, 1000));
    cluster.bind_pod(a, n, 0);
    cluster.mark_pod_running(a, 0);

    // Requested accounting: 250 left, a 400-wide pod does not fit.
    PodIndex b = cluster.add_pod(batch_pod("b", 0, {400, 64}, 1000));
    CHECK_FALSE(cluster.pod(b).request.fits_in(cluster.free_capacity(n, CapacityMode::Requested)));

    // Three samples of ~100 millicores: reservation becomes 100 * 1.2 = 120.
    for (SimTime t : {20, 40, 60}) estimator.record(cluster.pod(a), t, {100, 32});
    ResourceVector free = cluster.free_capacity(n, CapacityMode::Opportunistic, &estimator);
    CHECK(free.cpu_m == 750 - 120);
    CHECK(cluster.pod(b).request.fits_in(free));

    cluster.bind_pod(b, n, 0, CapacityMode::Opportunistic, &estimator);
    // Requests now oversubscribe the machine: legal only with the flag.
    CHECK_THROWS_AS(cluster.check_capacity_invariant(false), SimError);
    cluster.check_capacity_invariant(true);
}

TEST_CASE("draining requires an empty node and termination is final") {
    Kernel kernel;
    Cluster cluster(kernel, ClusterConfig{});
    std::uint32_t tpl = cluster.add_template(small_template());
    NodeIndex n = cluster.add_ready_node(tpl, 0);
    PodIndex p = cluster.add_pod(batch_pod("p", 0, {100, 64}, 50));
    cluster.bind_pod(p, n, 0);

    CHECK_THROWS_AS(cluster.start_draining(n), SimError);  // still holds a pod
    cluster.release_pod(p, 10, ReleaseReason::Evicted);
    cluster.start_draining(n);
    CHECK(cluster.node(n).state == NodeState::Draining);
    cluster.terminate_node(n, 20);
    CHECK(cluster.node(n).state == NodeState::Terminated);
    CHECK(cluster.node(n).terminate_time == 20);
    CHECK_THROWS_AS(cluster.terminate_node(n, 30), SimError);
}

TEST_CASE("provisioning queues readiness after the boot delay") {
    Kernel kernel;
    Cluster cluster(kernel, ClusterConfig{});
    std::uint32_t tpl = cluster.add_template(small_template());

    SimTime ready_at = 0;
    kernel.register_handler(EventKind::NodeReady, [&](const Event& e) {
        ready_at = e.time;
        cluster.mark_node_ready(e.subject, e.time);
    });
    NodeIndex n = cluster.provision_node(tpl, 100);
    CHECK(cluster.node(n).state == NodeState::Provisioning);
    CHECK(cluster.node(n).launch_time == 100);
    CHECK(cluster.node(n).id == "node-0");

    kernel.run_until();
    CHECK(ready_at == 190);  // launch + boot delay
    CHECK(cluster.node(n).state == NodeState::Ready);
    CHECK(cluster.node(n).ready_time == 190);
}

TEST_CASE("piecewise usage profiles hold their last value") {
    Pod p;
    p.usage_profile = {{0, {50, 10}}, {100, {90, 10}}, {200, {30, 10}}};
    CHECK(p.usage_at(0).cpu_m == 50);
    CHECK(p.usage_at(99).cpu_m == 50);
    CHECK(p.usage_at(100).cpu_m == 90);
    CHECK(p.usage_at(150).cpu_m == 90);
    CHECK(p.usage_at(10000).cpu_m == 30);

    Pod empty;
    CHECK(empty.usage_at(50) == ResourceVector{0, 0});

    Pod late_start;
    late_start.usage_profile = {{100, {40, 5}}};
    CHECK(late_start.usage_at(50) == ResourceVector{0, 0});  // nothing recorded yet
}

TEST_CASE("cpu utilization is bound requests over ready capacity") {
    Kernel kernel;
    Cluster cluster(kernel, ClusterConfig{});
    std::uint32_t tpl = cluster.add_template(small_template());
    NodeIndex n0 = cluster.add_ready_node(tpl, 0);
    cluster.provision_node(tpl, 0);  // still booting: not part of the denominator

    CHECK(cluster.cpu_utilization() == doctest::Approx(0.0));
    PodIndex p = cluster.add_pod(batch_pod("p", 0, {300, 64}, 50));
    cluster.bind_pod(p, n0, 0);
    CHECK(cluster.cpu_utilization() == doctest::Approx(300.0 / 750.0));
}
