#include <doctest.h>

#include <string>
#include <vector>

#include "orchsim/kernel.hpp"

using namespace orchsim;

TEST_CASE("events dispatch in time order with push order breaking ties") {
    Kernel k;
    std::vector<std::string> order;
    k.register_handler(EventKind::PodArrival, [&](const Event& e) { order.push_back("a" + std::to_string(e.subject)); });
    k.register_handler(EventKind::PodCompleted,
                       [&](const Event& e) { order.push_back("c" + std::to_string(e.subject)); });

    k.push_event(5, EventKind::PodArrival, 1);
    k.push_event(3, EventKind::PodCompleted, 2);
    k.push_event(5, EventKind::PodCompleted, 3);  // same time as a1, pushed later
    k.push_event(4, EventKind::PodArrival, 4);

    RunStats stats = k.run_until();
    CHECK(order == std::vector<std::string>{"c2", "a4", "a1", "c3"});
    CHECK(stats.total == 4);
    CHECK(stats.dispatched[static_cast<std::size_t>(EventKind::PodArrival)] == 2);
    CHECK(stats.dispatched[static_cast<std::size_t>(EventKind::PodCompleted)] == 2);
    CHECK(stats.last_event_time == 5);
    CHECK(k.now() == 5);
}

TEST_CASE("pushing into the past throws, pushing at the current clock is allowed") {
    Kernel k;
    int same_time_fired = 0;
    k.register_handler(EventKind::SchedulingCycle, [&](const Event& e) {
        if (e.subject == 0) {
            k.push_event(e.time, EventKind::SchedulingCycle, 1);  // same timestamp cascade
            CHECK_THROWS_AS(k.push_event(e.time - 1, EventKind::SchedulingCycle, 9), SimError);
        } else {
            ++same_time_fired;
        }
    });
    k.push_event(10, EventKind::SchedulingCycle, 0);
    k.run_until();
    CHECK(same_time_fired == 1);
    CHECK(k.now() == 10);
}

TEST_CASE("run_until stops at the bound and leaves later events queued") {
    Kernel k;
    std::vector<SimTime> seen;
    k.register_handler(EventKind::MonitoringTick, [&](const Event& e) { seen.push_back(e.time); });
    k.push_event(10, EventKind::MonitoringTick, 0);
    k.push_event(20, EventKind::MonitoringTick, 0);
    k.push_event(30, EventKind::MonitoringTick, 0);

    RunStats stats = k.run_until(20);
    CHECK(seen == std::vector<SimTime>{10, 20});
    CHECK(stats.total == 2);
    CHECK(k.queued() == 1);

    k.run_until(100);
    CHECK(seen.back() == 30);
    CHECK(k.empty());
}

TEST_CASE("observer runs before the handler of each event") {
    Kernel k;
    std::vector<std::string> order;
    k.set_observer([&](const Event& e) { order.push_back("obs@" + std::to_string(e.time)); });
    k.register_handler(EventKind::NodeReady, [&](const Event& e) { order.push_back("h@" + std::to_string(e.time)); });
    k.push_event(1, EventKind::NodeReady, 0);
    k.push_event(2, EventKind::NodeReady, 0);
    k.run_until();
    CHECK(order == std::vector<std::string>{"obs@1", "h@1", "obs@2", "h@2"});
}

TEST_CASE("dispatching an event without a handler throws") {
    Kernel k;
    k.push_event(1, EventKind::BillingBoundary, 0);
    CHECK_THROWS_AS(k.run_until(), SimError);
}

TEST_CASE("event sequence numbers are handed out at push time") {
    Kernel k;
    EventHandle h1 = k.push_event(50, EventKind::PodArrival, 0);
    EventHandle h2 = k.push_event(10, EventKind::PodArrival, 0);
    CHECK(h1.seq < h2.seq);  // earlier push, smaller seq, regardless of times
    CHECK(h1.time == 50);
    CHECK(h2.time == 10);
}
