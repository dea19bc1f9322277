#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orchsim/cluster.hpp"
#include "orchsim/estimator.hpp"
#include "orchsim/types.hpp"
#include "orchsim/workload.hpp"

namespace orchsim {

enum class SchedulerKind : std::uint8_t { Random, Spread, BinPack, CostAware };

struct SchedulerSpec {
    SchedulerKind kind = SchedulerKind::Random;
    CapacityMode capacity_mode = CapacityMode::Requested;
    // cost-aware knobs
    std::int64_t mixing_penalty = 1;     // movable pod on a node holding pinned ones (and vice versa)
    std::int64_t on_demand_penalty = 0;  // extra pricing-rank for services landing on on-demand
};

enum class AutoscalerKind : std::uint8_t { Void, Simple };

struct AutoscalerSpec {
    AutoscalerKind kind = AutoscalerKind::Void;
    std::string template_name;        // simple: template to launch
    SimTime provisioning_interval = 0;  // simple: min spacing between launches
};

struct ConsolidationSpec {
    bool enabled = false;
    double utilization_threshold = 0.7;
};

struct InitialNodeGroup {
    std::string template_name;
    std::uint32_t count = 0;
};

struct ServiceSpec {
    std::string name;
    std::uint32_t replicas = 1;
    ResourceVector request;
    AppClass app_class = AppClass::CustomerFacingService;
    Movability movability = Movability::Pinned;
    double threshold = 0.8;        // scale up when mean utilization crosses above
    double lower_threshold = 0.0;  // scale down when it crosses below (0 disables)
    std::uint32_t min_replicas = 1;
    std::uint32_t max_replicas = 16;
    std::vector<UsagePoint> cpu_profile;  // per-replica usage over time
};

struct PreemptionSpec {
    double rate_per_node_hour = 0.0;
};

enum class BillingCutoff : std::uint8_t {
    LastBind,  // all nodes billed up to the last pod binding
    RunEnd,    // nodes billed to termination or end of run
};

struct WorkloadSpec {
    std::optional<BatchSpec> batch;
    std::string trace_path;   // resolved relative to the scenario file
    std::vector<Pod> inline_pods;
};

struct Scenario {
    std::string name;
    std::uint64_t seed = 42;
    SimTime horizon = 0;
    std::vector<NodeTemplate> templates;
    std::vector<InitialNodeGroup> initial_nodes;
    SchedulerSpec scheduler;
    AutoscalerSpec autoscaler;
    WorkloadSpec workload;
    std::vector<ServiceSpec> services;
    ConsolidationSpec consolidation;
    EstimatorConfig estimator;
    PreemptionSpec preemption;
    ClusterConfig overheads;
    SimTime scheduling_cycle = 10;
    SimTime monitoring_timestep = 20;
    SimTime checkpoint_rate_mib_s = 256;
    BillingCutoff billing_cutoff = BillingCutoff::LastBind;
};

// Parses and validates a scenario document. Collected problems are
// returned rather than thrown so `validate` can report all of them at
// once; each message names the JSON path it refers to.
struct ScenarioLoadResult {
    std::optional<Scenario> scenario;
    std::vector<std::string> errors;
    bool ok() const { return errors.empty() && scenario.has_value(); }
};

ScenarioLoadResult load_scenario_file(const std::string& path);
ScenarioLoadResult parse_scenario_json(const std::string& text, const std::string& base_dir);

// Materializes the full submitted pod list: generated batch, trace file,
// inline pods, in stable submit order.
std::vector<Pod> materialize_workload(const Scenario& scenario);

}  // namespace orchsim
