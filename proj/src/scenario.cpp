#include "orchsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace orchsim {

using nlohmann::json;

namespace {

// Accumulates path-tagged validation errors while walking the document.
struct Ctx {
    std::vector<std::string>& errors;
    std::string base_dir;

    void fail(const std::string& path, const std::string& what) { errors.push_back(path + ": " + what); }
};

bool expect_object(Ctx& ctx, const json& j, const std::string& path) {
    if (!j.is_object()) {
        ctx.fail(path, "must be an object");
        return false;
    }
    return true;
}

std::optional<std::int64_t> get_int(Ctx& ctx, const json& j, const std::string& path, const char* key,
                                    bool required, std::optional<std::int64_t> min = std::nullopt) {
    if (!j.contains(key)) {
        if (required) ctx.fail(path + "." + key, "missing");
        return std::nullopt;
    }
    const json& v = j.at(key);
    if (!v.is_number_integer()) {
        ctx.fail(path + "." + key, "must be an integer");
        return std::nullopt;
    }
    std::int64_t x = v.get<std::int64_t>();
    if (min && x < *min) {
        ctx.fail(path + "." + key, "must be >= " + std::to_string(*min));
        return std::nullopt;
    }
    return x;
}

std::optional<double> get_number(Ctx& ctx, const json& j, const std::string& path, const char* key, bool required) {
    if (!j.contains(key)) {
        if (required) ctx.fail(path + "." + key, "missing");
        return std::nullopt;
    }
    const json& v = j.at(key);
    if (!v.is_number()) {
        ctx.fail(path + "." + key, "must be a number");
        return std::nullopt;
    }
    return v.get<double>();
}

std::optional<std::string> get_string(Ctx& ctx, const json& j, const std::string& path, const char* key,
                                      bool required) {
    if (!j.contains(key)) {
        if (required) ctx.fail(path + "." + key, "missing");
        return std::nullopt;
    }
    const json& v = j.at(key);
    if (!v.is_string()) {
        ctx.fail(path + "." + key, "must be a string");
        return std::nullopt;
    }
    return v.get<std::string>();
}

std::optional<bool> get_bool(Ctx& ctx, const json& j, const std::string& path, const char* key, bool required) {
    if (!j.contains(key)) {
        if (required) ctx.fail(path + "." + key, "missing");
        return std::nullopt;
    }
    const json& v = j.at(key);
    if (!v.is_boolean()) {
        ctx.fail(path + "." + key, "must be a boolean");
        return std::nullopt;
    }
    return v.get<bool>();
}

NodeTemplate parse_template(Ctx& ctx, const json& j, const std::string& path) {
    NodeTemplate tpl;
    tpl.name = get_string(ctx, j, path, "name", true).value_or("");
    tpl.capacity.cpu_m = get_int(ctx, j, path, "cpu_m", true, 1).value_or(0);
    tpl.capacity.mem_mib = get_int(ctx, j, path, "mem_mib", true, 1).value_or(0);
    if (auto s = get_string(ctx, j, path, "pricing", false)) {
        auto p = pricing_model_from_name(*s);
        if (!p) {
            ctx.fail(path + ".pricing", "unknown pricing model '" + *s + "'");
        } else {
            tpl.pricing = *p;
        }
    }
    tpl.rate_micro = get_int(ctx, j, path, "rate_micro_usd_per_period", true, 0).value_or(0);
    tpl.billing_period = static_cast<SimTime>(get_int(ctx, j, path, "billing_period_s", false, 1).value_or(60));
    tpl.boot_delay = static_cast<SimTime>(get_int(ctx, j, path, "boot_delay_s", false, 0).value_or(90));
    if (auto d = get_number(ctx, j, path, "discount_factor", false)) {
        if (*d <= 0.0 || *d > 1.0) {
            ctx.fail(path + ".discount_factor", "must be in (0, 1]");
        } else {
            tpl.discount_ppm = static_cast<std::uint32_t>(std::llround(*d * 1e6));
        }
    }
    if (tpl.pricing != PricingModel::Preemptible && tpl.discount_ppm != 1000000) {
        ctx.fail(path + ".discount_factor", "only preemptible templates may be discounted");
    }
    return tpl;
}

std::vector<UsagePoint> parse_profile(Ctx& ctx, const json& j, const std::string& path) {
    std::vector<UsagePoint> out;
    if (!j.is_array()) {
        ctx.fail(path, "must be an array of [t_s, cpu_m] pairs");
        return out;
    }
    for (std::size_t i = 0; i < j.size(); ++i) {
        const json& e = j[i];
        const std::string epath = path + "[" + std::to_string(i) + "]";
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
            ctx.fail(epath, "must be [t_s, cpu_m] with integer entries");
            continue;
        }
        std::int64_t t = e[0].get<std::int64_t>();
        std::int64_t cpu = e[1].get<std::int64_t>();
        if (t < 0 || cpu < 0) {
            ctx.fail(epath, "entries must be >= 0");
            continue;
        }
        if (!out.empty() && static_cast<SimTime>(t) <= out.back().t) {
            ctx.fail(epath, "profile times must be strictly increasing");
            continue;
        }
        out.push_back({static_cast<SimTime>(t), {cpu, 0}});
    }
    return out;
}

Pod parse_inline_pod(Ctx& ctx, const json& j, const std::string& path) {
    Pod p;
    p.id = get_string(ctx, j, path, "id", true).value_or("");
    p.submit_time = static_cast<SimTime>(get_int(ctx, j, path, "submit_s", true, 0).value_or(0));
    p.request.cpu_m = get_int(ctx, j, path, "cpu_m", true, 0).value_or(0);
    p.request.mem_mib = get_int(ctx, j, path, "mem_mib", true, 0).value_or(0);
    if (auto d = get_int(ctx, j, path, "duration_s", false, 0)) p.nominal_duration = static_cast<SimTime>(*d);
    if (auto s = get_string(ctx, j, path, "app_class", false)) {
        auto v = app_class_from_name(*s);
        if (!v) {
            ctx.fail(path + ".app_class", "unknown value '" + *s + "'");
        } else {
            p.app_class = *v;
        }
    }
    if (auto s = get_string(ctx, j, path, "movability", false)) {
        auto v = movability_from_name(*s);
        if (!v) {
            ctx.fail(path + ".movability", "unknown value '" + *s + "'");
        } else {
            p.movability = *v;
        }
    }
    if (auto b = get_bool(ctx, j, path, "fault_tolerant", false)) p.fault_tolerant = *b;
    if (auto d = get_int(ctx, j, path, "deadline_s", false, 0)) p.deadline = static_cast<SimTime>(*d);
    if (j.contains("cpu_profile")) p.usage_profile = parse_profile(ctx, j.at("cpu_profile"), path + ".cpu_profile");
    return p;
}

}  // namespace

ScenarioLoadResult parse_scenario_json(const std::string& text, const std::string& base_dir) {
    ScenarioLoadResult result;
    Ctx ctx{result.errors, base_dir};

    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        ctx.fail("$", std::string("invalid JSON: ") + e.what());
        return result;
    }
    if (!expect_object(ctx, doc, "$")) return result;

    Scenario sc;
    sc.name = get_string(ctx, doc, "$", "name", true).value_or("");
    sc.seed = static_cast<std::uint64_t>(get_int(ctx, doc, "$", "seed", false, 0).value_or(42));
    sc.horizon = static_cast<SimTime>(get_int(ctx, doc, "$", "horizon_s", true, 1).value_or(1));

    if (!doc.contains("templates") || !doc.at("templates").is_array() || doc.at("templates").empty()) {
        ctx.fail("$.templates", "must be a non-empty array");
    } else {
        const json& arr = doc.at("templates");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string path = "$.templates[" + std::to_string(i) + "]";
            if (!expect_object(ctx, arr[i], path)) continue;
            NodeTemplate tpl = parse_template(ctx, arr[i], path);
            for (const NodeTemplate& prev : sc.templates) {
                if (prev.name == tpl.name) ctx.fail(path + ".name", "duplicate template name '" + tpl.name + "'");
            }
            sc.templates.push_back(std::move(tpl));
        }
    }

    auto known_template = [&](const std::string& name) {
        return std::any_of(sc.templates.begin(), sc.templates.end(),
                           [&](const NodeTemplate& t) { return t.name == name; });
    };

    if (!doc.contains("initial_nodes") || !doc.at("initial_nodes").is_array()) {
        ctx.fail("$.initial_nodes", "must be an array");
    } else {
        const json& arr = doc.at("initial_nodes");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string path = "$.initial_nodes[" + std::to_string(i) + "]";
            if (!expect_object(ctx, arr[i], path)) continue;
            InitialNodeGroup g;
            g.template_name = get_string(ctx, arr[i], path, "template", true).value_or("");
            g.count = static_cast<std::uint32_t>(get_int(ctx, arr[i], path, "count", true, 0).value_or(0));
            if (!g.template_name.empty() && !known_template(g.template_name)) {
                ctx.fail(path + ".template", "unknown template '" + g.template_name + "'");
            }
            sc.initial_nodes.push_back(std::move(g));
        }
    }

    if (doc.contains("scheduler")) {
        const json& j = doc.at("scheduler");
        if (expect_object(ctx, j, "$.scheduler")) {
            std::string kind = get_string(ctx, j, "$.scheduler", "kind", true).value_or("random");
            if (kind == "random") {
                sc.scheduler.kind = SchedulerKind::Random;
            } else if (kind == "spread") {
                sc.scheduler.kind = SchedulerKind::Spread;
            } else if (kind == "binpack") {
                sc.scheduler.kind = SchedulerKind::BinPack;
            } else if (kind == "cost_aware") {
                sc.scheduler.kind = SchedulerKind::CostAware;
            } else {
                ctx.fail("$.scheduler.kind", "unknown scheduler '" + kind + "'");
            }
            if (auto m = get_string(ctx, j, "$.scheduler", "capacity_mode", false)) {
                if (*m == "requested") {
                    sc.scheduler.capacity_mode = CapacityMode::Requested;
                } else if (*m == "opportunistic") {
                    sc.scheduler.capacity_mode = CapacityMode::Opportunistic;
                } else {
                    ctx.fail("$.scheduler.capacity_mode", "must be 'requested' or 'opportunistic'");
                }
            }
            if (auto v = get_int(ctx, j, "$.scheduler", "mixing_penalty", false, 0)) sc.scheduler.mixing_penalty = *v;
            if (auto v = get_int(ctx, j, "$.scheduler", "on_demand_penalty", false, 0)) {
                sc.scheduler.on_demand_penalty = *v;
            }
        }
    } else {
        ctx.fail("$.scheduler", "missing");
    }

    if (doc.contains("autoscaler")) {
        const json& j = doc.at("autoscaler");
        if (expect_object(ctx, j, "$.autoscaler")) {
            std::string kind = get_string(ctx, j, "$.autoscaler", "kind", true).value_or("void");
            if (kind == "void") {
                sc.autoscaler.kind = AutoscalerKind::Void;
            } else if (kind == "simple") {
                sc.autoscaler.kind = AutoscalerKind::Simple;
                sc.autoscaler.template_name = get_string(ctx, j, "$.autoscaler", "template", true).value_or("");
                if (!sc.autoscaler.template_name.empty() && !known_template(sc.autoscaler.template_name)) {
                    ctx.fail("$.autoscaler.template", "unknown template '" + sc.autoscaler.template_name + "'");
                }
                sc.autoscaler.provisioning_interval = static_cast<SimTime>(
                    get_int(ctx, j, "$.autoscaler", "provisioning_interval_s", true, 1).value_or(1));
            } else {
                ctx.fail("$.autoscaler.kind", "unknown autoscaler '" + kind + "'");
            }
        }
    } else {
        ctx.fail("$.autoscaler", "missing");
    }

    if (!doc.contains("workload") || !doc.at("workload").is_object()) {
        ctx.fail("$.workload", "must be an object");
    } else {
        const json& j = doc.at("workload");
        if (j.contains("batch")) {
            const json& b = j.at("batch");
            if (expect_object(ctx, b, "$.workload.batch")) {
                BatchSpec spec;
                spec.count = static_cast<std::uint32_t>(
                    get_int(ctx, b, "$.workload.batch", "count", true, 1).value_or(1));
                spec.interarrival = static_cast<SimTime>(
                    get_int(ctx, b, "$.workload.batch", "interarrival_s", true, 0).value_or(0));
                spec.request.cpu_m = get_int(ctx, b, "$.workload.batch", "cpu_m", true, 1).value_or(1);
                spec.request.mem_mib = get_int(ctx, b, "$.workload.batch", "mem_mib", true, 1).value_or(1);
                spec.duration = static_cast<SimTime>(
                    get_int(ctx, b, "$.workload.batch", "duration_s", true, 1).value_or(1));
                sc.workload.batch = spec;
            }
        }
        if (auto tp = get_string(ctx, j, "$.workload", "trace", false)) {
            std::filesystem::path p(*tp);
            if (p.is_relative() && !ctx.base_dir.empty()) p = std::filesystem::path(ctx.base_dir) / p;
            sc.workload.trace_path = p.string();
        }
        if (j.contains("pods")) {
            const json& arr = j.at("pods");
            if (!arr.is_array()) {
                ctx.fail("$.workload.pods", "must be an array");
            } else {
                for (std::size_t i = 0; i < arr.size(); ++i) {
                    const std::string path = "$.workload.pods[" + std::to_string(i) + "]";
                    if (!expect_object(ctx, arr[i], path)) continue;
                    sc.workload.inline_pods.push_back(parse_inline_pod(ctx, arr[i], path));
                }
            }
        }
        if (!sc.workload.batch && sc.workload.trace_path.empty() && sc.workload.inline_pods.empty() &&
            !doc.contains("services")) {
            ctx.fail("$.workload", "needs at least one of batch, trace, pods");
        }
    }

    if (doc.contains("services")) {
        const json& arr = doc.at("services");
        if (!arr.is_array()) {
            ctx.fail("$.services", "must be an array");
        } else {
            for (std::size_t i = 0; i < arr.size(); ++i) {
                const std::string path = "$.services[" + std::to_string(i) + "]";
                if (!expect_object(ctx, arr[i], path)) continue;
                const json& s = arr[i];
                ServiceSpec svc;
                svc.name = get_string(ctx, s, path, "name", true).value_or("");
                svc.replicas = static_cast<std::uint32_t>(get_int(ctx, s, path, "replicas", true, 1).value_or(1));
                svc.request.cpu_m = get_int(ctx, s, path, "cpu_m", true, 1).value_or(1);
                svc.request.mem_mib = get_int(ctx, s, path, "mem_mib", true, 1).value_or(1);
                if (auto a = get_string(ctx, s, path, "app_class", false)) {
                    auto v = app_class_from_name(*a);
                    if (!v || !is_service_class(*v)) {
                        ctx.fail(path + ".app_class", "must be a service class");
                    } else {
                        svc.app_class = *v;
                    }
                }
                if (auto m = get_string(ctx, s, path, "movability", false)) {
                    auto v = movability_from_name(*m);
                    if (!v) {
                        ctx.fail(path + ".movability", "unknown value '" + *m + "'");
                    } else {
                        svc.movability = *v;
                    }
                }
                svc.threshold = get_number(ctx, s, path, "threshold", false).value_or(0.8);
                if (svc.threshold <= 0.0 || svc.threshold > 1.0) ctx.fail(path + ".threshold", "must be in (0, 1]");
                svc.lower_threshold = get_number(ctx, s, path, "lower_threshold", false).value_or(0.0);
                if (svc.lower_threshold < 0.0 || svc.lower_threshold >= svc.threshold) {
                    if (svc.lower_threshold != 0.0) {
                        ctx.fail(path + ".lower_threshold", "must be in [0, threshold)");
                    }
                }
                svc.min_replicas = static_cast<std::uint32_t>(
                    get_int(ctx, s, path, "min_replicas", false, 0).value_or(1));
                svc.max_replicas = static_cast<std::uint32_t>(
                    get_int(ctx, s, path, "max_replicas", false, 1).value_or(16));
                if (s.contains("cpu_profile")) {
                    svc.cpu_profile = parse_profile(ctx, s.at("cpu_profile"), path + ".cpu_profile");
                }
                sc.services.push_back(std::move(svc));
            }
        }
    }

    if (doc.contains("consolidation")) {
        const json& j = doc.at("consolidation");
        if (expect_object(ctx, j, "$.consolidation")) {
            sc.consolidation.enabled = get_bool(ctx, j, "$.consolidation", "enabled", true).value_or(false);
            sc.consolidation.utilization_threshold =
                get_number(ctx, j, "$.consolidation", "utilization_threshold", false).value_or(0.7);
            if (sc.consolidation.utilization_threshold <= 0.0 || sc.consolidation.utilization_threshold > 1.0) {
                ctx.fail("$.consolidation.utilization_threshold", "must be in (0, 1]");
            }
        }
    }

    if (doc.contains("estimator")) {
        const json& j = doc.at("estimator");
        if (expect_object(ctx, j, "$.estimator")) {
            if (auto s = get_string(ctx, j, "$.estimator", "statistic", false)) {
                if (*s == "median") {
                    sc.estimator.statistic = EstimatorStatistic::Median;
                } else if (*s == "mean") {
                    sc.estimator.statistic = EstimatorStatistic::Mean;
                } else {
                    ctx.fail("$.estimator.statistic", "must be 'median' or 'mean'");
                }
            }
            if (auto w = get_int(ctx, j, "$.estimator", "window", false, 1)) {
                sc.estimator.window = static_cast<std::size_t>(*w);
            }
            if (auto m = get_number(ctx, j, "$.estimator", "safety_margin", false)) {
                if (*m < 1.0) {
                    ctx.fail("$.estimator.safety_margin", "must be >= 1.0");
                } else {
                    sc.estimator.safety_margin_pct = static_cast<std::uint32_t>(std::llround(*m * 100.0));
                }
            }
        }
    }

    if (doc.contains("preemption")) {
        const json& j = doc.at("preemption");
        if (expect_object(ctx, j, "$.preemption")) {
            sc.preemption.rate_per_node_hour =
                get_number(ctx, j, "$.preemption", "rate_per_node_hour", true).value_or(0.0);
            if (sc.preemption.rate_per_node_hour < 0.0) {
                ctx.fail("$.preemption.rate_per_node_hour", "must be >= 0");
            }
        }
    }

    if (doc.contains("overheads")) {
        const json& j = doc.at("overheads");
        if (expect_object(ctx, j, "$.overheads")) {
            sc.overheads.pod_start_overhead =
                static_cast<SimTime>(get_int(ctx, j, "$.overheads", "pod_start_s", false, 0).value_or(0));
            sc.overheads.runtime_overhead =
                static_cast<SimTime>(get_int(ctx, j, "$.overheads", "runtime_s", false, 0).value_or(25));
        }
    }

    if (doc.contains("timing")) {
        const json& j = doc.at("timing");
        if (expect_object(ctx, j, "$.timing")) {
            sc.scheduling_cycle =
                static_cast<SimTime>(get_int(ctx, j, "$.timing", "scheduling_cycle_s", false, 1).value_or(10));
            sc.monitoring_timestep =
                static_cast<SimTime>(get_int(ctx, j, "$.timing", "monitoring_timestep_s", false, 1).value_or(20));
        }
    }

    if (doc.contains("rescheduling")) {
        const json& j = doc.at("rescheduling");
        if (expect_object(ctx, j, "$.rescheduling")) {
            sc.checkpoint_rate_mib_s =
                static_cast<SimTime>(get_int(ctx, j, "$.rescheduling", "checkpoint_rate_mib_s", false, 1).value_or(256));
        }
    }

    if (doc.contains("billing")) {
        const json& j = doc.at("billing");
        if (expect_object(ctx, j, "$.billing")) {
            if (auto s = get_string(ctx, j, "$.billing", "cutoff", false)) {
                if (*s == "last_bind") {
                    sc.billing_cutoff = BillingCutoff::LastBind;
                } else if (*s == "run_end") {
                    sc.billing_cutoff = BillingCutoff::RunEnd;
                } else {
                    ctx.fail("$.billing.cutoff", "must be 'last_bind' or 'run_end'");
                }
            }
        }
    }

    // Cross-field checks that need the whole document.
    if (result.errors.empty()) {
        SimTime last_arrival = 0;
        if (sc.workload.batch && sc.workload.batch->count > 0) {
            last_arrival = std::max(last_arrival,
                                    static_cast<SimTime>(sc.workload.batch->count - 1) * sc.workload.batch->interarrival);
        }
        for (const Pod& p : sc.workload.inline_pods) last_arrival = std::max(last_arrival, p.submit_time);
        if (sc.horizon < last_arrival) {
            ctx.fail("$.horizon_s", "horizon ends before the last workload arrival at t=" +
                                        std::to_string(last_arrival));
        }
    }

    if (result.errors.empty()) result.scenario = std::move(sc);
    return result;
}

ScenarioLoadResult load_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        ScenarioLoadResult r;
        r.errors.push_back(path + ": cannot open scenario file");
        return r;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_json(buf.str(), std::filesystem::path(path).parent_path().string());
}

std::vector<Pod> materialize_workload(const Scenario& scenario) {
    std::vector<Pod> pods;
    if (scenario.workload.batch) {
        pods = homogeneous_batch(*scenario.workload.batch);
    }
    if (!scenario.workload.trace_path.empty()) {
        std::vector<Pod> traced = load_trace(scenario.workload.trace_path);
        pods.insert(pods.end(), traced.begin(), traced.end());
    }
    pods.insert(pods.end(), scenario.workload.inline_pods.begin(), scenario.workload.inline_pods.end());
    // Stable order: by submit time, original position as the tie-break, so
    // the pending queue sees one deterministic arrival sequence.
    std::stable_sort(pods.begin(), pods.end(),
                     [](const Pod& a, const Pod& b) { return a.submit_time < b.submit_time; });
    return pods;
}

}  // namespace orchsim
