#pragma once

#include <string>
#include <vector>

#include "orchsim/cluster.hpp"
#include "orchsim/rng.hpp"
#include "orchsim/types.hpp"

namespace orchsim {

struct BatchSpec {
    std::uint32_t count = 0;
    SimTime interarrival = 10;
    ResourceVector request;
    SimTime duration = 0;
    std::string id_prefix = "pod-";
};

// count identical batch pods submitted every interarrival seconds starting
// at t=0: stateless, fault tolerant, no deadline.
std::vector<Pod> homogeneous_batch(const BatchSpec& spec);

// Workload files carry one pod per record with the columns
//   id,submit_s,cpu_m,mem_mib,duration_s,app_class,movability,fault_tolerant,deadline_s
// either as CSV with exactly that header or as JSON lines with those keys.
// deadline_s is empty/absent for pods without one. Parse errors name the
// offending line and field.
std::vector<Pod> load_trace(const std::string& path);
std::vector<Pod> parse_trace_csv(const std::string& text, const std::string& origin);
std::vector<Pod> parse_trace_jsonl(const std::string& text, const std::string& origin);

// Canonical CSV form of a pod list; load_trace(serialize(x)) == x and
// re-serializing is byte-stable.
std::string serialize_trace_csv(const std::vector<Pod>& pods);

struct RevocationEvent {
    NodeIndex node = 0;
    SimTime t = 0;
};

// Draws per-node revocation times from an exponential inter-arrival
// process with the given rate (events per node per hour), truncated at the
// horizon. Each node gets its own derived stream keyed by its index, so
// adding a node never shifts another node's draws. The result is sorted by
// (t, node).
std::vector<RevocationEvent> preemption_events(const Rng& rng, double rate_per_node_hour, SimTime horizon,
                                               const std::vector<NodeIndex>& preemptible_nodes,
                                               const std::vector<SimTime>& active_from);

}  // namespace orchsim
