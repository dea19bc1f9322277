#pragma once

#include <string>
#include <vector>

#include "orchsim/cluster.hpp"
#include "orchsim/types.hpp"

namespace orchsim {

// Per-period worker rates in micro-dollars per minute for the reference
// 1 vCPU / 4 GB worker. The provider's quoted price and the effective rate
// backed out of observed bills differ; scenarios pick one explicitly and
// the fitted rate is the default in the shipped configurations.
constexpr Money k_worker_rate_fitted_micro = 792;
constexpr Money k_worker_rate_quoted_micro = 11000;

// Number of billing periods charged for an active window of `active`
// seconds: ceil(active / period). Zero seconds costs zero periods; any
// started period is charged in full.
std::uint64_t billed_periods(SimTime active, SimTime period);

struct BillingRecord {
    std::string node_id;
    PricingModel pricing = PricingModel::OnDemand;
    SimTime billed_from = 0;
    SimTime billed_to = 0;
    std::uint64_t periods = 0;
    Money amount_micro = 0;
};

// Cost of one node when billing stops at `cutoff`: on-demand pays
// periods * rate, preemptible additionally applies its rebate, reserved is
// a flat prepaid amount independent of how long the node ran. A node
// terminated before the cutoff is billed to its termination instead.
BillingRecord node_cost(const Node& node, const NodeTemplate& tpl, SimTime cutoff);

struct CostSummary {
    std::vector<BillingRecord> records;  // in node order
    Money total_micro = 0;
};

CostSummary total_cost(const Cluster& cluster, SimTime cutoff);

// "0.42" style display rounding; all internal math stays in micro-dollars.
std::string format_usd(Money micro);

}  // namespace orchsim
