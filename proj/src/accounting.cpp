#include "orchsim/accounting.hpp"

#include <cstdio>

namespace orchsim {

std::uint64_t billed_periods(SimTime active, SimTime period) {
    if (period == 0) {
        throw SimError("billed_periods: zero billing period");
    }
    return (active + period - 1) / period;
}

BillingRecord node_cost(const Node& node, const NodeTemplate& tpl, SimTime cutoff) {
    BillingRecord rec;
    rec.node_id = node.id;
    rec.pricing = tpl.pricing;
    rec.billed_from = node.launch_time;
    rec.billed_to = node.terminate_time ? std::min(*node.terminate_time, cutoff) : cutoff;
    if (rec.billed_to < rec.billed_from) rec.billed_to = rec.billed_from;

    if (tpl.pricing == PricingModel::Reserved) {
        // Prepaid commitment: the flat rate is owed no matter how much of
        // the window the node was up.
        rec.periods = 1;
        rec.amount_micro = tpl.rate_micro;
        return rec;
    }
    rec.periods = billed_periods(rec.billed_to - rec.billed_from, tpl.billing_period);
    // 128-bit intermediate: periods * rate * ppm can pass 2^63 long before
    // any realistic bill does after the division.
    unsigned __int128 amount = static_cast<unsigned __int128>(rec.periods) * static_cast<unsigned __int128>(tpl.rate_micro);
    if (tpl.pricing == PricingModel::Preemptible) {
        amount = amount * tpl.discount_ppm / 1000000u;
    }
    rec.amount_micro = static_cast<Money>(amount);
    return rec;
}

CostSummary total_cost(const Cluster& cluster, SimTime cutoff) {
    CostSummary summary;
    for (const Node& n : cluster.nodes()) {
        BillingRecord rec = node_cost(n, cluster.node_template(n.template_index), cutoff);
        summary.total_micro += rec.amount_micro;
        summary.records.push_back(std::move(rec));
    }
    return summary;
}

std::string format_usd(Money micro) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", static_cast<double>(micro) / 1e6);
    return buf;
}

}  // namespace orchsim
