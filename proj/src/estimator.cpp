#include "orchsim/estimator.hpp"

#include <algorithm>
#include <vector>

namespace orchsim {

void UsageEstimator::record(const Pod& pod, SimTime /*t*/, ResourceVector usage) {
    if (!usage.non_negative()) {
        throw SimError("usage sample for " + pod.id + " is negative");
    }
    auto push = [&](Window& w) {
        w.samples.push_back(usage);
        while (w.samples.size() > config_.window) w.samples.pop_front();
    };
    push(per_pod_[pod.id]);
    push(per_class_[pod.app_class]);
}

static std::int64_t lower_median(std::vector<std::int64_t> v) {
    std::sort(v.begin(), v.end());
    return v[(v.size() - 1) / 2];
}

static std::int64_t floored_mean(const std::vector<std::int64_t>& v) {
    std::int64_t sum = 0;
    for (std::int64_t x : v) sum += x;
    return sum / static_cast<std::int64_t>(v.size());
}

std::optional<ResourceVector> UsageEstimator::estimate_from(const Window& w, const ResourceVector& cap) const {
    if (w.samples.empty()) return std::nullopt;
    std::vector<std::int64_t> cpu, mem;
    cpu.reserve(w.samples.size());
    mem.reserve(w.samples.size());
    for (const ResourceVector& s : w.samples) {
        cpu.push_back(s.cpu_m);
        mem.push_back(s.mem_mib);
    }
    ResourceVector est;
    if (config_.statistic == EstimatorStatistic::Median) {
        est = {lower_median(std::move(cpu)), lower_median(std::move(mem))};
    } else {
        est = {floored_mean(cpu), floored_mean(mem)};
    }
    // Integer margin scaling, floored, then capped at the request.
    est.cpu_m = est.cpu_m * config_.safety_margin_pct / 100;
    est.mem_mib = est.mem_mib * config_.safety_margin_pct / 100;
    est.cpu_m = std::min(est.cpu_m, cap.cpu_m);
    est.mem_mib = std::min(est.mem_mib, cap.mem_mib);
    return est;
}

std::optional<ResourceVector> UsageEstimator::estimate_for(const Pod& pod) const {
    auto it = per_pod_.find(pod.id);
    // A pod that has not yet filled its own window borrows the class-wide
    // aggregate, which smooths cold starts of short-lived pods.
    if (it == per_pod_.end() || it->second.samples.size() < config_.window) {
        auto cit = per_class_.find(pod.app_class);
        if (cit != per_class_.end() && !cit->second.samples.empty()) {
            return estimate_from(cit->second, pod.request);
        }
    }
    if (it == per_pod_.end()) return std::nullopt;
    return estimate_from(it->second, pod.request);
}

ResourceVector UsageEstimator::reservation_for(const Pod& pod) const {
    std::optional<ResourceVector> est = estimate_for(pod);
    return est.value_or(pod.request);
}

std::size_t UsageEstimator::sample_count(const std::string& pod_id) const {
    auto it = per_pod_.find(pod_id);
    return it == per_pod_.end() ? 0 : it->second.samples.size();
}

}  // namespace orchsim
