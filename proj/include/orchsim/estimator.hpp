#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>

#include "orchsim/cluster.hpp"
#include "orchsim/types.hpp"

namespace orchsim {

enum class EstimatorStatistic : std::uint8_t {
    Median,  // lower median for even sample counts
    Mean,    // integer mean, floored
};

struct EstimatorConfig {
    EstimatorStatistic statistic = EstimatorStatistic::Median;
    std::size_t window = 3;            // newest samples kept per key
    std::uint32_t safety_margin_pct = 120;  // estimate is scaled by this / 100
};

// Windowed usage statistics per pod, aggregated per application class as a
// fallback while a pod is still warming up its own window.
//
// Estimates drive opportunistic capacity: the reservation for a bound pod
// is min(statistic * margin, request), so oversubscription can only shrink
// a pod's footprint, never grow it past what was requested.
class UsageEstimator {
public:
    explicit UsageEstimator(EstimatorConfig config) : config_(config) {}

    const EstimatorConfig& config() const { return config_; }

    // Records one monitoring sample for the pod. Samples must be
    // non-negative; time may repeat (the newer sample still enters the
    // window).
    void record(const Pod& pod, SimTime t, ResourceVector usage);

    // Windowed statistic scaled by the safety margin and capped at the
    // request. Empty window -> nullopt.
    std::optional<ResourceVector> estimate_for(const Pod& pod) const;

    // The footprint to reserve for a bound pod under opportunistic
    // capacity: the estimate when one exists, the full request otherwise.
    ResourceVector reservation_for(const Pod& pod) const;

    std::size_t sample_count(const std::string& pod_id) const;

private:
    struct Window {
        std::deque<ResourceVector> samples;
    };

    std::optional<ResourceVector> estimate_from(const Window& w, const ResourceVector& cap) const;

    EstimatorConfig config_;
    std::map<std::string, Window> per_pod_;
    std::map<AppClass, Window> per_class_;
};

}  // namespace orchsim
