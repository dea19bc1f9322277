#include "slot_oracle.hpp"

#include <algorithm>
#include <functional>
#include <queue>

namespace orchsim_test {

SlotModelResult slot_model_bind_times(const std::vector<std::uint64_t>& arrivals, std::size_t slot_count,
                                      std::uint64_t service_s) {
    std::priority_queue<std::uint64_t, std::vector<std::uint64_t>, std::greater<std::uint64_t>> free_at;
    for (std::size_t s = 0; s < slot_count; ++s) free_at.push(0);

    SlotModelResult result;
    result.bind_times.reserve(arrivals.size());
    for (std::uint64_t a : arrivals) {
        const std::uint64_t slot_free = free_at.top();
        free_at.pop();
        const std::uint64_t bind = std::max(a, slot_free);
        free_at.push(bind + service_s);
        result.bind_times.push_back(bind);
        result.last_bind = std::max(result.last_bind, bind);
        result.delay_sum += bind - a;
    }
    return result;
}

std::vector<std::int64_t> slot_model_backlog(const std::vector<std::uint64_t>& arrivals,
                                             const std::vector<std::uint64_t>& bind_times,
                                             const std::vector<std::uint64_t>& sample_times) {
    std::vector<std::int64_t> out;
    out.reserve(sample_times.size());
    for (std::uint64_t t : sample_times) {
        std::int64_t arrived = 0;
        for (std::uint64_t a : arrivals) {
            if (a <= t) ++arrived;
        }
        std::int64_t bound_before = 0;
        for (std::uint64_t b : bind_times) {
            if (b < t) ++bound_before;
        }
        out.push_back(arrived - bound_before);
    }
    return out;
}

}  // namespace orchsim_test
