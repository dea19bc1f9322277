#pragma once

#include <cstdint>
#include <vector>

namespace orchsim_test {

// Independent reference model for FCFS placement of identical jobs on a
// fixed pool of identical execution slots. Deliberately knows nothing
// about the simulator: no events, no cycles, no nodes — just a min-heap of
// slot free times. Pod i arrives at arrivals[i] (ascending), occupies one
// slot for service_s seconds, and binds the moment it has both arrived and
// a slot is free.
struct SlotModelResult {
    std::vector<std::uint64_t> bind_times;  // per pod, arrival order
    std::uint64_t last_bind = 0;
    std::uint64_t delay_sum = 0;  // sum over pods of bind - arrival
};

SlotModelResult slot_model_bind_times(const std::vector<std::uint64_t>& arrivals, std::size_t slot_count,
                                      std::uint64_t service_s);

// Queue depth of the same model at time t: pods arrived at or before t
// minus pods bound strictly before t. One value per entry of sample_times.
std::vector<std::int64_t> slot_model_backlog(const std::vector<std::uint64_t>& arrivals,
                                             const std::vector<std::uint64_t>& bind_times,
                                             const std::vector<std::uint64_t>& sample_times);

}  // namespace orchsim_test
