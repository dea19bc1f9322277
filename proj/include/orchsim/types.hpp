#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace orchsim {

// Simulation time in whole seconds since run start.
using SimTime = std::uint64_t;

// Money in integer micro-dollars. All billing math is exact integer
// arithmetic; rounding to display units happens only when reports are
// rendered.
using Money = std::int64_t;

using PodIndex = std::uint32_t;
using NodeIndex = std::uint32_t;

constexpr SimTime k_seconds_per_minute = 60;

// Raised on contract violations inside the simulation (causality breaks,
// illegal state transitions, capacity overcommit). These indicate a policy
// or driver bug, not bad user input.
class SimError : public std::runtime_error {
public:
    explicit SimError(const std::string& what) : std::runtime_error(what) {}
};

// Raised on malformed user input (scenario files, workload traces).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Requested or consumed resources. cpu is in millicores, memory in MiB.
// Signed so that transient arithmetic (free = capacity - used) can be
// checked for underflow instead of wrapping.
struct ResourceVector {
    std::int64_t cpu_m = 0;
    std::int64_t mem_mib = 0;

    ResourceVector operator+(const ResourceVector& o) const { return {cpu_m + o.cpu_m, mem_mib + o.mem_mib}; }
    ResourceVector operator-(const ResourceVector& o) const { return {cpu_m - o.cpu_m, mem_mib - o.mem_mib}; }
    ResourceVector& operator+=(const ResourceVector& o) {
        cpu_m += o.cpu_m;
        mem_mib += o.mem_mib;
        return *this;
    }
    ResourceVector& operator-=(const ResourceVector& o) {
        cpu_m -= o.cpu_m;
        mem_mib -= o.mem_mib;
        return *this;
    }
    bool operator==(const ResourceVector& o) const = default;

    // Componentwise comparison: true iff this fits inside o.
    bool fits_in(const ResourceVector& o) const { return cpu_m <= o.cpu_m && mem_mib <= o.mem_mib; }
    bool non_negative() const { return cpu_m >= 0 && mem_mib >= 0; }
};

inline double minutes(SimTime seconds) { return static_cast<double>(seconds) / 60.0; }

}  // namespace orchsim
