#pragma once

#include <cmath>
#include <cstdint>

namespace orchsim {

// Deterministic PRNG with a fixed, platform-independent algorithm.
//
// The standard <random> engines are portable but the distributions are not
// (the standard leaves their algorithms unspecified), so two builds on
// different toolchains can disagree on the draw sequence. Simulation runs
// must be reproducible from (scenario, seed) alone, therefore both the
// generator and the draw functions are pinned here.
//
// Generator: SplitMix64 (Steele, Lea, Flood 2014). 64-bit state, one
// multiply-xor-shift round per output, passes BigCrush when used as a
// stream.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform draw in [0, n). Fixed-point multiply-shift reduction; the
    // bias for any n representable here is below 2^-32 and irrelevant for
    // scheduling choices among at most a few thousand candidates.
    std::uint64_t bounded(std::uint64_t n) {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // Uniform double in [0, 1) with 53 significant bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Exponential inter-arrival draw with the given rate (events per unit
    // time). Inverse-CDF on a (0, 1] uniform so the log argument never hits
    // zero.
    double exponential(double rate) {
        double u = 1.0 - uniform01();
        return -std::log(u) / rate;
    }

    // Derives an independent stream for a subcomponent, e.g. the revocation
    // clock of one node. Mixing the tag through one SplitMix round keeps
    // streams with adjacent tags uncorrelated.
    Rng derive(std::uint64_t tag) const {
        Rng mixer(state_ ^ (tag * 0xd1342543de82ef95ULL));
        return Rng(mixer.next_u64());
    }

private:
    std::uint64_t state_;
};

}  // namespace orchsim
