#include <doctest.h>

#include <array>
#include <cmath>

#include "orchsim/rng.hpp"

using namespace orchsim;

TEST_CASE("generator reproduces the published splitmix64 sequence") {
    // Reference outputs of splitmix64 for seed 0, from the original
    // public-domain implementation. Pinning these guards the exact draw
    // sequence across compilers and platforms.
    Rng rng(0);
    CHECK(rng.next_u64() == 0xe220a8397b1dcdafULL);
    CHECK(rng.next_u64() == 0x6e789e6aa1b965f4ULL);
    CHECK(rng.next_u64() == 0x06c45d188009454fULL);
}

TEST_CASE("same seed, same stream; different seed, different stream") {
    Rng a(42), b(42), c(43);
    bool all_equal = true;
    bool any_equal_to_c = false;
    for (int i = 0; i < 64; ++i) {
        std::uint64_t va = a.next_u64();
        std::uint64_t vb = b.next_u64();
        std::uint64_t vc = c.next_u64();
        all_equal = all_equal && (va == vb);
        any_equal_to_c = any_equal_to_c || (va == vc);
    }
    CHECK(all_equal);
    CHECK_FALSE(any_equal_to_c);
}

TEST_CASE("bounded draws stay in range and cover the buckets") {
    Rng rng(7);
    std::array<int, 4> buckets{};
    for (int i = 0; i < 4000; ++i) {
        std::uint64_t v = rng.bounded(4);
        REQUIRE(v < 4);
        ++buckets[v];
    }
    for (int count : buckets) {
        CHECK(count > 800);  // fair to ~2x either way; catches gross bias
        CHECK(count < 1200);
    }
    CHECK(rng.bounded(1) == 0);
}

TEST_CASE("uniform01 lies in the half-open unit interval") {
    Rng rng(99);
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < 10000; ++i) {
        double u = rng.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    CHECK(lo < 0.01);
    CHECK(hi > 0.99);
}

TEST_CASE("exponential draws average to one over the rate") {
    Rng rng(2026);
    const double rate = 2.0;
    double sum = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        double x = rng.exponential(rate);
        REQUIRE(x >= 0.0);
        sum += x;
    }
    const double mean = sum / n;
    CHECK(mean == doctest::Approx(1.0 / rate).epsilon(0.05));
}

TEST_CASE("derived streams are repeatable and independent of the parent") {
    const Rng parent(42);
    Rng d1 = parent.derive(1);
    Rng d1_again = parent.derive(1);
    Rng d2 = parent.derive(2);

    CHECK(d1.next_u64() == d1_again.next_u64());
    CHECK(d1.next_u64() == d1_again.next_u64());

    // Adjacent tags must not produce the same stream.
    Rng d1b = parent.derive(1);
    Rng d2b = parent.derive(2);
    int equal = 0;
    for (int i = 0; i < 16; ++i) {
        if (d1b.next_u64() == d2b.next_u64()) ++equal;
    }
    CHECK(equal == 0);

    // Deriving must not consume from the parent: a fresh copy of the
    // parent continues identically.
    Rng p1(42), p2(42);
    (void)p1.next_u64();
    p2.derive(77);
    (void)p2.next_u64();
    CHECK(p1.next_u64() == p2.next_u64());
}
