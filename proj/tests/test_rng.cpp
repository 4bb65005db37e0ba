#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "gnnbench/rng.hpp"

using namespace gnnbench;

TEST_SUITE("rng") {

TEST_CASE("same seed reproduces the sequence") {
    XorShift64 a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
}

TEST_CASE("different seeds diverge") {
    XorShift64 a(1), b(2);
    int differing = 0;
    for (int i = 0; i < 16; ++i)
        if (a.next() != b.next()) ++differing;
    CHECK(differing > 0);
}

TEST_CASE("zero seed is usable") {
    XorShift64 a(0);
    std::uint64_t x = a.next();
    std::uint64_t y = a.next();
    CHECK(x != y);
}

TEST_CASE("streams with different purposes are distinct") {
    XorShift64 a = XorShift64::stream(7, 1);
    XorShift64 b = XorShift64::stream(7, 2);
    CHECK(a.next() != b.next());

    XorShift64 c = XorShift64::stream(7, 1);
    XorShift64 d = XorShift64::stream(7, 1);
    for (int i = 0; i < 16; ++i) CHECK(c.next() == d.next());
}

TEST_CASE("next_float stays in [0, 1)") {
    XorShift64 rng(3);
    for (int i = 0; i < 1000; ++i) {
        float x = rng.next_float();
        CHECK(x >= 0.0f);
        CHECK(x < 1.0f);
    }
}

TEST_CASE("next_float range form stays in [lo, hi)") {
    XorShift64 rng(4);
    for (int i = 0; i < 1000; ++i) {
        float x = rng.next_float(-0.1f, 0.1f);
        CHECK(x >= -0.1f);
        CHECK(x < 0.1f);
    }
}

TEST_CASE("next_below stays under the bound") {
    XorShift64 rng(5);
    for (int i = 0; i < 1000; ++i) CHECK(rng.next_below(17) < 17);
    for (int i = 0; i < 10; ++i) CHECK(rng.next_below(1) == 0);
}

TEST_CASE("next_below covers the range") {
    XorShift64 rng(6);
    std::vector<int> seen(8, 0);
    for (int i = 0; i < 1000; ++i) ++seen[rng.next_below(8)];
    for (int count : seen) CHECK(count > 0);
}

TEST_CASE("fnv1a64 known vectors") {
    CHECK(fnv1a64("", 0) == 14695981039346656037ULL);
    CHECK(fnv1a64("a", 1) == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar", 6) == 0x85944171f73967e8ULL);
}

TEST_CASE("fnv1a64 is order sensitive") {
    CHECK(fnv1a64("ab", 2) != fnv1a64("ba", 2));
}

TEST_CASE("fnv1a64 matches on identical buffers") {
    std::vector<float> v{1.5f, -2.25f, 0.0f, 3.0f};
    std::vector<float> w = v;
    CHECK(fnv1a64(v.data(), v.size() * sizeof(float))
          == fnv1a64(w.data(), w.size() * sizeof(float)));
    w[3] = 3.0000002f;
    CHECK(fnv1a64(v.data(), v.size() * sizeof(float))
          != fnv1a64(w.data(), w.size() * sizeof(float)));
}

} // TEST_SUITE
