#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "mwls/rng.hpp"

using namespace mwls;

TEST_CASE("philox4x32-10 known answers") {
    CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) ==
          PhiloxCounter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                        {0xffffffffu, 0xffffffffu}) ==
          PhiloxCounter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                        {0xa4093822u, 0x299f31d0u}) ==
          PhiloxCounter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("stream is a pure function of its identity") {
    Stream a(42, StreamDomain::Cloud, 3, 7);
    Stream b(42, StreamDomain::Cloud, 3, 7);
    for (int k = 0; k < 1000; ++k) REQUIRE(a.next_u32() == b.next_u32());
}

TEST_CASE("distinct identities give distinct outputs") {
    std::set<std::uint32_t> firsts;
    for (std::uint32_t a = 0; a < 4; ++a)
        for (std::uint32_t b = 0; b < 4; ++b)
            for (auto dom : {StreamDomain::Cloud, StreamDomain::Fresh})
                for (std::uint64_t seed : {1ULL, 2ULL, (1ULL << 40) + 1}) {
                    Stream s(seed, dom, a, b);
                    firsts.insert(s.next_u32());
                }
    CHECK(firsts.size() == 4 * 4 * 2 * 3);
}

TEST_CASE("uniform lies in the open unit interval with the right moments") {
    Stream s(9, StreamDomain::Test, 0, 0);
    const int n = 200000;
    double sum = 0.0, sq = 0.0;
    for (int k = 0; k < n; ++k) {
        const double u = s.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        sum += u;
        sq += u * u;
    }
    CHECK(std::abs(sum / n - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
    CHECK(std::abs(sq / n - 1.0 / 3.0) < 0.005);
}

TEST_CASE("normal variates have unit variance and light tails") {
    Stream s(11, StreamDomain::Test, 1, 0);
    const int n = 200000;
    double sum = 0.0, sq = 0.0, q4 = 0.0;
    int beyond3 = 0;
    for (int k = 0; k < n; ++k) {
        const double g = s.normal();
        sum += g;
        sq += g * g;
        q4 += g * g * g * g;
        if (std::abs(g) > 3.0) ++beyond3;
    }
    CHECK(std::abs(sum / n) < 4.0 / std::sqrt(n));
    CHECK(std::abs(sq / n - 1.0) < 4.0 * std::sqrt(2.0 / n));
    CHECK(std::abs(q4 / n - 3.0) < 0.1);
    // P(|G| > 3) = 0.0026998
    CHECK(std::abs(beyond3 / double(n) - 0.0026998) < 0.0006);
}
