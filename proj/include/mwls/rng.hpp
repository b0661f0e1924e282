#pragma once

#include <array>
#include <cstdint>

namespace mwls {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds.
PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key);

/// Independent purposes a stream can serve; part of the counter so that
/// streams for different purposes never overlap.
enum class StreamDomain : std::uint32_t {
    Cloud = 1,
    Fresh = 2,
    ApproxFit = 3,
    ApproxEval = 4,
    Test = 5,
};

/// Counter-based stream identified by (seed, domain, a, b).
///
/// The counter is {block, b, a, domain} and the key is the seed split in
/// two words; block increments with every four 32-bit outputs consumed.
class Stream {
public:
    Stream(std::uint64_t seed, StreamDomain domain, std::uint32_t a, std::uint32_t b);

    std::uint32_t next_u32();
    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform();
    /// Standard normal via Box-Muller; the second variate is cached.
    double normal();

private:
    PhiloxKey key_;
    PhiloxCounter ctr_;
    PhiloxCounter buf_{};
    int pos_ = 4;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace mwls
