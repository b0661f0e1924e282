#include "mwls/cloud.hpp"

#include <bit>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>

#include "mwls/error.hpp"
#include "mwls/parallel.hpp"

namespace mwls {

static_assert(std::endian::native == std::endian::little, "cloud dump assumes little-endian hosts");

SimulationCloud sample_cloud(const MarkovModel& model, const TimeGrid& grid, int i, std::int64_t M,
                             std::uint64_t seed, StreamDomain domain) {
    if (i < 0 || i >= grid.N()) throw ValidationError("cloud index out of range");
    if (M < 1) throw ValidationError("cloud size must be at least 1");
    if (M > std::numeric_limits<std::uint32_t>::max()) throw ValidationError("cloud size too large");
    SimulationCloud c;
    c.i = i;
    c.N = grid.N();
    c.d = model.d();
    c.q = model.q();
    c.seed = seed;
    c.domain = domain;
    c.X.resize(M, static_cast<Eigen::Index>(grid.N() - i + 1) * c.d);
    c.H.resize(M, static_cast<Eigen::Index>(grid.N() - i) * c.q);
    parallel_for(M, [&](std::int64_t m) {
        Stream s(seed, domain, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(m));
        model.sample_row(grid, i, s, c.X.data() + m * c.X.cols(), c.H.data() + m * c.H.cols(), m);
    });
    return c;
}

namespace {

void put_i64(std::ostream& out, std::int64_t v) { out.write(reinterpret_cast<const char*>(&v), sizeof v); }

std::int64_t get_i64(std::istream& in) {
    std::int64_t v = 0;
    if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw ValidationError("truncated cloud dump");
    return v;
}

}  // namespace

void write_cloud(const SimulationCloud& c, std::ostream& out) {
    put_i64(out, c.i);
    put_i64(out, c.N);
    put_i64(out, c.d);
    put_i64(out, c.q);
    put_i64(out, c.M());
    put_i64(out, static_cast<std::int64_t>(c.seed));
    put_i64(out, static_cast<std::int64_t>(c.domain));
    for (std::int64_t m = 0; m < c.M(); ++m) {
        out.write(reinterpret_cast<const char*>(c.X.data() + m * c.X.cols()),
                  static_cast<std::streamsize>(c.X.cols() * sizeof(double)));
        out.write(reinterpret_cast<const char*>(c.H.data() + m * c.H.cols()),
                  static_cast<std::streamsize>(c.H.cols() * sizeof(double)));
    }
    if (!out) throw ValidationError("failed to write cloud dump");
}

SimulationCloud read_cloud(std::istream& in) {
    SimulationCloud c;
    c.i = static_cast<int>(get_i64(in));
    c.N = static_cast<int>(get_i64(in));
    c.d = static_cast<int>(get_i64(in));
    c.q = static_cast<int>(get_i64(in));
    const std::int64_t M = get_i64(in);
    c.seed = static_cast<std::uint64_t>(get_i64(in));
    c.domain = static_cast<StreamDomain>(get_i64(in));
    if (c.i < 0 || c.N <= c.i || c.d < 1 || c.q < 1 || M < 1) throw ValidationError("corrupt cloud header");
    c.X.resize(M, static_cast<Eigen::Index>(c.N - c.i + 1) * c.d);
    c.H.resize(M, static_cast<Eigen::Index>(c.N - c.i) * c.q);
    for (std::int64_t m = 0; m < M; ++m) {
        in.read(reinterpret_cast<char*>(c.X.data() + m * c.X.cols()),
                static_cast<std::streamsize>(c.X.cols() * sizeof(double)));
        in.read(reinterpret_cast<char*>(c.H.data() + m * c.H.cols()),
                static_cast<std::streamsize>(c.H.cols() * sizeof(double)));
        if (!in) throw ValidationError("truncated cloud dump");
    }
    return c;
}

}  // namespace mwls
