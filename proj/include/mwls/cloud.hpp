#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>

#include "mwls/model.hpp"

namespace mwls {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// M i.i.d. rows of (X_i..X_N, H^{(i)}_{i+1..N}) used for the regressions at
/// time index i. Row m is generated from its own stream (seed, domain, i, m).
struct SimulationCloud {
    int i = 0;
    int N = 0;
    int d = 1;
    int q = 1;
    std::uint64_t seed = 0;
    StreamDomain domain = StreamDomain::Cloud;
    RowMatrix X;  // M x (N - i + 1) d
    RowMatrix H;  // M x (N - i) q

    [[nodiscard]] std::int64_t M() const { return X.rows(); }
    /// Pointer to X_k of row m (k absolute index, i <= k <= N).
    [[nodiscard]] const double* x(std::int64_t m, int k) const {
        return X.data() + m * X.cols() + static_cast<std::ptrdiff_t>(k - i) * d;
    }
    /// Pointer to H^{(i)}_k of row m (i < k <= N).
    [[nodiscard]] const double* h(std::int64_t m, int k) const {
        return H.data() + m * H.cols() + static_cast<std::ptrdiff_t>(k - i - 1) * q;
    }
};

SimulationCloud sample_cloud(const MarkovModel& model, const TimeGrid& grid, int i, std::int64_t M,
                             std::uint64_t seed, StreamDomain domain = StreamDomain::Cloud);

/// Flat little-endian binary table: header (i, N, d, q, M, seed, domain as
/// 64-bit integers) followed by each row's X block then H block as doubles.
void write_cloud(const SimulationCloud& cloud, std::ostream& out);
SimulationCloud read_cloud(std::istream& in);

}  // namespace mwls
