#pragma once

#include <cstdint>
#include <vector>

#include "mwls/benchmarks.hpp"
#include "mwls/solver.hpp"

namespace mwls {

/// Per-index error measurements of one solver run (vectors of length N).
struct ErrorReport {
    std::vector<double> t;
    // ||.||_{i,M} on the solver's own regression points
    std::vector<double> in_sample_y;
    std::vector<double> in_sample_z;
    // L2 norms under the law of X_i, estimated on fresh samples, with std errors
    std::vector<double> fresh_y;
    std::vector<double> fresh_z;
    std::vector<double> fresh_y_se;
    std::vector<double> fresh_z_se;
    // best-approximation errors of the basis spaces, estimated out of sample
    std::vector<double> E_app_Y;
    std::vector<double> E_app_Z;
    std::vector<double> E_dep_Y;
    std::vector<double> E_dep_Z;
    std::vector<double> bound_Y;
    std::vector<double> bound_Z;
    // fresh <= sqrt(2) in-sample + E_dep, per index
    std::vector<bool> dep_inequality_y;
    std::vector<bool> dep_inequality_z;
    std::vector<std::int64_t> M;
    std::vector<long> K_Y;
    std::vector<long> K_Z;
    /// sum_i N M_i
    double cost = 0.0;
};

/// Samples of X_i drawn from the model's law (initial law propagated to i),
/// row m from stream (seed, domain, i, m).
RowMatrix sample_states(const MarkovModel& model, const TimeGrid& grid, int i, std::int64_t M,
                        std::uint64_t seed, StreamDomain domain);

/// Out-of-sample L2 distance between `target` and its best approximation in
/// the basis: fit on one fresh sample of size M, measure on another.
double approximation_error(const LocalPolynomialBasis& basis, const MarkovModel& model,
                           const TimeGrid& grid, int i,
                           const std::function<Eigen::VectorXd(const double*)>& target,
                           std::int64_t M, std::uint64_t seed);

ErrorReport estimate_errors(const MwlsSolution& sol, const MarkovModel& model, const Oracle& oracle,
                            std::int64_t fresh_M, std::uint64_t seed);

double run_cost(const std::vector<std::int64_t>& M, int N);

}  // namespace mwls
