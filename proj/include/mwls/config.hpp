#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mwls/benchmarks.hpp"
#include "mwls/grid.hpp"
#include "mwls/solver.hpp"

namespace mwls {

/// Fully resolved run configuration. Every field has a default; parsing
/// overrides the keys present in the file and rejects unknown keys.
struct RunConfig {
    // [problem]
    std::string problem = "B1";
    int d = 1;
    std::optional<double> clip;
    double alpha = 0.5;
    double theta_Phi = 0.5;
    double cap = 2.0;
    std::string init = "box";  // box | point
    std::vector<double> init_center{0.0};
    double init_half_width = 2.5;
    // [grid]
    double T = 1.0;
    int N = 10;
    double theta = 1.0;
    std::vector<double> points;  // explicit grid; overrides T, N, theta
    // [basis]
    int degree_y = 1;
    int degree_z = 1;
    std::vector<double> delta_y{0.5};
    std::vector<double> delta_z{0.5};
    double R = 4.0;
    // [simulation]
    std::vector<std::int64_t> M{10000};
    std::uint64_t seed = 1;
    // [errors]
    bool errors = true;
    std::int64_t fresh_M = 100000;
    // [output]
    std::string out_dir = "out";
    // [sweep]
    std::string sweep_parameter = "M";  // M | delta | N
    std::vector<double> sweep_values{1000, 10000, 100000};
    int sweep_index = -1;               // -1 selects N / 2

    /// Cross-field checks; throws ValidationError with the key path.
    void validate() const;

    [[nodiscard]] TimeGrid make_grid() const;
    [[nodiscard]] BenchmarkParams benchmark_params() const;
    [[nodiscard]] SolverConfig solver_config() const;

    /// INI text listing every key in a fixed order.
    [[nodiscard]] std::string to_ini() const;
    /// Same content as "# section.key = value" comment lines.
    [[nodiscard]] std::string to_comment_header() const;
};

RunConfig parse_config_string(const std::string& text);
RunConfig parse_config_file(const std::string& path);

}  // namespace mwls
