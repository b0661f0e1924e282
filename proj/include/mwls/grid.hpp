#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mwls {

/// Time partition 0 = t_0 < t_1 < ... < t_N = T.
///
/// Steps and the maximal consecutive step ratio are computed once at
/// construction; the grid is immutable afterwards.
class TimeGrid {
public:
    /// Validates strict monotonicity and t_0 = 0.
    static TimeGrid from_points(std::vector<double> points);

    /// t_i = T - T (1 - i/N)^{1/theta}, theta in (0, 1]. theta = 1 is uniform.
    static TimeGrid theta_grid(double T, int N, double theta);

    static TimeGrid uniform(double T, int N) { return theta_grid(T, N, 1.0); }

    /// Random grid whose consecutive step ratios are drawn uniformly in
    /// [1/R_pi, R_pi], rescaled to [0, T].
    static TimeGrid random_admissible(double T, int N, double R_pi, std::uint64_t seed);

    [[nodiscard]] int N() const { return static_cast<int>(steps_.size()); }
    [[nodiscard]] double T() const { return points_.back(); }
    [[nodiscard]] double t(int i) const { return points_[static_cast<std::size_t>(i)]; }
    [[nodiscard]] double step(int i) const { return steps_[static_cast<std::size_t>(i)]; }
    /// T - t_i.
    [[nodiscard]] double remaining(int i) const { return T() - t(i); }

    [[nodiscard]] std::span<const double> points() const { return points_; }
    [[nodiscard]] std::span<const double> steps() const { return steps_; }

    /// max_{0 <= i <= N-2} step(i+1)/step(i); 1 when N = 1.
    [[nodiscard]] double r_pi() const { return r_pi_; }

    /// Comma-separated time points, 17 significant digits.
    [[nodiscard]] std::string to_csv() const;

private:
    explicit TimeGrid(std::vector<double> points);

    std::vector<double> points_;
    std::vector<double> steps_;
    double r_pi_ = 1.0;
};

enum class SumForm { Single, Double };

/// Singular weighted sums over the grid.
///
///   Single: sum_{j=i}^{k-1}   step_j / (t_k - t_j)^{1-alpha}
///   Double: sum_{j=i+1}^{k-1} step_j / ((t_k - t_j)^{1-alpha} (t_j - t_i)^{1-beta})
///
/// beta is ignored for the single form. Requires 0 <= i < k <= N.
double weighted_step_sum(const TimeGrid& grid, int i, int k, double alpha, double beta,
                         SumForm form);

}  // namespace mwls
