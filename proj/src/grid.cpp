#include "mwls/grid.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "mwls/error.hpp"
#include "mwls/format.hpp"

namespace mwls {

TimeGrid::TimeGrid(std::vector<double> points) : points_(std::move(points)) {
    steps_.resize(points_.size() - 1);
    for (std::size_t i = 0; i + 1 < points_.size(); ++i) steps_[i] = points_[i + 1] - points_[i];
    r_pi_ = 1.0;
    if (steps_.size() >= 2) {
        r_pi_ = 0.0;
        for (std::size_t i = 0; i + 1 < steps_.size(); ++i) {
            double r = steps_[i + 1] / steps_[i];
            // equal steps that differ only by the rounding of the points
            if (std::abs(r - 1.0) <= 1e-12) r = 1.0;
            r_pi_ = std::max(r_pi_, r);
        }
    }
}

TimeGrid TimeGrid::from_points(std::vector<double> points) {
    if (points.size() < 2) throw ValidationError("time grid needs at least two points");
    if (points.front() != 0.0) throw ValidationError("time grid must start at 0");
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        if (!std::isfinite(points[i + 1]) || !(points[i + 1] > points[i]))
            throw ValidationError("time grid not strictly increasing at index " +
                                  std::to_string(i + 1));
    }
    return TimeGrid(std::move(points));
}

TimeGrid TimeGrid::theta_grid(double T, int N, double theta) {
    if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("T must be positive");
    if (N < 1) throw ValidationError("N must be at least 1");
    if (!(theta > 0.0 && theta <= 1.0)) throw ValidationError("theta must lie in (0, 1]");
    std::vector<double> p(static_cast<std::size_t>(N) + 1);
    for (int i = 0; i <= N; ++i) {
        if (theta == 1.0)
            p[static_cast<std::size_t>(i)] = T * static_cast<double>(i) / N;
        else
            p[static_cast<std::size_t>(i)] =
                T - T * std::pow(1.0 - static_cast<double>(i) / N, 1.0 / theta);
    }
    p.front() = 0.0;
    p.back() = T;
    return from_points(std::move(p));
}

TimeGrid TimeGrid::random_admissible(double T, int N, double R_pi, std::uint64_t seed) {
    if (!(T > 0.0)) throw ValidationError("T must be positive");
    if (N < 1) throw ValidationError("N must be at least 1");
    if (!(R_pi >= 1.0)) throw ValidationError("R_pi must be at least 1");
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> ratio(1.0 / R_pi, R_pi);
    std::vector<double> steps(static_cast<std::size_t>(N));
    steps[0] = 1.0;
    for (std::size_t j = 1; j < steps.size(); ++j) steps[j] = steps[j - 1] * ratio(gen);
    double total = 0.0;
    for (double s : steps) total += s;
    std::vector<double> p(steps.size() + 1, 0.0);
    double acc = 0.0;
    for (std::size_t j = 0; j < steps.size(); ++j) {
        acc += steps[j];
        p[j + 1] = T * acc / total;
    }
    p.back() = T;
    return from_points(std::move(p));
}

std::string TimeGrid::to_csv() const {
    std::string out;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (i) out += ',';
        out += fmt_double(points_[i]);
    }
    return out;
}

double weighted_step_sum(const TimeGrid& grid, int i, int k, double alpha, double beta,
                         SumForm form) {
    if (i < 0 || k > grid.N() || i >= k)
        throw ValidationError("weighted_step_sum requires 0 <= i < k <= N");
    if (!(alpha > 0.0)) throw ValidationError("alpha must be positive");
    const double tk = grid.t(k);
    double sum = 0.0;
    if (form == SumForm::Single) {
        for (int j = i; j < k; ++j) sum += grid.step(j) / std::pow(tk - grid.t(j), 1.0 - alpha);
    } else {
        if (!(beta > 0.0)) throw ValidationError("beta must be positive");
        const double ti = grid.t(i);
        for (int j = i + 1; j < k; ++j)
            sum += grid.step(j) /
                   (std::pow(tk - grid.t(j), 1.0 - alpha) * std::pow(grid.t(j) - ti, 1.0 - beta));
    }
    return sum;
}

}  // namespace mwls
