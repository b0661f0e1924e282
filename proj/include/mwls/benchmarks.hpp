#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "mwls/model.hpp"
#include "mwls/solver.hpp"

namespace mwls {

/// Exact (y_i, z_i) maps of a benchmark on a given grid.
struct Oracle {
    std::function<double(int i, const double* x)> y;
    std::function<Eigen::VectorXd(int i, const double* x)> z;
};

struct Benchmark {
    std::string id;
    std::string description;
    std::shared_ptr<MarkovModel> model;
    DriverSpec driver;
    TerminalSpec terminal;
    std::function<Oracle(const TimeGrid&)> make_oracle;
};

/// Knobs shared by the shipped benchmarks; unused fields are ignored.
struct BenchmarkParams {
    int d = 1;
    InitialLaw init = InitialLaw::box(Eigen::VectorXd::Zero(1), 2.5);
    std::optional<double> clip;  // B1/B3: terminal clipped to [-clip, clip]
    double alpha = 0.5;          // B3 driver f = alpha y
    double theta_Phi = 0.5;      // B4 exponent
    double cap = 2.0;            // B4 cap
};

/// Ids: Z0 (zero data), B1 (Phi = x), B2 (Phi = tanh), B3 (f = alpha y, Phi = x),
/// B4 (Phi = min(|x|^theta, cap)).
using BenchmarkFactory = std::function<Benchmark(const BenchmarkParams&)>;
const std::map<std::string, BenchmarkFactory>& register_benchmarks();

Benchmark make_benchmark(const std::string& id, const BenchmarkParams& params);

/// E[clip(mu + s G, -L, L)] and P(|mu + s G| < L) for standard normal G.
double gaussian_clip_mean(double mu, double s, double L);
double gaussian_inside_prob(double mu, double s, double L);

/// E[g(mu + s G)] by adaptive quadrature against the Gaussian density.
double gaussian_expectation(const std::function<double(double)>& g, double mu, double s);

/// prod_{j=k}^{N-1} (1 + alpha step_j).
double linear_driver_factor(const TimeGrid& grid, int k, double alpha);

}  // namespace mwls
