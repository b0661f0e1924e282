#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "mwls/cloud.hpp"
#include "mwls/constants.hpp"
#include "mwls/model.hpp"
#include "mwls/regression.hpp"

namespace mwls {

/// Driver f_i(x, y, z) with its regularity constants. An empty `f` is the
/// zero driver.
struct DriverSpec {
    std::function<double(int i, const double* x, double y, const double* z)> f;
    double L_f = 0.0;
    double C_f = 0.0;
    double theta_L = 1.0;
    double theta_C = 1.0;
};

/// Terminal function Phi with sup bound C_xi and optional fractional
/// smoothness pair (C_Phi, theta_Phi).
struct TerminalSpec {
    std::function<double(const double* x)> phi;
    double C_xi = 0.0;
    std::optional<double> C_Phi;
    std::optional<double> theta_Phi;
};

struct BasisSpec {
    int degree = 1;
    double delta = 0.5;
    double R = 4.0;
};

enum class SolverEventKind { CloudSampled, FitZ, FitY };

struct SolverEvent {
    SolverEventKind kind;
    int i;
};

struct SolverConfig {
    /// Per-index specs (length N) or a single spec used for every index.
    std::vector<BasisSpec> basis_y;
    std::vector<BasisSpec> basis_z;
    /// Per-index cloud sizes (length N) or a single size.
    std::vector<std::int64_t> M;
    std::uint64_t seed = 1;
    /// Store the regression responses of every index.
    bool keep_responses = false;
    std::function<void(const SolverEvent&)> observer;
};

struct MwlsSolution {
    MwlsSolution(TimeGrid g, ProblemConstants pc, TerminalSpec term)
        : grid(std::move(g)), constants(pc), terminal(std::move(term)) {}

    TimeGrid grid;
    ProblemConstants constants;
    BoundsTable bounds;
    TerminalSpec terminal;
    std::vector<LocalPolynomialEstimator> y;  // index 0..N-1
    std::vector<LocalPolynomialEstimator> z;
    std::vector<RowMatrix> states;            // X_i of each cloud row
    std::vector<std::int64_t> M;
    std::vector<long> K_Y;
    std::vector<long> K_Z;
    std::vector<BasisSpec> basis_y;
    std::vector<BasisSpec> basis_z;
    std::uint64_t seed = 0;
    /// max over rows of |S_Y| / Theta_y[i] (0 when Theta_y is infinite).
    std::vector<double> max_obs_ratio_y;
    std::vector<Eigen::VectorXd> responses_y;  // filled when keep_responses
    std::vector<Eigen::MatrixXd> responses_z;

    [[nodiscard]] int N() const { return grid.N(); }
    [[nodiscard]] int d() const { return static_cast<int>(states.empty() ? 1 : states.front().cols()); }
    [[nodiscard]] int q() const { return constants.q; }
};

struct SolutionValue {
    double y;
    std::optional<Eigen::VectorXd> z;  // absent at i = N
};

SolutionValue evaluate_solution(const MwlsSolution& sol, int i, const Eigen::VectorXd& x);

/// Read-only view of the estimators fitted so far, used to build responses.
struct ResponseContext {
    const TimeGrid& grid;
    const DriverSpec& driver;
    const TerminalSpec& terminal;
    /// y[k], z[k] for k > i (and z[i] for the y-response); nullptr if not fitted.
    std::vector<const LocalPolynomialEstimator*> y;
    std::vector<const LocalPolynomialEstimator*> z;
};

/// Phi(x_N) h_N + sum_{k=i+1}^{N-1} f_k(x_k, y_{k+1}(x_{k+1}), z_k(x_k)) h_k step_k
Eigen::VectorXd build_z_response(const ResponseContext& ctx, const SimulationCloud& cloud,
                                 std::int64_t m);

/// Phi(x_N) + sum_{k=i}^{N-1} f_k(x_k, y_{k+1}(x_{k+1}), z_k(x_k)) step_k
double build_y_response(const ResponseContext& ctx, const SimulationCloud& cloud, std::int64_t m);

ProblemConstants make_problem_constants(const MarkovModel& model, const TimeGrid& grid,
                                        const DriverSpec& driver, const TerminalSpec& terminal);

/// Backward loop: for i = N-1..0 sample the cloud of index i, fit the
/// truncated z-estimator, then the truncated y-estimator.
MwlsSolution mwls_solve(const MarkovModel& model, const TimeGrid& grid, const DriverSpec& driver,
                        const TerminalSpec& terminal, const SolverConfig& config);

}  // namespace mwls
