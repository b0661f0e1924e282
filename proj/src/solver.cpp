#include "mwls/solver.hpp"

#include <cmath>
#include <string>

#include "mwls/error.hpp"
#include "mwls/parallel.hpp"

namespace mwls {

namespace {

template <class T>
const T& per_index(const std::vector<T>& v, int i, const char* what) {
    if (v.size() == 1) return v.front();
    if (i < 0 || static_cast<std::size_t>(i) >= v.size())
        throw ValidationError(std::string(what) + " schedule does not cover index " + std::to_string(i));
    return v[static_cast<std::size_t>(i)];
}

void check_finite(double v, int i, int k, std::int64_t m) {
    if (!std::isfinite(v))
        throw NumericalError("non-finite response term at index " + std::to_string(i) + ", k = " +
                             std::to_string(k) + ", row " + std::to_string(m));
}

double driver_value(const DriverSpec& d, int k, const double* x, double y, const double* z) {
    return d.f ? d.f(k, x, y, z) : 0.0;
}

}  // namespace

SolutionValue evaluate_solution(const MwlsSolution& sol, int i, const Eigen::VectorXd& x) {
    if (i < 0 || i > sol.N()) throw ValidationError("time index out of range");
    if (x.size() != sol.d()) throw ValidationError("evaluation point has wrong dimension");
    if (i == sol.N()) return {sol.terminal.phi(x.data()), std::nullopt};
    const auto k = static_cast<std::size_t>(i);
    return {sol.y[k](x)[0], sol.z[k](x)};
}

Eigen::VectorXd build_z_response(const ResponseContext& ctx, const SimulationCloud& cloud,
                                 std::int64_t m) {
    const int N = ctx.grid.N();
    const int i = cloud.i;
    const int q = cloud.q;
    Eigen::VectorXd s(q);
    const double phi = ctx.terminal.phi(cloud.x(m, N));
    check_finite(phi, i, N, m);
    for (int l = 0; l < q; ++l) s[l] = phi * cloud.h(m, N)[l];
    Eigen::VectorXd zk(q);
    for (int k = i + 1; k < N; ++k) {
        double yk1 = 0.0;
        if (k + 1 == N)
            yk1 = ctx.terminal.phi(cloud.x(m, N));
        else
            ctx.y[static_cast<std::size_t>(k + 1)]->evaluate(cloud.x(m, k + 1), &yk1);
        ctx.z[static_cast<std::size_t>(k)]->evaluate(cloud.x(m, k), zk.data());
        const double f = driver_value(ctx.driver, k, cloud.x(m, k), yk1, zk.data());
        check_finite(f, i, k, m);
        for (int l = 0; l < q; ++l) s[l] += f * cloud.h(m, k)[l] * ctx.grid.step(k);
    }
    return s;
}

double build_y_response(const ResponseContext& ctx, const SimulationCloud& cloud, std::int64_t m) {
    const int N = ctx.grid.N();
    const int i = cloud.i;
    double s = ctx.terminal.phi(cloud.x(m, N));
    check_finite(s, i, N, m);
    Eigen::VectorXd zk(cloud.q);
    for (int k = i; k < N; ++k) {
        double yk1 = 0.0;
        if (k + 1 == N)
            yk1 = ctx.terminal.phi(cloud.x(m, N));
        else
            ctx.y[static_cast<std::size_t>(k + 1)]->evaluate(cloud.x(m, k + 1), &yk1);
        ctx.z[static_cast<std::size_t>(k)]->evaluate(cloud.x(m, k), zk.data());
        const double f = driver_value(ctx.driver, k, cloud.x(m, k), yk1, zk.data());
        check_finite(f, i, k, m);
        s += f * ctx.grid.step(k);
    }
    return s;
}

ProblemConstants make_problem_constants(const MarkovModel& model, const TimeGrid& grid,
                                        const DriverSpec& driver, const TerminalSpec& terminal) {
    ProblemConstants pc;
    pc.L_f = driver.L_f;
    pc.C_f = driver.C_f;
    pc.theta_L = driver.theta_L;
    pc.theta_C = driver.theta_C;
    pc.C_M = model.C_M();
    pc.C_xi = terminal.C_xi;
    pc.C_Phi = terminal.C_Phi;
    pc.theta_Phi = terminal.theta_Phi;
    pc.T = grid.T();
    pc.R_pi = std::max(1.0, grid.r_pi());
    pc.q = model.q();
    pc.validate();
    return pc;
}

MwlsSolution mwls_solve(const MarkovModel& model, const TimeGrid& grid, const DriverSpec& driver,
                        const TerminalSpec& terminal, const SolverConfig& config) {
    if (!terminal.phi) throw ValidationError("terminal function is missing");
    const int N = grid.N();
    const int d = model.d();
    const int q = model.q();
    const auto n = static_cast<std::size_t>(N);
    if (config.basis_y.empty() || config.basis_z.empty() || config.M.empty())
        throw ValidationError("basis and cloud-size schedules must not be empty");

    MwlsSolution sol(grid, make_problem_constants(model, grid, driver, terminal), terminal);
    sol.bounds = make_bounds_table(sol.constants, grid);
    sol.seed = config.seed;

    // Validate every index before any simulation.
    std::vector<LocalPolynomialBasis> by, bz;
    for (int i = 0; i < N; ++i) {
        const BasisSpec& sy = per_index(config.basis_y, i, "basis_y");
        const BasisSpec& sz = per_index(config.basis_z, i, "basis_z");
        by.emplace_back(d, sy.degree, sy.delta, sy.R);
        bz.emplace_back(d, sz.degree, sz.delta, sz.R);
        const std::int64_t Mi = per_index(config.M, i, "M");
        const std::int64_t K = std::max(by.back().K(), bz.back().K());
        if (Mi < K)
            throw ValidationError("cloud size M = " + std::to_string(Mi) + " at index " +
                                  std::to_string(i) + " is below the basis dimension " +
                                  std::to_string(K));
        sol.M.push_back(Mi);
        sol.K_Y.push_back(static_cast<long>(by.back().K()));
        sol.K_Z.push_back(static_cast<long>(bz.back().K()));
        sol.basis_y.push_back(sy);
        sol.basis_z.push_back(sz);
    }
    attach_dep_errors(sol.bounds, sol.K_Y, sol.K_Z, sol.M, q);

    // Temporarily hold estimators by index; filled backward.
    std::vector<std::optional<LocalPolynomialEstimator>> yfit(n), zfit(n);
    sol.states.resize(n);
    sol.max_obs_ratio_y.assign(n, 0.0);
    if (config.keep_responses) {
        sol.responses_y.resize(n);
        sol.responses_z.resize(n);
    }
    auto notify = [&](SolverEventKind k, int i) {
        if (config.observer) config.observer({k, i});
    };

    for (int i = N - 1; i >= 0; --i) {
        const auto ui = static_cast<std::size_t>(i);
        const SimulationCloud cloud = sample_cloud(model, grid, i, sol.M[ui], config.seed, StreamDomain::Cloud);
        notify(SolverEventKind::CloudSampled, i);
        const std::int64_t M = cloud.M();

        RowMatrix Xi(M, d);
        for (std::int64_t m = 0; m < M; ++m)
            for (int c = 0; c < d; ++c) Xi(m, c) = cloud.x(m, i)[c];

        // One pass over each row: driver terms for k > i feed both responses.
        Eigen::MatrixXd SZ(M, q);
        Eigen::VectorXd tail(M);
        Eigen::VectorXd y_next(M);  // y_{i+1}(x_{i+1}) for the k = i term
        parallel_for(M, [&](std::int64_t m) {
            const double phi = terminal.phi(cloud.x(m, N));
            check_finite(phi, i, N, m);
            double ty = phi;
            std::vector<double> sz(static_cast<std::size_t>(q));
            std::vector<double> zk(static_cast<std::size_t>(q));
            for (int l = 0; l < q; ++l) sz[l] = phi * cloud.h(m, N)[l];
            double y_after = phi;  // y_{k+1}(x_{k+1}), starting at k = N-1
            for (int k = N - 1; k > i; --k) {
                zfit[static_cast<std::size_t>(k)]->evaluate(cloud.x(m, k), zk.data());
                const double f = driver_value(driver, k, cloud.x(m, k), y_after, zk.data());
                check_finite(f, i, k, m);
                const double fd = f * grid.step(k);
                ty += fd;
                for (int l = 0; l < q; ++l) sz[l] += fd * cloud.h(m, k)[l];
                yfit[static_cast<std::size_t>(k)]->evaluate(cloud.x(m, k), &y_after);
            }
            tail[m] = ty;
            y_next[m] = y_after;
            for (int l = 0; l < q; ++l) SZ(m, l) = sz[l];
        });

        zfit[ui] = ols_fit(bz[ui], Xi, SZ).truncated(sol.bounds.C_z[ui]);
        notify(SolverEventKind::FitZ, i);

        Eigen::MatrixXd SY(M, 1);
        parallel_for(M, [&](std::int64_t m) {
            std::vector<double> zi(static_cast<std::size_t>(q));
            zfit[ui]->evaluate(cloud.x(m, i), zi.data());
            const double f = driver_value(driver, i, cloud.x(m, i), y_next[m], zi.data());
            check_finite(f, i, i, m);
            SY(m, 0) = tail[m] + f * grid.step(i);
        });
        yfit[ui] = ols_fit(by[ui], Xi, SY).truncated(sol.bounds.C_y[ui]);
        notify(SolverEventKind::FitY, i);

        const double theta = sol.bounds.Theta_y[ui];
        if (std::isfinite(theta) && theta > 0.0)
            sol.max_obs_ratio_y[ui] = SY.cwiseAbs().maxCoeff() / theta;
        if (config.keep_responses) {
            sol.responses_y[ui] = SY.col(0);
            sol.responses_z[ui] = SZ;
        }
        sol.states[ui] = std::move(Xi);
    }

    for (std::size_t k = 0; k < n; ++k) {
        sol.y.push_back(std::move(*yfit[k]));
        sol.z.push_back(std::move(*zfit[k]));
    }
    return sol;
}

}  // namespace mwls
