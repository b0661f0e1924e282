#include "mwls/harness.hpp"

#include <cmath>

#include "mwls/error.hpp"
#include "mwls/parallel.hpp"

namespace mwls {

namespace {

struct NormEstimate {
    double norm = 0.0;
    double se = 0.0;
};

// sqrt(mean(sq)) with a delta-method standard error.
NormEstimate root_mean(const Eigen::VectorXd& sq) {
    const auto M = static_cast<double>(sq.size());
    const double mean = sq.mean();
    NormEstimate r;
    r.norm = std::sqrt(mean);
    if (sq.size() > 1 && mean > 0.0) {
        const double var = (sq.array() - mean).square().sum() / (M - 1.0);
        r.se = std::sqrt(var / M) / (2.0 * r.norm);
    }
    return r;
}

void check_oracle(const Oracle& o) {
    if (!o.y || !o.z) throw ValidationError("oracle must define both y and z");
}

}  // namespace

RowMatrix sample_states(const MarkovModel& model, const TimeGrid& grid, int i, std::int64_t M,
                        std::uint64_t seed, StreamDomain domain) {
    if (M < 1) throw ValidationError("sample size must be at least 1");
    RowMatrix X(M, model.d());
    parallel_for(M, [&](std::int64_t m) {
        Stream s(seed, domain, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(m));
        Eigen::VectorXd x = model.initial_law().sample(s);
        if (i > 0) x = model.propagate(grid, 0, i, x, s);
        X.row(m) = x.transpose();
    });
    return X;
}

double approximation_error(const LocalPolynomialBasis& basis, const MarkovModel& model,
                           const TimeGrid& grid, int i,
                           const std::function<Eigen::VectorXd(const double*)>& target,
                           std::int64_t M, std::uint64_t seed) {
    const RowMatrix Xa = sample_states(model, grid, i, M, seed, StreamDomain::ApproxFit);
    const RowMatrix Xb = sample_states(model, grid, i, M, seed, StreamDomain::ApproxEval);
    const auto od = target(Xa.row(0).data()).size();
    Eigen::MatrixXd S(M, od);
    parallel_for(M, [&](std::int64_t m) { S.row(m) = target(Xa.row(m).data()).transpose(); });
    const auto fit = ols_fit(basis, Xa, S);
    Eigen::VectorXd sq(M);
    parallel_for(M, [&](std::int64_t m) {
        Eigen::VectorXd v(od);
        fit.evaluate(Xb.row(m).data(), v.data());
        sq[m] = (v - target(Xb.row(m).data())).squaredNorm();
    });
    return std::sqrt(sq.mean());
}

double run_cost(const std::vector<std::int64_t>& M, int N) {
    double c = 0.0;
    for (std::int64_t m : M) c += static_cast<double>(N) * static_cast<double>(m);
    return c;
}

ErrorReport estimate_errors(const MwlsSolution& sol, const MarkovModel& model, const Oracle& oracle,
                            std::int64_t fresh_M, std::uint64_t seed) {
    check_oracle(oracle);
    if (fresh_M < 1) throw ValidationError("fresh sample size must be at least 1");
    const int N = sol.N();
    const int d = sol.d();
    const int q = sol.q();
    const auto n = static_cast<std::size_t>(N);
    ErrorReport r;
    r.t.assign(sol.grid.points().begin(), sol.grid.points().end() - 1);
    r.in_sample_y.assign(n, 0.0);
    r.in_sample_z.assign(n, 0.0);
    r.fresh_y.assign(n, 0.0);
    r.fresh_z.assign(n, 0.0);
    r.fresh_y_se.assign(n, 0.0);
    r.fresh_z_se.assign(n, 0.0);
    r.E_app_Y.assign(n, 0.0);
    r.E_app_Z.assign(n, 0.0);
    r.M = sol.M;
    r.K_Y = sol.K_Y;
    r.K_Z = sol.K_Z;
    r.cost = run_cost(sol.M, N);

    auto sq_errors = [&](int i, const RowMatrix& X, Eigen::VectorXd& ey, Eigen::VectorXd& ez) {
        const auto k = static_cast<std::size_t>(i);
        ey.resize(X.rows());
        ez.resize(X.rows());
        parallel_for(X.rows(), [&](std::int64_t m) {
            const double* x = X.row(m).data();
            double yv = 0.0;
            Eigen::VectorXd zv(q);
            sol.y[k].evaluate(x, &yv);
            sol.z[k].evaluate(x, zv.data());
            const double dy = yv - oracle.y(i, x);
            ey[m] = dy * dy;
            ez[m] = (zv - oracle.z(i, x)).squaredNorm();
        });
    };

    for (int i = 0; i < N; ++i) {
        const auto k = static_cast<std::size_t>(i);
        Eigen::VectorXd ey, ez;
        sq_errors(i, sol.states[k], ey, ez);
        r.in_sample_y[k] = std::sqrt(ey.mean());
        r.in_sample_z[k] = std::sqrt(ez.mean());

        const RowMatrix Xf = sample_states(model, sol.grid, i, fresh_M, seed, StreamDomain::Fresh);
        sq_errors(i, Xf, ey, ez);
        const auto fy = root_mean(ey);
        const auto fz = root_mean(ez);
        r.fresh_y[k] = fy.norm;
        r.fresh_y_se[k] = fy.se;
        r.fresh_z[k] = fz.norm;
        r.fresh_z_se[k] = fz.se;

        const LocalPolynomialBasis by(d, sol.basis_y[k].degree, sol.basis_y[k].delta, sol.basis_y[k].R);
        const LocalPolynomialBasis bz(d, sol.basis_z[k].degree, sol.basis_z[k].delta, sol.basis_z[k].R);
        r.E_app_Y[k] = approximation_error(
            by, model, sol.grid, i,
            [&](const double* x) { return Eigen::VectorXd::Constant(1, oracle.y(i, x)).eval(); },
            fresh_M, seed);
        r.E_app_Z[k] = approximation_error(
            bz, model, sol.grid, i, [&](const double* x) { return oracle.z(i, x); }, fresh_M, seed);
    }

    LocalErrorInputs in{r.E_app_Y, r.E_app_Z, sol.K_Y, sol.K_Z, sol.M};
    const auto gb = global_error_bound(sol.constants, sol.grid, in);
    r.bound_Y = gb.bound_Y;
    r.bound_Z = gb.bound_Z;
    r.E_dep_Y.assign(sol.bounds.E_dep_Y.begin(), sol.bounds.E_dep_Y.begin() + N);
    r.E_dep_Z.assign(sol.bounds.E_dep_Z.begin(), sol.bounds.E_dep_Z.begin() + N);
    r.dep_inequality_y.resize(n);
    r.dep_inequality_z.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        r.dep_inequality_y[k] = r.fresh_y[k] <= std::sqrt(2.0) * r.in_sample_y[k] + r.E_dep_Y[k];
        r.dep_inequality_z[k] = r.fresh_z[k] <= std::sqrt(2.0) * r.in_sample_z[k] + r.E_dep_Z[k];
    }
    return r;
}

}  // namespace mwls
