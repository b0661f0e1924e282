#include "mwls/report.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>

#include "mwls/error.hpp"
#include "mwls/format.hpp"

namespace mwls {

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw ValidationError("cannot write '" + p.string() + "'");
    return f;
}

}  // namespace

void write_bounds_csv(const BoundsTable& t, std::ostream& out, const std::string& header) {
    out << header;
    out << "index,t,C_y,C_z,Theta_y,Theta_z\n";
    for (std::size_t i = 0; i < t.C_y.size(); ++i)
        out << i << ',' << fmt_double(t.t[i]) << ',' << fmt_double(t.C_y[i]) << ',' << fmt_double(t.C_z[i])
            << ',' << fmt_double(t.Theta_y[i]) << ',' << fmt_double(t.Theta_z[i]) << '\n';
}

void write_solution_csv(const MwlsSolution& sol, std::ostream& out, const std::string& header) {
    out << header;
    out << "# grid = " << sol.grid.to_csv() << '\n';
    out << "index,t,M,K_Y,K_Z,C_y,C_z,max_obs_ratio_y,x1,y,z1\n";
    const int d = sol.d();
    for (int i = 0; i < sol.N(); ++i) {
        const auto k = static_cast<std::size_t>(i);
        const double R = sol.basis_y[k].R;
        for (int p = 0; p <= 20; ++p) {
            Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
            x[0] = -R + 2.0 * R * p / 20.0;
            const auto v = evaluate_solution(sol, i, x);
            out << i << ',' << fmt_double(sol.grid.t(i)) << ',' << sol.M[k] << ',' << sol.K_Y[k] << ','
                << sol.K_Z[k] << ',' << fmt_double(sol.bounds.C_y[k]) << ',' << fmt_double(sol.bounds.C_z[k])
                << ',' << fmt_double(sol.max_obs_ratio_y[k]) << ',' << fmt_double(x[0]) << ','
                << fmt_double(v.y) << ',' << fmt_double((*v.z)[0]) << '\n';
        }
    }
}

void write_errors_csv(const ErrorReport& r, std::ostream& out, const std::string& header) {
    out << header;
    out << "# cost = " << fmt_double(r.cost) << '\n';
    out << "index,t,M,K_Y,K_Z,in_sample_y,in_sample_z,fresh_y,fresh_y_se,fresh_z,fresh_z_se,"
           "E_app_Y,E_app_Z,E_dep_Y,E_dep_Z,bound_Y,bound_Z,dep_ineq_y,dep_ineq_z\n";
    for (std::size_t i = 0; i < r.in_sample_y.size(); ++i) {
        out << i << ',' << fmt_double(r.t[i]) << ',' << r.M[i] << ',' << r.K_Y[i] << ',' << r.K_Z[i];
        for (double v : {r.in_sample_y[i], r.in_sample_z[i], r.fresh_y[i], r.fresh_y_se[i], r.fresh_z[i],
                         r.fresh_z_se[i], r.E_app_Y[i], r.E_app_Z[i], r.E_dep_Y[i], r.E_dep_Z[i],
                         r.bound_Y[i], r.bound_Z[i]})
            out << ',' << fmt_double(v);
        out << ',' << (r.dep_inequality_y[i] ? 1 : 0) << ',' << (r.dep_inequality_z[i] ? 1 : 0) << '\n';
    }
}

RunOutputs execute_run(const RunConfig& cfg) {
    cfg.validate();
    const TimeGrid grid = cfg.make_grid();
    const Benchmark b = make_benchmark(cfg.problem, cfg.benchmark_params());
    RunOutputs out{mwls_solve(*b.model, grid, b.driver, b.terminal, cfg.solver_config()), std::nullopt};
    if (cfg.errors) out.errors = estimate_errors(out.solution, *b.model, b.make_oracle(grid), cfg.fresh_M, cfg.seed);
    return out;
}

RunOutputs execute_run_to_dir(const RunConfig& cfg) {
    RunOutputs r = execute_run(cfg);
    namespace fs = std::filesystem;
    const fs::path dir(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ValidationError("cannot create output directory '" + cfg.out_dir + "'");
    const std::string header = cfg.to_comment_header();
    {
        auto f = open_out(dir / "config.resolved.ini");
        f << cfg.to_ini();
    }
    {
        auto f = open_out(dir / "solution.csv");
        write_solution_csv(r.solution, f, header);
    }
    {
        auto f = open_out(dir / "bounds.csv");
        write_bounds_csv(r.solution.bounds, f, header);
    }
    if (r.errors) {
        auto f = open_out(dir / "errors.csv");
        write_errors_csv(*r.errors, f, header);
    }
    return r;
}

BoundsTable configured_bounds(const RunConfig& cfg) {
    cfg.validate();
    const TimeGrid grid = cfg.make_grid();
    const Benchmark b = make_benchmark(cfg.problem, cfg.benchmark_params());
    const ProblemConstants pc = make_problem_constants(*b.model, grid, b.driver, b.terminal);
    return make_bounds_table(pc, grid);
}

}  // namespace mwls
