#include "mwls/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "mwls/error.hpp"
#include "mwls/parallel.hpp"
#include "mwls/report.hpp"
#include "mwls/study.hpp"
#include "mwls/tuning.hpp"

namespace mwls {

namespace {

constexpr const char* kThreadEnv = "MWLS_MAX_THREADS";

struct Overrides {
    std::string config;
    std::uint64_t seed = 0;
    std::string out;
    std::int64_t fresh_M = 0;
    int threads = 0;
};

RunConfig load(const Overrides& o, CLI::App& app, bool required) {
    if (o.config.empty() && required) throw ValidationError("--config is required");
    RunConfig cfg = o.config.empty() ? RunConfig{} : parse_config_file(o.config);
    if (app.get_option("--seed")->count()) cfg.seed = o.seed;
    if (app.get_option("--out")->count()) cfg.out_dir = o.out;
    if (app.get_option("--fresh-m")->count()) cfg.fresh_M = o.fresh_M;
    cfg.validate();
    return cfg;
}

void apply_threads(int requested) {
    int n = requested;
    if (const char* env = std::getenv(kThreadEnv)) {
        const int cap = std::atoi(env);
        if (cap > 0) n = n > 0 ? std::min(n, cap) : cap;
    }
    set_max_threads(n);
}

std::ofstream open_in_dir(const std::string& dir, const std::string& name) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ValidationError("cannot create output directory '" + dir + "'");
    std::ofstream f(std::filesystem::path(dir) / name, std::ios::binary);
    if (!f) throw ValidationError("cannot write '" + dir + "/" + name + "'");
    return f;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Least-squares Monte Carlo solver for discrete BSDEs with Malliavin weights", "mwls"};
    app.require_subcommand(1);
    Overrides o;
    app.add_option("--threads", o.threads, "Worker thread cap (also capped by MWLS_MAX_THREADS)");

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "INI configuration file");
        sub->add_option("--seed", o.seed, "Override simulation.seed");
        sub->add_option("--out", o.out, "Override output.dir");
        sub->add_option("--fresh-m", o.fresh_M, "Override errors.fresh_M");
    };

    auto* run = app.add_subcommand("run", "Solve the configured problem and write reports");
    add_common(run);
    auto* bounds = app.add_subcommand("bounds", "Print the constants table of the configured problem");
    add_common(bounds);
    auto* bench = app.add_subcommand("bench", "Run the benchmark problems B1-B4");
    add_common(bench);
    auto* sweep = app.add_subcommand("sweep", "Convergence study over the [sweep] parameter");
    add_common(sweep);

    auto* tune = app.add_subcommand("tune", "Print the tuned parameters for a target accuracy");
    TuningInputs ti;
    std::string regime = "smooth";
    tune->add_option("--N", ti.N, "Number of time steps")->required();
    tune->add_option("--kappa", ti.kappa, "Accuracy exponent")->required();
    tune->add_option("--l", ti.l, "Degree of the y-basis")->required();
    tune->add_option("--d", ti.d, "State dimension")->required();
    tune->add_option("--lambda", ti.lambda, "Exponential moment parameter")->required();
    tune->add_option("--regime", regime, "smooth or holder")->required();
    tune->add_option("--theta-pi", ti.theta_pi, "Grid exponent");
    tune->add_option("--T", ti.T, "Horizon");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        apply_threads(o.threads);
        if (*tune) {
            ti.regime = parse_regime(regime);
            const TimeGrid grid = TimeGrid::theta_grid(ti.T, ti.N, ti.theta_pi);
            write_plan_csv(tune_parameters(ti, grid), grid, out);
        } else if (*bounds) {
            const RunConfig cfg = load(o, *bounds, false);
            write_bounds_csv(configured_bounds(cfg), out, cfg.to_comment_header());
        } else if (*run) {
            const RunConfig cfg = load(o, *run, true);
            const auto r = execute_run_to_dir(cfg);
            out << "wrote reports to " << cfg.out_dir << '\n';
            if (r.errors) {
                double ey = 0.0, ez = 0.0;
                for (double v : r.errors->in_sample_y) ey = std::max(ey, v);
                for (double v : r.errors->in_sample_z) ez = std::max(ez, v);
                out << "max in-sample error: y " << ey << ", z " << ez << '\n';
            }
        } else if (*bench) {
            const RunConfig cfg = load(o, *bench, false);
            const auto rows = run_bench(cfg);
            write_bench_csv(rows, out, cfg.to_comment_header());
            auto f = open_in_dir(cfg.out_dir, "bench.csv");
            write_bench_csv(rows, f, cfg.to_comment_header());
        } else if (*sweep) {
            const RunConfig cfg = load(o, *sweep, true);
            const auto res = convergence_study(cfg);
            write_study_csv(res, out, cfg.to_comment_header());
            auto f = open_in_dir(cfg.out_dir, "sweep.csv");
            write_study_csv(res, f, cfg.to_comment_header());
        }
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitOk;
}

}  // namespace mwls
