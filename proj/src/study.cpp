#include "mwls/study.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "mwls/error.hpp"
#include "mwls/format.hpp"
#include "mwls/report.hpp"

namespace mwls {

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    for (std::size_t k = 0; k < std::min(x.size(), y.size()); ++k) {
        if (x[k] > 0.0 && y[k] > 0.0) {
            lx.push_back(std::log(x[k]));
            ly.push_back(std::log(y[k]));
        }
    }
    if (lx.size() < 2) return std::nan("");
    const auto n = static_cast<double>(lx.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
        mx += lx[k];
        my += ly[k];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
        sxy += (lx[k] - mx) * (ly[k] - my);
        sxx += (lx[k] - mx) * (lx[k] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : std::nan("");
}

StudyResult convergence_study(const RunConfig& base) {
    base.validate();
    StudyResult r;
    r.parameter = base.sweep_parameter;
    for (double v : base.sweep_values) {
        RunConfig cfg = base;
        cfg.errors = true;
        if (r.parameter == "M") {
            cfg.M = {static_cast<std::int64_t>(std::llround(v))};
        } else if (r.parameter == "delta") {
            cfg.delta_y = {v};
            cfg.delta_z = {v};
        } else {
            cfg.N = static_cast<int>(std::llround(v));
            cfg.points.clear();
            if (cfg.M.size() > 1) cfg.M = {cfg.M.front()};
            if (cfg.delta_y.size() > 1) cfg.delta_y = {cfg.delta_y.front()};
            if (cfg.delta_z.size() > 1) cfg.delta_z = {cfg.delta_z.front()};
        }
        const auto run = execute_run(cfg);
        const auto& e = *run.errors;
        const int N = run.solution.N();
        const int idx = base.sweep_index >= 0 ? std::min(base.sweep_index, N - 1) : N / 2;
        const auto k = static_cast<std::size_t>(idx);
        StudyPoint p;
        p.value = v;
        p.index = idx;
        p.cost = e.cost;
        p.max_in_sample_y = *std::max_element(e.in_sample_y.begin(), e.in_sample_y.end());
        p.in_sample_z = e.in_sample_z[k];
        p.fresh_z = e.fresh_z[k];
        p.fresh_z_se = e.fresh_z_se[k];
        p.max_fresh_y = *std::max_element(e.fresh_y.begin(), e.fresh_y.end());
        r.points.push_back(p);
    }
    std::vector<double> xs, ey, ez, fz;
    for (const auto& p : r.points) {
        xs.push_back(p.value);
        ey.push_back(p.max_in_sample_y);
        ez.push_back(p.in_sample_z);
        fz.push_back(p.fresh_z);
    }
    r.slope_in_sample_y = loglog_slope(xs, ey);
    r.slope_in_sample_z = loglog_slope(xs, ez);
    r.slope_fresh_z = loglog_slope(xs, fz);
    return r;
}

void write_study_csv(const StudyResult& r, std::ostream& out, const std::string& header) {
    out << header;
    out << "# slope_in_sample_y = " << fmt_double(r.slope_in_sample_y) << '\n'
        << "# slope_in_sample_z = " << fmt_double(r.slope_in_sample_z) << '\n'
        << "# slope_fresh_z = " << fmt_double(r.slope_fresh_z) << '\n';
    out << r.parameter << ",index,cost,max_in_sample_y,in_sample_z,fresh_z,fresh_z_se,max_fresh_y\n";
    for (const auto& p : r.points)
        out << fmt_double(p.value) << ',' << p.index << ',' << fmt_double(p.cost) << ','
            << fmt_double(p.max_in_sample_y) << ',' << fmt_double(p.in_sample_z) << ','
            << fmt_double(p.fresh_z) << ',' << fmt_double(p.fresh_z_se) << ',' << fmt_double(p.max_fresh_y)
            << '\n';
}

std::vector<BenchRow> run_bench(const RunConfig& base) {
    std::vector<BenchRow> rows;
    for (const char* id : {"B1", "B2", "B3", "B4"}) {
        RunConfig cfg = base;
        cfg.problem = id;
        cfg.errors = true;
        const auto run = execute_run(cfg);
        const auto& e = *run.errors;
        BenchRow b;
        b.problem = id;
        b.max_in_sample_y = *std::max_element(e.in_sample_y.begin(), e.in_sample_y.end());
        b.max_in_sample_z = *std::max_element(e.in_sample_z.begin(), e.in_sample_z.end());
        b.max_fresh_y = *std::max_element(e.fresh_y.begin(), e.fresh_y.end());
        b.max_fresh_z = *std::max_element(e.fresh_z.begin(), e.fresh_z.end());
        b.bound_dominance = true;
        b.dep_inequality = true;
        for (std::size_t i = 0; i < e.in_sample_y.size(); ++i) {
            b.bound_dominance = b.bound_dominance && e.in_sample_y[i] <= e.bound_Y[i] && e.in_sample_z[i] <= e.bound_Z[i];
            b.dep_inequality = b.dep_inequality && e.dep_inequality_y[i] && e.dep_inequality_z[i];
        }
        b.cost = e.cost;
        rows.push_back(b);
    }
    return rows;
}

void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& out, const std::string& header) {
    out << header;
    out << "problem,max_in_sample_y,max_in_sample_z,max_fresh_y,max_fresh_z,bound_dominance,dep_inequality,cost\n";
    for (const auto& b : rows)
        out << b.problem << ',' << fmt_double(b.max_in_sample_y) << ',' << fmt_double(b.max_in_sample_z) << ','
            << fmt_double(b.max_fresh_y) << ',' << fmt_double(b.max_fresh_z) << ',' << (b.bound_dominance ? 1 : 0)
            << ',' << (b.dep_inequality ? 1 : 0) << ',' << fmt_double(b.cost) << '\n';
}

}  // namespace mwls
