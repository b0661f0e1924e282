#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mwls/config.hpp"

namespace mwls {

struct StudyPoint {
    double value = 0.0;  // swept parameter
    int index = 0;       // time index of the z columns
    double cost = 0.0;
    double max_in_sample_y = 0.0;
    double in_sample_z = 0.0;
    double fresh_z = 0.0;
    double fresh_z_se = 0.0;
    double max_fresh_y = 0.0;
};

struct StudyResult {
    std::string parameter;
    std::vector<StudyPoint> points;
    // log-log least-squares slopes against the swept parameter
    double slope_in_sample_y = 0.0;
    double slope_in_sample_z = 0.0;
    double slope_fresh_z = 0.0;
};

/// Least-squares slope of log(y) against log(x); pairs with y <= 0 are skipped.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// One run per value of cfg.sweep_values, overriding cfg.sweep_parameter.
StudyResult convergence_study(const RunConfig& cfg);

void write_study_csv(const StudyResult& r, std::ostream& out, const std::string& header = {});

struct BenchRow {
    std::string problem;
    double max_in_sample_y = 0.0;
    double max_in_sample_z = 0.0;
    double max_fresh_y = 0.0;
    double max_fresh_z = 0.0;
    bool bound_dominance = false;   // in-sample errors <= global bound at every index
    bool dep_inequality = false;    // fresh <= sqrt(2) in-sample + E_dep at every index
    double cost = 0.0;
};

/// Runs B1-B4 with the grid, basis and simulation settings of cfg.
std::vector<BenchRow> run_bench(const RunConfig& cfg);

void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& out, const std::string& header = {});

}  // namespace mwls
