#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mwls/config.hpp"
#include "mwls/harness.hpp"

namespace mwls {

/// index,t,C_y,C_z,Theta_y,Theta_z (rows 0..N).
void write_bounds_csv(const BoundsTable& table, std::ostream& out, const std::string& header = {});

/// Per index: M, K_Y, K_Z, truncation levels, observation ratio, and the
/// estimators on 21 points along the first axis of [-R, R]^d.
void write_solution_csv(const MwlsSolution& sol, std::ostream& out, const std::string& header = {});

void write_errors_csv(const ErrorReport& rep, std::ostream& out, const std::string& header = {});

struct RunOutputs {
    MwlsSolution solution;
    std::optional<ErrorReport> errors;
};

/// Solves the configured benchmark and estimates its errors (if enabled).
RunOutputs execute_run(const RunConfig& cfg);

/// execute_run plus config.resolved.ini, solution.csv, errors.csv and
/// bounds.csv in cfg.out_dir.
RunOutputs execute_run_to_dir(const RunConfig& cfg);

/// Bounds table of the configured problem with its dependence errors.
BoundsTable configured_bounds(const RunConfig& cfg);

}  // namespace mwls
