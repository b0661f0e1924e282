#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mwls/grid.hpp"

namespace mwls {

enum class Regime { Smooth, Holder };

Regime parse_regime(const std::string& s);
std::string to_string(Regime r);

struct TuningInputs {
    int N = 10;
    double kappa = 0.5;   // target accuracy N^{-kappa}
    int l = 1;            // y-basis degree; the z-basis has degree l - 1
    int d = 1;
    double lambda = 1.0;  // exponential-moment parameter of X
    Regime regime = Regime::Smooth;
    double theta_pi = 1.0;  // grid exponent of the pi^theta grid
    double T = 1.0;
};

struct TuningPlan {
    TuningInputs in;
    double R = 0.0;
    std::vector<double> delta_y;  // length N
    std::vector<double> delta_z;
    std::vector<double> M_formula;           // unrounded sample-size formula
    std::vector<std::int64_t> M;             // max(ceil(formula), K_Y, K_Z)
    std::vector<std::int64_t> K_Y;
    std::vector<std::int64_t> K_Z;
    double cost = 0.0;                       // sum_i N M_i
    double accuracy_exponent = 0.0;          // accuracy ~ cost^{-exponent}
};

/// Parameter choices balancing approximation and statistical errors on the
/// grid pi^{theta_pi}.
TuningPlan tune_parameters(const TuningInputs& in, const TimeGrid& grid);

/// Plan as CSV: commented header with R and the accuracy exponent, then
/// index,t,delta_y,delta_z,M_formula,M,K_Y,K_Z.
void write_plan_csv(const TuningPlan& plan, const TimeGrid& grid, std::ostream& out);

}  // namespace mwls
