#pragma once

#include <optional>
#include <vector>

#include "mwls/grid.hpp"

namespace mwls {

/// Structural constants of a problem: driver regularity, weight moments,
/// terminal bounds, horizon and grid ratio.
struct ProblemConstants {
    double L_f = 0.0;
    double C_f = 0.0;
    double theta_L = 1.0;
    double theta_C = 1.0;
    double C_M = 1.0;
    double C_xi = 0.0;  // may be +infinity for unbounded terminal data
    std::optional<double> C_Phi;
    std::optional<double> theta_Phi;
    double T = 1.0;
    double R_pi = 1.0;
    int q = 1;

    /// Throws ValidationError naming the offending field.
    void validate() const;
};

/// Complete Beta integral, computed by adaptive quadrature after removing
/// the endpoint singularities with a power substitution.
double beta_integral(double alpha, double beta);

/// Constant controlling singular step sums on grids with ratio <= R_pi.
/// beta == 1 selects the single-sum constant (1/alpha when alpha <= 1).
double B_const(double alpha, double beta, double R_pi);

/// Output of the exponent-improvement iteration.
struct GronwallConstants {
    int kappa = 0;       // number of doubling steps
    double c_w = 1.0;    // multiplier on the w-terms
    double c_hat = 0.0;  // residual feedback constant
    double zeta_T = 0.0;
    double c_bar = 0.0;
};

/// Runs the exponent-doubling iteration for a feedback inequality with
/// constant C_u, singular exponents (alpha, beta) on [0, T].
GronwallConstants gronwall_constants(double C_u, double T, double alpha, double beta,
                                     double R_pi);

/// Constant c^gamma turning the intermediate bound into a weighted sum of w.
double c_gamma(double C_u, double T, double alpha, double beta, double gamma, double R_pi);

struct AprioriConstants {
    double A1y = 1.0;
    double A2y = 1.0;
    double A1z = 0.0;
    double A2z = 0.0;
    double A3z = 0.0;
};

AprioriConstants apriori_constants(const ProblemConstants& pc);

/// Per-index almost-sure bounds |Y_i| <= C_y[i], |Z_i| <= C_z[i], length N+1.
/// C_z[N] is +infinity.
struct AsBounds {
    std::vector<double> C_y;
    std::vector<double> C_z;
};

AsBounds as_bounds(const ProblemConstants& pc, const TimeGrid& grid);

/// Coefficients of the observation bounds
///   Theta_y[i] = c1 C_xi + c2 C_f (T-t_i)^theta_C
///   Theta_z[i] = c3 C_xi (T-t_i)^{-1/2} + c4 C_f (T-t_i)^{theta_C - 1/2}.
struct ObsCoefficients {
    double c1 = 1.0;
    double c2 = 0.0;
    double c3 = 0.0;
    double c4 = 0.0;
};

ObsCoefficients obs_coefficients(const ProblemConstants& pc);

struct ObsBounds {
    std::vector<double> Theta_y;  // length N+1, Theta_y[N] = C_xi
    std::vector<double> Theta_z;  // length N+1, Theta_z[N] = +infinity
};

ObsBounds obs_bounds(const ProblemConstants& pc, const TimeGrid& grid);

/// Interdependence error C sqrt(2028 (K+1) [q] log(3M) / M); q enters for Z only.
double dep_errors(double C_bound, long K, long M, int q, bool z_flag);

struct BoundsTable {
    std::vector<double> t;
    std::vector<double> C_y, C_z, Theta_y, Theta_z;
    std::vector<double> E_dep_Y, E_dep_Z;  // empty until dimensions are known
    AprioriConstants apriori;
    ObsCoefficients obs;
    double AMy = 0.0;
    double AMz = 0.0;
};

/// Bounds that depend only on the problem constants and the grid.
BoundsTable make_bounds_table(const ProblemConstants& pc, const TimeGrid& grid);

/// Fills E_dep_Y / E_dep_Z for per-index basis dimensions and cloud sizes
/// (vectors of length N, index N is ignored and set to zero).
void attach_dep_errors(BoundsTable& table, const std::vector<long>& K_Y,
                       const std::vector<long>& K_Z, const std::vector<long>& M, int q);

/// Constants multiplying the propagated local errors in the global bound.
double global_AMy(const ProblemConstants& pc);
double global_AMz(const ProblemConstants& pc);

struct LocalErrorInputs {
    std::vector<double> E_app_Y;  // length >= N, index N treated as zero
    std::vector<double> E_app_Z;
    std::vector<long> K_Y;
    std::vector<long> K_Z;
    std::vector<long> M;
};

struct GlobalErrorBound {
    std::vector<double> local;    // E(k), k = 0..N-1
    std::vector<double> bound_Y;  // k = 0..N-1
    std::vector<double> bound_Z;
};

GlobalErrorBound global_error_bound(const ProblemConstants& pc, const TimeGrid& grid,
                                    const LocalErrorInputs& in);

}  // namespace mwls
