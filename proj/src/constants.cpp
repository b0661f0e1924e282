#include "mwls/constants.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "mwls/error.hpp"

namespace mwls {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Product with the convention 0 * inf = 0, so that unbounded data paired
// with a vanishing coefficient contributes nothing.
double mul0(double a, double b) {
    if (a == 0.0 || b == 0.0) return 0.0;
    return a * b;
}

void require_nonneg(double v, const char* name) {
    if (!(v >= 0.0)) throw ValidationError(std::string(name) + " must be nonnegative");
}

// Term coef * e^power in the remaining time e = T - t.
struct PowerTerm {
    double coef;
    double power;
};

using Terms = std::vector<PowerTerm>;

// sum_{j=i}^{N-1} step_j e_j^p  <=  B_{p+1,1} e_i^{p+1}
Terms step_sum(const Terms& in, double R_pi) {
    Terms out;
    for (const auto& t : in) out.push_back({mul0(t.coef, B_const(t.power + 1.0, 1.0, R_pi)), t.power + 1.0});
    return out;
}

// sum_{j=i+1}^{N-1} step_j e_j^p / sqrt(t_j - t_i)  <=  B_{p+1,1/2} e_i^{p+1/2}
Terms singular_step_sum(const Terms& in, double R_pi) {
    Terms out;
    for (const auto& t : in)
        out.push_back({mul0(t.coef, B_const(t.power + 1.0, 0.5, R_pi)), t.power + 0.5});
    return out;
}

// Bounds every term by coef T^{p - target} e^target (requires p >= target).
double collapse(const Terms& in, double target, double T) {
    double c = 0.0;
    for (const auto& t : in) {
        if (t.coef == 0.0) continue;
        if (t.power < target - 1e-14)
            throw NumericalError("observation bound exponent below target");
        c += t.coef * std::pow(T, std::max(0.0, t.power - target));
    }
    return c;
}

Terms scale(Terms in, double s) {
    for (auto& t : in) t.coef = mul0(t.coef, s);
    return in;
}

Terms concat(Terms a, const Terms& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace

void ProblemConstants::validate() const {
    require_nonneg(L_f, "L_f");
    require_nonneg(C_f, "C_f");
    require_nonneg(C_M, "C_M");
    require_nonneg(C_xi, "C_xi");
    if (!(theta_L > 0.0 && theta_L <= 1.0)) throw ValidationError("theta_L must lie in (0, 1]");
    if (!(theta_C > 0.0 && theta_C <= 1.0)) throw ValidationError("theta_C must lie in (0, 1]");
    if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("T must be positive");
    if (!(R_pi >= 1.0) || !std::isfinite(R_pi)) throw ValidationError("R_pi must be at least 1");
    if (q < 1) throw ValidationError("q must be at least 1");
    if (C_Phi.has_value() != theta_Phi.has_value())
        throw ValidationError("C_Phi and theta_Phi must be given together");
    if (C_Phi) {
        require_nonneg(*C_Phi, "C_Phi");
        if (!(*theta_Phi >= 0.0 && *theta_Phi <= 1.0))
            throw ValidationError("theta_Phi must lie in [0, 1]");
    }
}

double beta_integral(double alpha, double beta) {
    if (!(alpha > 0.0) || !(beta > 0.0)) throw ValidationError("Beta exponents must be positive");
    using boost::math::quadrature::gauss_kronrod;
    // Left half, s = u^{1/beta}: integrand (1/beta)(1 - u^{1/beta})^{alpha-1}.
    auto left = [&](double u) { return std::pow(1.0 - std::pow(u, 1.0 / beta), alpha - 1.0) / beta; };
    // Right half, 1 - s = v^{1/alpha}: integrand (1/alpha)(1 - v^{1/alpha})^{beta-1}.
    auto right = [&](double v) { return std::pow(1.0 - std::pow(v, 1.0 / alpha), beta - 1.0) / alpha; };
    double err = 0.0;
    const double a = gauss_kronrod<double, 61>::integrate(left, 0.0, std::pow(0.5, beta), 20, 1e-12, &err);
    const double b = gauss_kronrod<double, 61>::integrate(right, 0.0, std::pow(0.5, alpha), 20, 1e-12, &err);
    return a + b;
}

double B_const(double alpha, double beta, double R_pi) {
    if (!(alpha > 0.0) || !(beta > 0.0)) throw ValidationError("B_const exponents must be positive");
    if (!(R_pi >= 1.0)) throw ValidationError("R_pi must be at least 1");
    if (beta == 1.0) return alpha <= 1.0 ? 1.0 / alpha : 1.0;
    if (alpha >= 1.0 && beta >= 1.0) return 1.0;
    return (1.0 + R_pi) * beta_integral(alpha, beta);
}

GronwallConstants gronwall_constants(double C_u, double T, double alpha, double beta,
                                     double R_pi) {
    require_nonneg(C_u, "C_u");
    require_nonneg(alpha, "alpha");
    if (!(beta > 0.0 && beta <= 0.5)) throw ValidationError("beta must lie in (0, 1/2]");
    if (!(T > 0.0)) throw ValidationError("T must be positive");

    GronwallConstants g;
    double m = 1.0;
    double a = alpha;
    double C = C_u;
    // smallest kappa with 2^kappa (alpha + beta) >= 1/2 + beta
    while (std::ldexp(alpha + beta, g.kappa) < 0.5 + beta) {
        const double B = B_const(alpha + beta, 0.5 + a, R_pi);
        const double Bu = B_const(a + beta, 0.5 + a, R_pi);
        m *= 1.0 + C * std::pow(T, a - alpha) + C * B * std::pow(T, a + beta);
        C = C * C * Bu;
        a = 2.0 * a + beta;
        ++g.kappa;
    }
    g.c_w = m;
    g.c_hat = C * std::pow(T, a - 0.5);
    g.zeta_T = 2.0 / (1.0 + 2.0 * beta) * 2.0 * g.c_hat * std::pow(T, (1.0 + 2.0 * beta) / 2.0);
    g.c_bar = 2.0 * g.c_w * std::max(1.0, g.c_hat) * std::exp(g.zeta_T) *
              (1.0 + B_const(alpha + beta, 1.0, R_pi) * std::pow(T, alpha + beta));
    return g;
}

double c_gamma(double C_u, double T, double alpha, double beta, double gamma, double R_pi) {
    if (!(gamma > 0.0)) throw ValidationError("gamma must be positive");
    const auto g = gronwall_constants(C_u, T, alpha, beta, R_pi);
    return g.c_bar * (1.0 + B_const(beta + alpha, gamma, R_pi) * std::pow(T, alpha + beta) +
                      B_const(beta + 0.5, gamma, R_pi) * std::pow(T, 0.5 + beta));
}

AprioriConstants apriori_constants(const ProblemConstants& pc) {
    pc.validate();
    const double b = pc.theta_L / 2.0;
    const double C_u = pc.L_f * (pc.C_M + std::sqrt(pc.T));
    const double c1 = c_gamma(C_u, pc.T, 0.0, b, 1.0, pc.R_pi);
    const double c12 = c_gamma(C_u, pc.T, 0.0, b, 0.5, pc.R_pi);
    const double Tb = std::pow(pc.T, b);
    const double R = pc.R_pi;
    const double sT = std::sqrt(pc.T);

    AprioriConstants a;
    const double Lc1 = mul0(pc.L_f, c1);
    const double Lc12 = mul0(pc.L_f, c12);
    a.A1y = 1.0 + Lc1 * (pc.C_M * B_const(b, 1.0, R) + B_const(0.5 + b, 1.0, R) * sT) * Tb;
    a.A2y = 1.0 + Lc1 * (pc.C_M + sT) * B_const(b, 1.0, R) * Tb;
    a.A1z = mul0(pc.C_M, 1.0 + mul0(Lc12, pc.C_M) * B_const(b, 0.5, R) * Tb);
    a.A2z = mul0(pc.C_M, 1.0 + Lc12 * (pc.C_M + sT) * B_const(b, 0.5, R) * Tb);
    a.A3z = mul0(pc.C_M, Lc12 * B_const(0.5 + b, 0.5, R));
    return a;
}

AsBounds as_bounds(const ProblemConstants& pc, const TimeGrid& grid) {
    const auto a = apriori_constants(pc);
    const int N = grid.N();
    const double R = pc.R_pi;
    const double BC1 = B_const(pc.theta_C, 1.0, R);
    const double BCh = B_const(pc.theta_C, 0.5, R);
    AsBounds out;
    out.C_y.resize(static_cast<std::size_t>(N) + 1);
    out.C_z.resize(static_cast<std::size_t>(N) + 1);
    for (int i = 0; i <= N; ++i) {
        const double e = grid.remaining(i);
        const auto k = static_cast<std::size_t>(i);
        out.C_y[k] = mul0(a.A1y, pc.C_xi) + mul0(a.A2y, mul0(pc.C_f * BC1, std::pow(e, pc.theta_C)));
        if (i == N) {
            out.C_z[k] = mul0(pc.C_xi + pc.C_f, kInf);
            continue;
        }
        double osc = mul0(2.0, pc.C_xi);
        if (pc.C_Phi) osc = std::min(osc, *pc.C_Phi * std::pow(e, *pc.theta_Phi / 2.0));
        out.C_z[k] = mul0(mul0(a.A1z, osc), 1.0 / std::sqrt(e)) +
                     mul0(a.A2z, mul0(pc.C_f * BCh, std::pow(e, pc.theta_C - 0.5))) +
                     mul0(a.A3z, pc.C_xi) * std::pow(e, pc.theta_L / 2.0);
    }
    return out;
}

ObsCoefficients obs_coefficients(const ProblemConstants& pc) {
    const auto a = apriori_constants(pc);
    const double R = pc.R_pi;
    const double hL = pc.theta_L / 2.0;
    const double sq = std::sqrt(static_cast<double>(pc.q));

    // Driver bound along a row, split into its C_xi and C_f parts:
    //   |f_j| <= L_f (C_y[j+1] + sqrt(q) C_z[j]) e_j^{theta_L/2 - 1/2} + C_f e_j^{theta_C - 1}
    // with C_y[j+1] <= C_y evaluated at e_j and the crude oscillation 2 C_xi in C_z.
    const Terms drv_xi = scale(
        {{a.A1y, hL - 0.5}, {sq * 2.0 * a.A1z, hL - 1.0}, {sq * a.A3z, pc.theta_L - 0.5}}, pc.L_f);
    const Terms drv_f = concat(
        scale({{a.A2y * B_const(pc.theta_C, 1.0, R), pc.theta_C + hL - 0.5},
               {sq * a.A2z * B_const(pc.theta_C, 0.5, R), pc.theta_C + hL - 1.0}},
              pc.L_f),
        {{1.0, pc.theta_C - 1.0}});

    ObsCoefficients c;
    // y-response: Phi(x_N) + sum_{j >= i} f_j step_j
    c.c1 = 1.0 + collapse(step_sum(drv_xi, R), 0.0, pc.T);
    c.c2 = collapse(step_sum(drv_f, R), pc.theta_C, pc.T);
    // z-response: Phi(x_N) h_N + sum_{j > i} f_j h_j step_j, with |h_j| <= C_M / sqrt(t_j - t_i)
    c.c3 = mul0(pc.C_M, 1.0 + collapse(singular_step_sum(drv_xi, R), -0.5, pc.T));
    c.c4 = mul0(pc.C_M, collapse(singular_step_sum(drv_f, R), pc.theta_C - 0.5, pc.T));
    return c;
}

ObsBounds obs_bounds(const ProblemConstants& pc, const TimeGrid& grid) {
    const auto c = obs_coefficients(pc);
    const int N = grid.N();
    ObsBounds out;
    out.Theta_y.resize(static_cast<std::size_t>(N) + 1);
    out.Theta_z.resize(static_cast<std::size_t>(N) + 1);
    for (int i = 0; i <= N; ++i) {
        const double e = grid.remaining(i);
        const auto k = static_cast<std::size_t>(i);
        if (i == N) {
            out.Theta_y[k] = pc.C_xi;
            out.Theta_z[k] = mul0(pc.C_xi + pc.C_f, kInf);
            continue;
        }
        out.Theta_y[k] = mul0(c.c1, pc.C_xi) + mul0(c.c2, pc.C_f * std::pow(e, pc.theta_C));
        out.Theta_z[k] = mul0(mul0(c.c3, pc.C_xi), 1.0 / std::sqrt(e)) +
                         mul0(c.c4, mul0(pc.C_f, std::pow(e, pc.theta_C - 0.5)));
    }
    return out;
}

double dep_errors(double C_bound, long K, long M, int q, bool z_flag) {
    if (M < 1) throw ValidationError("M must be at least 1");
    if (K < 0) throw ValidationError("K must be nonnegative");
    require_nonneg(C_bound, "C_bound");
    double inner = 2028.0 * static_cast<double>(K + 1) * std::log(3.0 * static_cast<double>(M)) /
                   static_cast<double>(M);
    if (z_flag) inner *= q;
    return mul0(C_bound, std::sqrt(inner));
}

BoundsTable make_bounds_table(const ProblemConstants& pc, const TimeGrid& grid) {
    BoundsTable t;
    t.t.assign(grid.points().begin(), grid.points().end());
    auto as = as_bounds(pc, grid);
    auto ob = obs_bounds(pc, grid);
    t.C_y = std::move(as.C_y);
    t.C_z = std::move(as.C_z);
    t.Theta_y = std::move(ob.Theta_y);
    t.Theta_z = std::move(ob.Theta_z);
    t.apriori = apriori_constants(pc);
    t.obs = obs_coefficients(pc);
    t.AMy = global_AMy(pc);
    t.AMz = global_AMz(pc);
    return t;
}

void attach_dep_errors(BoundsTable& table, const std::vector<long>& K_Y,
                       const std::vector<long>& K_Z, const std::vector<long>& M, int q) {
    const std::size_t N = table.C_y.size() - 1;
    if (K_Y.size() < N || K_Z.size() < N || M.size() < N)
        throw ValidationError("dimension vectors shorter than the number of time steps");
    table.E_dep_Y.assign(N + 1, 0.0);
    table.E_dep_Z.assign(N + 1, 0.0);
    for (std::size_t i = 0; i < N; ++i) {
        table.E_dep_Y[i] = dep_errors(table.C_y[i], K_Y[i], M[i], q, false);
        table.E_dep_Z[i] = dep_errors(table.C_z[i], K_Z[i], M[i], q, true);
    }
}

namespace {

double global_C_u(const ProblemConstants& pc) {
    return pc.L_f * (std::sqrt(2.0) * pc.C_M + 4.0 * std::sqrt(pc.T));
}

}  // namespace

double global_AMy(const ProblemConstants& pc) {
    pc.validate();
    const double b = pc.theta_L / 2.0;
    const double c1 = c_gamma(global_C_u(pc), pc.T, 0.0, b, 1.0, pc.R_pi);
    return 2.0 + 4.0 * mul0(pc.L_f, c1) *
                     (1.0 + B_const(b, 1.0, pc.R_pi) * std::pow(pc.T, b) *
                                (pc.C_M + 2.0 * std::sqrt(pc.T)));
}

double global_AMz(const ProblemConstants& pc) {
    pc.validate();
    const double b = pc.theta_L / 2.0;
    const double c12 = c_gamma(global_C_u(pc), pc.T, 0.0, b, 0.5, pc.R_pi);
    return pc.C_M + std::sqrt(2.0) * mul0(pc.C_M, mul0(pc.L_f, c12)) *
                        (1.0 + B_const(b, 0.5, pc.R_pi) * std::pow(pc.T, b) *
                                   (pc.C_M + 2.0 * std::sqrt(pc.T)));
}

GlobalErrorBound global_error_bound(const ProblemConstants& pc, const TimeGrid& grid,
                                    const LocalErrorInputs& in) {
    const int N = grid.N();
    const auto n = static_cast<std::size_t>(N);
    if (in.E_app_Y.size() < n || in.E_app_Z.size() < n || in.K_Y.size() < n ||
        in.K_Z.size() < n || in.M.size() < n)
        throw ValidationError("local error inputs must cover indices 0..N-1");

    auto table = make_bounds_table(pc, grid);
    attach_dep_errors(table, in.K_Y, in.K_Z, in.M, pc.q);

    auto stat = [](double theta, long K, long M) {
        return mul0(theta, std::sqrt(static_cast<double>(K) / static_cast<double>(M)));
    };

    GlobalErrorBound out;
    out.local.assign(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double e = in.E_app_Z[k] + stat(table.Theta_z[k], in.K_Z[k], in.M[k]) +
                   mul0(pc.L_f, table.E_dep_Z[k]);
        if (k + 1 < n)
            e += in.E_app_Y[k + 1] + stat(table.Theta_y[k + 1], in.K_Y[k + 1], in.M[k + 1]) +
                 mul0(pc.L_f, table.E_dep_Y[k + 1]);
        out.local[k] = e;
    }

    const double w = (1.0 - pc.theta_L) / 2.0;
    out.bound_Y.assign(n, 0.0);
    out.bound_Z.assign(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double sy = 0.0;
        double sz = 0.0;
        for (std::size_t j = k; j < n; ++j) {
            const double term = out.local[j] * grid.step(static_cast<int>(j)) /
                                std::pow(grid.remaining(static_cast<int>(j)), w);
            sy += term;
            if (j > k) sz += term / std::sqrt(grid.t(static_cast<int>(j)) - grid.t(static_cast<int>(k)));
        }
        out.bound_Y[k] = in.E_app_Y[k] + stat(table.Theta_y[k], in.K_Y[k], in.M[k]) + mul0(table.AMy, sy);
        out.bound_Z[k] = in.E_app_Z[k] + stat(table.Theta_z[k], in.K_Z[k], in.M[k]) + mul0(table.AMz, sz);
    }
    return out;
}

}  // namespace mwls
