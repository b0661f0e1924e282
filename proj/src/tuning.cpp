#include "mwls/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "mwls/error.hpp"
#include "mwls/format.hpp"
#include "mwls/regression.hpp"

namespace mwls {

Regime parse_regime(const std::string& s) {
    if (s == "smooth") return Regime::Smooth;
    if (s == "holder") return Regime::Holder;
    throw ValidationError("unknown regime '" + s + "' (expected smooth or holder)");
}

std::string to_string(Regime r) { return r == Regime::Smooth ? "smooth" : "holder"; }

TuningPlan tune_parameters(const TuningInputs& in, const TimeGrid& grid) {
    if (in.N < 1) throw ValidationError("N must be at least 1");
    if (in.l < 1) throw ValidationError("l must be at least 1: the z-basis has degree l - 1");
    if (!(in.kappa > 0.0)) throw ValidationError("kappa must be positive");
    if (!(in.lambda > 0.0)) throw ValidationError("lambda must be positive");
    if (in.d < 1) throw ValidationError("d must be at least 1");
    if (!(in.theta_pi > 0.0 && in.theta_pi <= 1.0)) throw ValidationError("theta_pi must lie in (0, 1]");
    if (grid.N() != in.N) throw ValidationError("grid size does not match N");

    TuningPlan p;
    p.in = in;
    const double N = in.N;
    const double logN1 = std::log(N + 1.0);
    const double dl = static_cast<double>(in.d) / in.l;
    p.R = 2.0 * in.kappa / in.lambda * logN1;
    const double dy = std::pow(N, -in.kappa / (in.l + 1));
    const double dz = std::pow(N, -in.kappa / in.l);
    const double M0 = std::pow(logN1, in.d + 1) * std::pow(N, in.kappa * (2.0 + dl));

    for (int i = 0; i < in.N; ++i) {
        double sy = dy, sz = dz, m = M0;
        if (in.regime == Regime::Holder) {
            const double e = grid.remaining(i);
            sy *= std::sqrt(e);
            sz *= std::sqrt(e);
            m *= std::pow(e, -in.d / 2.0);
        }
        p.delta_y.push_back(sy);
        p.delta_z.push_back(sz);
        p.M_formula.push_back(m);
        const LocalPolynomialBasis by(in.d, in.l, sy, p.R);
        const LocalPolynomialBasis bz(in.d, in.l - 1, sz, p.R);
        p.K_Y.push_back(by.K());
        p.K_Z.push_back(bz.K());
        const auto mc = static_cast<std::int64_t>(std::ceil(m));
        p.M.push_back(std::max({mc, by.K(), bz.K()}));
        p.cost += N * static_cast<double>(p.M.back());
    }
    if (in.regime == Regime::Smooth)
        p.accuracy_exponent = 1.0 / ((2.0 + dl) + 2.0 / in.kappa);
    else
        p.accuracy_exponent =
            1.0 / ((2.0 + dl) + (1.0 / in.kappa) * (1.0 + std::max(in.d / (2.0 * in.theta_pi), 1.0)));
    return p;
}

void write_plan_csv(const TuningPlan& plan, const TimeGrid& grid, std::ostream& out) {
    const auto& in = plan.in;
    out << "# regime = " << to_string(in.regime) << '\n'
        << "# N = " << in.N << '\n'
        << "# kappa = " << fmt_double(in.kappa) << '\n'
        << "# l = " << in.l << '\n'
        << "# d = " << in.d << '\n'
        << "# lambda = " << fmt_double(in.lambda) << '\n'
        << "# theta_pi = " << fmt_double(in.theta_pi) << '\n'
        << "# T = " << fmt_double(in.T) << '\n'
        << "# R = " << fmt_double(plan.R) << '\n'
        << "# cost = " << fmt_double(plan.cost) << '\n'
        << "# accuracy_exponent = " << fmt_double(plan.accuracy_exponent) << '\n';
    out << "index,t,delta_y,delta_z,M_formula,M,K_Y,K_Z\n";
    for (std::size_t i = 0; i < plan.delta_y.size(); ++i) {
        out << i << ',' << fmt_double(grid.t(static_cast<int>(i))) << ',' << fmt_double(plan.delta_y[i])
            << ',' << fmt_double(plan.delta_z[i]) << ',' << fmt_double(plan.M_formula[i]) << ','
            << plan.M[i] << ',' << plan.K_Y[i] << ',' << plan.K_Z[i] << '\n';
    }
}

}  // namespace mwls
