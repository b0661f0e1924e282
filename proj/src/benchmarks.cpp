#include "mwls/benchmarks.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "mwls/error.hpp"

namespace mwls {

namespace {

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }
double norm_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double sum_of(const double* x, int d) {
    double s = 0.0;
    for (int c = 0; c < d; ++c) s += x[c];
    return s;
}

std::shared_ptr<MarkovModel> brownian_for(const BenchmarkParams& p) {
    if (p.init.center.size() != p.d) throw ValidationError("initial law dimension does not match d");
    return brownian_model(p.d, p.init);
}

void require_scalar(const BenchmarkParams& p, const std::string& id) {
    if (p.d != 1) throw ValidationError("benchmark " + id + " is defined for d = 1 only");
}

// Gaussian expectation with the integration range split at known kinks of g.
double gaussian_expectation_split(const std::function<double(double)>& g, double mu, double s,
                                  std::vector<double> kinks) {
    if (s == 0.0) return g(mu);
    using boost::math::quadrature::gauss_kronrod;
    const double lim = 12.0;
    std::vector<double> cuts{-lim};
    for (double k : kinks) {
        const double u = (k - mu) / s;
        if (u > -lim && u < lim) cuts.push_back(u);
    }
    cuts.push_back(lim);
    std::sort(cuts.begin(), cuts.end());
    auto f = [&](double u) { return g(mu + s * u) * norm_pdf(u); };
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
        if (cuts[k + 1] > cuts[k])
            total += gauss_kronrod<double, 61>::integrate(f, cuts[k], cuts[k + 1], 20, 1e-13);
    return total;
}

Benchmark zero_problem(const BenchmarkParams& p) {
    Benchmark b;
    b.id = "Z0";
    b.description = "zero terminal value and zero driver";
    b.model = brownian_for(p);
    b.terminal.phi = [](const double*) { return 0.0; };
    b.terminal.C_xi = 0.0;
    b.terminal.C_Phi = 0.0;
    b.terminal.theta_Phi = 1.0;
    const int q = p.d;
    b.make_oracle = [q](const TimeGrid&) {
        return Oracle{[](int, const double*) { return 0.0; },
                      [q](int, const double*) { return Eigen::VectorXd::Zero(q).eval(); }};
    };
    return b;
}

// Phi = clip(sum x) on Brownian motion with driver f = alpha y; alpha = 0 is B1.
Benchmark linear_problem(const BenchmarkParams& p, double alpha, const std::string& id) {
    Benchmark b;
    b.id = id;
    b.model = brownian_for(p);
    const int d = p.d;
    const auto clip = p.clip;
    if (clip && !(*clip > 0.0)) throw ValidationError("clip level must be positive");
    b.terminal.phi = [d, clip](const double* x) {
        const double s = sum_of(x, d);
        return clip ? std::clamp(s, -*clip, *clip) : s;
    };
    b.terminal.C_xi = clip ? *clip : std::numeric_limits<double>::infinity();
    b.terminal.C_Phi = std::sqrt(static_cast<double>(d));
    b.terminal.theta_Phi = 1.0;
    if (alpha != 0.0) {
        b.driver.f = [alpha](int, const double*, double y, const double*) { return alpha * y; };
        b.driver.L_f = std::abs(alpha);
    }
    b.description = alpha == 0.0 ? "zero driver, Phi = sum of coordinates"
                                 : "linear driver f = alpha y, Phi = sum of coordinates";
    if (clip) b.description += " clipped";
    b.make_oracle = [d, clip, alpha](const TimeGrid& grid) {
        const int N = grid.N();
        std::vector<double> c(static_cast<std::size_t>(N) + 1);
        for (int k = 0; k <= N; ++k) c[static_cast<std::size_t>(k)] = linear_driver_factor(grid, k, alpha);
        auto y = [grid, d, clip, c](int i, const double* x) {
            const double s = sum_of(x, d);
            const double sd = std::sqrt(d * grid.remaining(i));
            const double m = clip ? gaussian_clip_mean(s, sd, *clip) : s;
            return c[static_cast<std::size_t>(i)] * m;
        };
        auto z = [grid, d, clip, c](int i, const double* x) {
            const double s = sum_of(x, d);
            const double sd = std::sqrt(d * grid.remaining(i));
            const double pr = clip ? gaussian_inside_prob(s, sd, *clip) : 1.0;
            const double f = i < grid.N() ? c[static_cast<std::size_t>(i) + 1] : 1.0;
            return Eigen::VectorXd::Constant(d, f * pr).eval();
        };
        return Oracle{y, z};
    };
    return b;
}

Benchmark tanh_problem(const BenchmarkParams& p) {
    require_scalar(p, "B2");
    Benchmark b;
    b.id = "B2";
    b.description = "zero driver, Phi = tanh";
    b.model = brownian_for(p);
    b.terminal.phi = [](const double* x) { return std::tanh(x[0]); };
    b.terminal.C_xi = 1.0;
    b.terminal.C_Phi = 1.0;
    b.terminal.theta_Phi = 1.0;
    b.make_oracle = [](const TimeGrid& grid) {
        auto y = [grid](int i, const double* x) {
            return gaussian_expectation([](double v) { return std::tanh(v); }, x[0],
                                        std::sqrt(grid.remaining(i)));
        };
        auto z = [grid](int i, const double* x) {
            const double v = gaussian_expectation(
                [](double u) {
                    const double t = std::tanh(u);
                    return 1.0 - t * t;
                },
                x[0], std::sqrt(grid.remaining(i)));
            return Eigen::VectorXd::Constant(1, v).eval();
        };
        return Oracle{y, z};
    };
    return b;
}

Benchmark holder_problem(const BenchmarkParams& p) {
    require_scalar(p, "B4");
    const double th = p.theta_Phi;
    const double cap = p.cap;
    if (!(th > 0.0 && th <= 1.0)) throw ValidationError("B4 exponent must lie in (0, 1]");
    if (!(cap > 0.0)) throw ValidationError("B4 cap must be positive");
    Benchmark b;
    b.id = "B4";
    b.description = "zero driver, Phi = min(|x|^theta, cap)";
    b.model = brownian_for(p);
    auto phi = [th, cap](double v) { return std::min(std::pow(std::abs(v), th), cap); };
    b.terminal.phi = [phi](const double* x) { return phi(x[0]); };
    b.terminal.C_xi = cap;
    // theta-Hoelder with constant 1: std of |G|^theta times (T - t)^{theta/2}
    b.terminal.C_Phi = std::sqrt(std::pow(2.0, th) * std::tgamma(th + 0.5) / std::sqrt(std::numbers::pi));
    b.terminal.theta_Phi = th;
    const std::vector<double> kinks{0.0, std::pow(cap, 1.0 / th), -std::pow(cap, 1.0 / th)};
    b.make_oracle = [phi, kinks](const TimeGrid& grid) {
        auto y = [grid, phi, kinks](int i, const double* x) {
            return gaussian_expectation_split(phi, x[0], std::sqrt(grid.remaining(i)), kinks);
        };
        auto z = [grid, phi, kinks](int i, const double* x) {
            const double e = grid.remaining(i);
            if (e == 0.0) return Eigen::VectorXd::Constant(1, 0.0).eval();
            const double s = std::sqrt(e);
            const double mu = x[0];
            // E[Phi(x + s G) G] / s
            const double v = gaussian_expectation_split(
                [&](double u) { return phi(u) * (u - mu) / s; }, mu, s, kinks);
            return Eigen::VectorXd::Constant(1, v / s).eval();
        };
        return Oracle{y, z};
    };
    return b;
}

}  // namespace

double gaussian_clip_mean(double mu, double s, double L) {
    if (s == 0.0) return std::clamp(mu, -L, L);
    const double a = (-L - mu) / s;
    const double b = (L - mu) / s;
    const double inner = mu * (norm_cdf(b) - norm_cdf(a)) + s * (norm_pdf(a) - norm_pdf(b));
    return L * norm_cdf(-b) - L * norm_cdf(a) + inner;
}

double gaussian_inside_prob(double mu, double s, double L) {
    if (s == 0.0) return std::abs(mu) < L ? 1.0 : 0.0;
    return norm_cdf((L - mu) / s) - norm_cdf((-L - mu) / s);
}

double gaussian_expectation(const std::function<double(double)>& g, double mu, double s) {
    return gaussian_expectation_split(g, mu, s, {});
}

double linear_driver_factor(const TimeGrid& grid, int k, double alpha) {
    double c = 1.0;
    for (int j = k; j < grid.N(); ++j) c *= 1.0 + alpha * grid.step(j);
    return c;
}

const std::map<std::string, BenchmarkFactory>& register_benchmarks() {
    static const std::map<std::string, BenchmarkFactory> registry{
        {"Z0", zero_problem},
        {"B1", [](const BenchmarkParams& p) { return linear_problem(p, 0.0, "B1"); }},
        {"B2", tanh_problem},
        {"B3", [](const BenchmarkParams& p) { return linear_problem(p, p.alpha, "B3"); }},
        {"B4", holder_problem},
    };
    return registry;
}

Benchmark make_benchmark(const std::string& id, const BenchmarkParams& params) {
    const auto& reg = register_benchmarks();
    auto it = reg.find(id);
    if (it == reg.end()) throw ValidationError("unknown problem id '" + id + "'");
    return it->second(params);
}

}  // namespace mwls
