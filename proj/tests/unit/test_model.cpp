#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "../support/oracles.hpp"
#include "mwls/cloud.hpp"
#include "mwls/error.hpp"
#include "mwls/model.hpp"

using namespace mwls;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
    Eigen::Index k = 0;
    for (double e : v) x[k++] = e;
    return x;
}

// Per component of H^{(i)}_j: |mean| <= 4 std / sqrt(M) and second moment
// within [lo, hi] times q_c / (t_j - t_i), where q_c = 1 per component.
void check_weight_moments(const MarkovModel& model, const TimeGrid& g, int i, std::int64_t M,
                          double lo, double hi) {
    const auto cloud = sample_cloud(model, g, i, M, 99);
    for (int j = i + 1; j <= g.N(); ++j)
        for (int l = 0; l < model.q(); ++l) {
            double s = 0.0, s2 = 0.0;
            for (std::int64_t m = 0; m < M; ++m) {
                const double v = cloud.h(m, j)[l];
                s += v;
                s2 += v * v;
            }
            const double mean = s / M;
            const double sd = std::sqrt(s2 / M - mean * mean);
            CAPTURE(j);
            CAPTURE(l);
            CHECK(std::abs(mean) <= 4.0 * sd / std::sqrt(double(M)));
            const double ref = 1.0 / (g.t(j) - g.t(i));
            CHECK(s2 / M >= lo * ref);
            CHECK(s2 / M <= hi * ref);
        }
}

SdeCoefficients ou(double theta, double s) {
    SdeCoefficients c;
    c.b = [theta](double, const Eigen::VectorXd& x) -> Eigen::VectorXd { return -theta * x; };
    c.sigma = [s](double, const Eigen::VectorXd& x) -> Eigen::MatrixXd {
        return s * Eigen::MatrixXd::Identity(x.size(), x.size());
    };
    return c;
}

}  // namespace

TEST_CASE("initial laws") {
    Stream s(1, StreamDomain::Test, 0, 0);
    const auto p = InitialLaw::point(vec({0.5, -1.0}));
    CHECK(p.sample(s) == vec({0.5, -1.0}));
    const auto b = InitialLaw::box(vec({1.0}), 2.0);
    for (int k = 0; k < 1000; ++k) {
        const double v = b.sample(s)[0];
        CHECK(v > -1.0);
        CHECK(v < 3.0);
    }
    CHECK_THROWS_AS(InitialLaw::box(vec({0.0}), -1.0), ValidationError);
    CHECK_THROWS_AS(brownian_model(2, InitialLaw::point(vec({0.0}))), ValidationError);
}

TEST_CASE("Brownian weights have zero mean and the Gaussian second moment") {
    const auto g = TimeGrid::uniform(1.0, 5);
    const auto model = brownian_model(2, InitialLaw::box(vec({0.0, 0.0}), 1.0));
    CHECK(model->C_M() == doctest::Approx(std::sqrt(2.0)));
    check_weight_moments(*model, g, 1, 100000, 0.95, 1.05);
}

TEST_CASE("Brownian paths follow the Gaussian law (KS test)") {
    const auto g = TimeGrid::uniform(1.0, 4);
    const auto model = brownian_model(1, InitialLaw::point(vec({0.0})));
    const std::int64_t M = 10000;
    const auto cloud = sample_cloud(*model, g, 0, M, 2024);
    std::vector<double> xs(static_cast<std::size_t>(M));
    for (std::int64_t m = 0; m < M; ++m) xs[static_cast<std::size_t>(m)] = cloud.x(m, 4)[0];
    std::sort(xs.begin(), xs.end());
    double D = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double F = mwls::testing::norm_cdf(xs[k]);
        D = std::max({D, std::abs(F - double(k) / M), std::abs(F - double(k + 1) / M)});
    }
    // 1% critical value of the one-sample KS statistic
    CHECK(D < 1.628 / std::sqrt(double(M)));
}

TEST_CASE("GBM degenerates to its initial point without volatility") {
    const auto g = TimeGrid::uniform(2.0, 6);
    const auto model = gbm_model(vec({0.0}), vec({1e-14}), InitialLaw::point(vec({1.7})));
    const auto cloud = sample_cloud(*model, g, 2, 50, 5);
    for (std::int64_t m = 0; m < 50; ++m)
        for (int k = 2; k <= 6; ++k) CHECK(cloud.x(m, k)[0] == doctest::Approx(1.7).epsilon(1e-12));
    CHECK_THROWS_AS(gbm_model(vec({0.0}), vec({0.0}), InitialLaw::point(vec({1.0}))), ValidationError);
    CHECK_THROWS_AS(gbm_model(vec({0.0}), vec({0.2}), InitialLaw::box(vec({1.0}), 1.5)), ValidationError);
}

TEST_CASE("GBM mean grows at the drift rate") {
    const auto g = TimeGrid::uniform(1.0, 4);
    const auto model = gbm_model(vec({0.3}), vec({0.2}), InitialLaw::point(vec({1.0})));
    const std::int64_t M = 100000;
    const auto cloud = sample_cloud(*model, g, 0, M, 6);
    double s = 0.0, s2 = 0.0;
    for (std::int64_t m = 0; m < M; ++m) {
        s += cloud.x(m, 4)[0];
        s2 += cloud.x(m, 4)[0] * cloud.x(m, 4)[0];
    }
    const double mean = s / M, sd = std::sqrt(s2 / M - mean * mean);
    CHECK(std::abs(mean - std::exp(0.3)) < 4.0 * sd / std::sqrt(double(M)));
}

TEST_CASE("Euler scheme with identity diffusion reproduces the Brownian model") {
    SdeCoefficients c;
    c.b = [](double, const Eigen::VectorXd& x) -> Eigen::VectorXd { return Eigen::VectorXd::Zero(x.size()); };
    c.sigma = [](double, const Eigen::VectorXd& x) -> Eigen::MatrixXd {
        return Eigen::MatrixXd::Identity(x.size(), x.size());
    };
    c.db = [](double, const Eigen::VectorXd& x) -> Eigen::MatrixXd {
        return Eigen::MatrixXd::Zero(x.size(), x.size());
    };
    c.dsigma = [](double, const Eigen::VectorXd& x) {
        return std::vector<Eigen::MatrixXd>(static_cast<std::size_t>(x.size()),
                                            Eigen::MatrixXd::Zero(x.size(), x.size()));
    };
    const auto init = InitialLaw::box(vec({0.0, 1.0}), 0.5);
    const auto euler = euler_sde_model(2, c, init, std::sqrt(2.0));
    const auto bm = brownian_model(2, init);
    const auto g = TimeGrid::theta_grid(1.0, 6, 0.6);
    const auto a = sample_cloud(*euler, g, 2, 200, 3);
    const auto b = sample_cloud(*bm, g, 2, 200, 3);
    CHECK((a.X - b.X).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((a.H - b.H).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("linear SDE: the tangent process is X_r / X_i") {
    // dX = a X dW: the Euler tangent equals X_k / X_i and the weight reduces to
    // the Brownian increment (W_j - W_i) / (t_j - t_i), where the increments
    // are recovered from the path as (X_{k+1} / X_k - 1) / a.
    const double a = 0.3;
    SdeCoefficients c;
    c.b = [](double, const Eigen::VectorXd& x) -> Eigen::VectorXd { return Eigen::VectorXd::Zero(x.size()); };
    c.sigma = [a](double, const Eigen::VectorXd& x) -> Eigen::MatrixXd {
        Eigen::MatrixXd s(1, 1);
        s(0, 0) = a * x[0];
        return s;
    };
    const auto model = euler_sde_model(1, c, InitialLaw::box(vec({2.0}), 0.5), 1.0);
    const auto g = TimeGrid::uniform(1.0, 5);
    const auto cloud = sample_cloud(*model, g, 1, 2000, 8);
    double worst = 0.0;
    for (std::int64_t m = 0; m < cloud.M(); ++m) {
        double w = 0.0;
        for (int k = 1; k < 5; ++k) {
            w += (cloud.x(m, k + 1)[0] / cloud.x(m, k)[0] - 1.0) / a;
            worst = std::max(worst, std::abs(cloud.h(m, k + 1)[0] - w / (g.t(k + 1) - g.t(1))));
        }
    }
    // finite-difference Jacobian of sigma carries ~1e-10 relative error
    CHECK(worst < 1e-6);
    check_weight_moments(*model, g, 1, 100000, 0.95, 1.05);
}

TEST_CASE("Euler weights satisfy the moment bounds for a mean-reverting model") {
    const auto model = euler_sde_model(1, ou(1.5, 0.8), InitialLaw::box(vec({0.0}), 1.0), 1.0);
    const auto g = TimeGrid::uniform(1.0, 5);
    check_weight_moments(*model, g, 0, 100000, 0.0, 1.1);
}

TEST_CASE("singular diffusion is reported with time index and path") {
    SdeCoefficients c;
    c.b = [](double, const Eigen::VectorXd& x) -> Eigen::VectorXd { return Eigen::VectorXd::Zero(x.size()); };
    c.sigma = [](double t, const Eigen::VectorXd&) -> Eigen::MatrixXd {
        return Eigen::MatrixXd::Constant(1, 1, t < 0.5 ? 1.0 : 0.0);
    };
    const auto model = euler_sde_model(1, c, InitialLaw::point(vec({0.0})), 1.0);
    const auto g = TimeGrid::uniform(1.0, 4);
    try {
        (void)sample_cloud(*model, g, 0, 10, 1);
        FAIL("expected a NumericalError");
    } catch (const NumericalError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("time index 2") != std::string::npos);
        CHECK(msg.find("path 0") != std::string::npos);
    }
}

TEST_CASE("clouds are deterministic and index streams are disjoint") {
    const auto model = brownian_model(1, InitialLaw::box(vec({0.0}), 2.5));
    const auto g = TimeGrid::uniform(1.0, 8);
    const auto a = sample_cloud(*model, g, 3, 500, 42);
    const auto b = sample_cloud(*model, g, 3, 500, 42);
    CHECK(a.X == b.X);
    CHECK(a.H == b.H);

    // the same rows at another index or seed share no draws
    const auto c = sample_cloud(*model, g, 4, 500, 42);
    const auto e = sample_cloud(*model, g, 3, 500, 43);
    int equal = 0;
    for (std::int64_t m = 0; m < 500; ++m) {
        if (a.x(m, 3)[0] == c.x(m, 4)[0]) ++equal;
        if (a.x(m, 3)[0] == e.x(m, 3)[0]) ++equal;
    }
    CHECK(equal == 0);

    // row m only depends on (seed, i, m)
    const auto small = sample_cloud(*model, g, 3, 17, 42);
    CHECK(small.X == a.X.topRows(17));
    CHECK(small.domain == StreamDomain::Cloud);
}

TEST_CASE("cloud dump round trip") {
    const auto model = brownian_model(2, InitialLaw::box(vec({0.0, 0.0}), 1.0));
    const auto g = TimeGrid::uniform(1.0, 3);
    const auto a = sample_cloud(*model, g, 1, 7, 11, StreamDomain::Fresh);
    std::stringstream ss;
    write_cloud(a, ss);
    const auto b = read_cloud(ss);
    CHECK(b.i == 1);
    CHECK(b.N == 3);
    CHECK(b.d == 2);
    CHECK(b.seed == 11);
    CHECK(b.domain == StreamDomain::Fresh);
    CHECK(b.X == a.X);
    CHECK(b.H == a.H);
    std::stringstream truncated(ss.str().substr(0, 30));
    CHECK_THROWS_AS(read_cloud(truncated), ValidationError);
}

TEST_CASE("cloud arguments are validated") {
    const auto model = brownian_model(1, InitialLaw::point(vec({0.0})));
    const auto g = TimeGrid::uniform(1.0, 3);
    CHECK_THROWS_AS(sample_cloud(*model, g, 3, 10, 1), ValidationError);
    CHECK_THROWS_AS(sample_cloud(*model, g, 0, 0, 1), ValidationError);
}
