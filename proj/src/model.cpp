#include "mwls/model.hpp"

#include <cmath>
#include <string>

#include "mwls/error.hpp"

namespace mwls {

InitialLaw InitialLaw::box(Eigen::VectorXd center, double half_width) {
    if (!(half_width >= 0.0)) throw ValidationError("initial box half-width must be nonnegative");
    return {std::move(center), half_width};
}

Eigen::VectorXd InitialLaw::sample(Stream& s) const {
    Eigen::VectorXd x = center;
    if (half_width > 0.0)
        for (Eigen::Index c = 0; c < x.size(); ++c) x[c] += half_width * (2.0 * s.uniform() - 1.0);
    return x;
}

MarkovModel::MarkovModel(int d, int q, double C_M, InitialLaw init)
    : d_(d), q_(q), C_M_(C_M), init_(std::move(init)) {
    if (d < 1 || q < 1) throw ValidationError("model dimensions must be positive");
    if (init_.center.size() != d) throw ValidationError("initial law dimension does not match d");
    if (!(C_M >= 0.0)) throw ValidationError("C_M must be nonnegative");
}

void MarkovModel::sample_row(const TimeGrid& grid, int i, Stream& s, double* x, double* h,
                             std::int64_t row) const {
    if (i < 0 || i > grid.N()) throw ValidationError("time index out of range");
    Eigen::VectorXd xi = init_.sample(s);
    if (i > 0) xi = propagate(grid, 0, i, xi, s);
    sample_from(grid, i, xi, s, x, h, row);
}

namespace {

class BrownianModel final : public MarkovModel {
public:
    BrownianModel(int d, InitialLaw init, Eigen::VectorXd drift)
        : MarkovModel(d, d, std::sqrt(static_cast<double>(d)), std::move(init)),
          drift_(std::move(drift)) {}

    Eigen::VectorXd propagate(const TimeGrid& grid, int i, int j, const Eigen::VectorXd& x_i,
                              Stream& s) const override {
        Eigen::VectorXd x = x_i;
        for (int k = i; k < j; ++k) {
            const double dt = grid.step(k);
            const double sd = std::sqrt(dt);
            for (int c = 0; c < d(); ++c) x[c] += drift_[c] * dt + sd * s.normal();
        }
        return x;
    }

protected:
    void sample_from(const TimeGrid& grid, int i, const Eigen::VectorXd& x_i, Stream& s, double* x,
                     double* h, std::int64_t) const override {
        const int dd = d();
        Eigen::VectorXd w = Eigen::VectorXd::Zero(dd);
        for (int c = 0; c < dd; ++c) x[c] = x_i[c];
        for (int k = i; k < grid.N(); ++k) {
            const double dt = grid.step(k);
            const double sd = std::sqrt(dt);
            const double* xp = x + static_cast<std::ptrdiff_t>(k - i) * dd;
            double* xn = x + static_cast<std::ptrdiff_t>(k - i + 1) * dd;
            double* hk = h + static_cast<std::ptrdiff_t>(k - i) * dd;
            const double span = grid.t(k + 1) - grid.t(i);
            for (int c = 0; c < dd; ++c) {
                const double dw = sd * s.normal();
                w[c] += dw;
                xn[c] = xp[c] + drift_[c] * dt + dw;
                hk[c] = w[c] / span;
            }
        }
    }

private:
    Eigen::VectorXd drift_;
};

class GbmModel final : public MarkovModel {
public:
    GbmModel(Eigen::VectorXd mu, Eigen::VectorXd sigma, InitialLaw init)
        : MarkovModel(static_cast<int>(mu.size()), static_cast<int>(mu.size()),
                      std::sqrt(static_cast<double>(mu.size())), std::move(init)),
          mu_(std::move(mu)),
          sigma_(std::move(sigma)) {}

    Eigen::VectorXd propagate(const TimeGrid& grid, int i, int j, const Eigen::VectorXd& x_i,
                              Stream& s) const override {
        Eigen::VectorXd x = x_i;
        for (int k = i; k < j; ++k) {
            const double dt = grid.step(k);
            const double sd = std::sqrt(dt);
            for (int c = 0; c < d(); ++c)
                x[c] *= std::exp((mu_[c] - 0.5 * sigma_[c] * sigma_[c]) * dt + sigma_[c] * sd * s.normal());
        }
        return x;
    }

protected:
    void sample_from(const TimeGrid& grid, int i, const Eigen::VectorXd& x_i, Stream& s, double* x,
                     double* h, std::int64_t) const override {
        const int dd = d();
        Eigen::VectorXd w = Eigen::VectorXd::Zero(dd);
        for (int c = 0; c < dd; ++c) x[c] = x_i[c];
        for (int k = i; k < grid.N(); ++k) {
            const double dt = grid.step(k);
            const double sd = std::sqrt(dt);
            const double* xp = x + static_cast<std::ptrdiff_t>(k - i) * dd;
            double* xn = x + static_cast<std::ptrdiff_t>(k - i + 1) * dd;
            double* hk = h + static_cast<std::ptrdiff_t>(k - i) * dd;
            const double span = grid.t(k + 1) - grid.t(i);
            for (int c = 0; c < dd; ++c) {
                const double dw = sd * s.normal();
                w[c] += dw;
                xn[c] = xp[c] * std::exp((mu_[c] - 0.5 * sigma_[c] * sigma_[c]) * dt + sigma_[c] * dw);
                hk[c] = w[c] / span;
            }
        }
    }

private:
    Eigen::VectorXd mu_;
    Eigen::VectorXd sigma_;
};

Eigen::MatrixXd fd_jacobian_b(const SdeCoefficients& c, double t, const Eigen::VectorXd& x) {
    const Eigen::Index d = x.size();
    Eigen::MatrixXd J(d, d);
    for (Eigen::Index k = 0; k < d; ++k) {
        const double eps = 1e-6 * std::max(1.0, std::abs(x[k]));
        Eigen::VectorXd xp = x, xm = x;
        xp[k] += eps;
        xm[k] -= eps;
        J.col(k) = (c.b(t, xp) - c.b(t, xm)) / (2.0 * eps);
    }
    return J;
}

std::vector<Eigen::MatrixXd> fd_jacobian_sigma(const SdeCoefficients& c, double t,
                                               const Eigen::VectorXd& x) {
    const Eigen::Index d = x.size();
    std::vector<Eigen::MatrixXd> out(static_cast<std::size_t>(d), Eigen::MatrixXd(d, d));
    for (Eigen::Index k = 0; k < d; ++k) {
        const double eps = 1e-6 * std::max(1.0, std::abs(x[k]));
        Eigen::VectorXd xp = x, xm = x;
        xp[k] += eps;
        xm[k] -= eps;
        const Eigen::MatrixXd diff = (c.sigma(t, xp) - c.sigma(t, xm)) / (2.0 * eps);
        // out[col](row, k) = d sigma(row, col) / d x_k
        for (Eigen::Index col = 0; col < d; ++col) out[static_cast<std::size_t>(col)].col(k) = diff.col(col);
    }
    return out;
}

class EulerSdeModel final : public MarkovModel {
public:
    EulerSdeModel(int d, SdeCoefficients coef, InitialLaw init, double C_M)
        : MarkovModel(d, d, C_M, std::move(init)), c_(std::move(coef)) {
        if (!c_.b || !c_.sigma) throw ValidationError("SDE model needs drift and diffusion functions");
    }

    Eigen::VectorXd propagate(const TimeGrid& grid, int i, int j, const Eigen::VectorXd& x_i,
                              Stream& s) const override {
        Eigen::VectorXd x = x_i;
        Eigen::VectorXd dw(d());
        for (int k = i; k < j; ++k) {
            const double dt = grid.step(k);
            const double sd = std::sqrt(dt);
            for (int c = 0; c < d(); ++c) dw[c] = sd * s.normal();
            x = x + c_.b(grid.t(k), x) * dt + c_.sigma(grid.t(k), x) * dw;
        }
        return x;
    }

protected:
    void sample_from(const TimeGrid& grid, int i, const Eigen::VectorXd& x_i, Stream& s, double* x,
                     double* h, std::int64_t row) const override {
        const int dd = d();
        Eigen::VectorXd xc = x_i;
        Eigen::MatrixXd J = Eigen::MatrixXd::Identity(dd, dd);
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(dd);
        Eigen::VectorXd dw(dd);
        const Eigen::MatrixXd sigma_i = c_.sigma(grid.t(i), xc);
        for (int c = 0; c < dd; ++c) x[c] = xc[c];
        for (int k = i; k < grid.N(); ++k) {
            const double tk = grid.t(k);
            const double dt = grid.step(k);
            const double sd = std::sqrt(dt);
            for (int c = 0; c < dd; ++c) dw[c] = sd * s.normal();

            const Eigen::MatrixXd sig = c_.sigma(tk, xc);
            Eigen::FullPivLU<Eigen::MatrixXd> lu(sig);
            if (!lu.isInvertible() || !sig.allFinite())
                throw NumericalError("singular diffusion matrix at time index " + std::to_string(k) +
                                     ", path " + std::to_string(row));
            const Eigen::MatrixXd A = lu.solve(J * sigma_i);
            acc += A.transpose() * dw;

            const Eigen::MatrixXd db = c_.db ? c_.db(tk, xc) : fd_jacobian_b(c_, tk, xc);
            const auto ds = c_.dsigma ? c_.dsigma(tk, xc) : fd_jacobian_sigma(c_, tk, xc);
            Eigen::MatrixXd dJ = db * J * dt;
            for (int col = 0; col < dd; ++col) dJ += ds[static_cast<std::size_t>(col)] * J * dw[col];

            xc = xc + c_.b(tk, xc) * dt + sig * dw;
            J += dJ;

            double* xn = x + static_cast<std::ptrdiff_t>(k - i + 1) * dd;
            double* hk = h + static_cast<std::ptrdiff_t>(k - i) * dd;
            const double span = grid.t(k + 1) - grid.t(i);
            for (int c = 0; c < dd; ++c) {
                xn[c] = xc[c];
                hk[c] = acc[c] / span;
            }
        }
    }

private:
    SdeCoefficients c_;
};

}  // namespace

std::shared_ptr<MarkovModel> brownian_model(int d, InitialLaw init,
                                            std::optional<Eigen::VectorXd> drift) {
    Eigen::VectorXd mu = drift.value_or(Eigen::VectorXd::Zero(d));
    if (mu.size() != d) throw ValidationError("drift dimension does not match d");
    return std::make_shared<BrownianModel>(d, std::move(init), std::move(mu));
}

std::shared_ptr<MarkovModel> gbm_model(Eigen::VectorXd mu, Eigen::VectorXd sigma, InitialLaw init) {
    if (mu.size() < 1 || mu.size() != sigma.size())
        throw ValidationError("GBM drift and volatility must have the same positive dimension");
    for (Eigen::Index c = 0; c < sigma.size(); ++c)
        if (!(sigma[c] > 0.0)) throw ValidationError("GBM volatility must be positive");
    if (!((init.center.array() - init.half_width) > 0.0).all())
        throw ValidationError("GBM initial law must be supported in the positive orthant");
    return std::make_shared<GbmModel>(std::move(mu), std::move(sigma), std::move(init));
}

std::shared_ptr<MarkovModel> euler_sde_model(int d, SdeCoefficients coef, InitialLaw init,
                                             double C_M) {
    return std::make_shared<EulerSdeModel>(d, std::move(coef), std::move(init), C_M);
}

}  // namespace mwls
