#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "mwls/grid.hpp"
#include "mwls/rng.hpp"

namespace mwls {

/// Law of X_0. A point mass gives a degenerate regression at index 0; a box
/// spreads the regression points of every index.
struct InitialLaw {
    Eigen::VectorXd center;
    double half_width = 0.0;  // 0 means a point mass at center

    static InitialLaw point(Eigen::VectorXd x0) { return {std::move(x0), 0.0}; }
    static InitialLaw box(Eigen::VectorXd center, double half_width);

    Eigen::VectorXd sample(Stream& s) const;
};

/// Markov chain on the time grid together with its Malliavin weights.
class MarkovModel {
public:
    MarkovModel(int d, int q, double C_M, InitialLaw init);
    virtual ~MarkovModel() = default;

    [[nodiscard]] int d() const { return d_; }
    [[nodiscard]] int q() const { return q_; }
    [[nodiscard]] double C_M() const { return C_M_; }
    [[nodiscard]] const InitialLaw& initial_law() const { return init_; }

    /// Samples X_0 from the initial law, propagates to index i, then fills
    ///   x[(k-i)*d + c] = X_k component c,        k = i..N
    ///   h[(k-i-1)*q + l] = H^{(i)}_k component l, k = i+1..N.
    /// `row` only labels diagnostics.
    void sample_row(const TimeGrid& grid, int i, Stream& s, double* x, double* h,
                    std::int64_t row) const;

    /// X_j obtained from X_i = x_i with fresh noise.
    [[nodiscard]] virtual Eigen::VectorXd propagate(const TimeGrid& grid, int i, int j,
                                                    const Eigen::VectorXd& x_i, Stream& s) const = 0;

protected:
    /// Path and weights from a given X_i.
    virtual void sample_from(const TimeGrid& grid, int i, const Eigen::VectorXd& x_i, Stream& s,
                             double* x, double* h, std::int64_t row) const = 0;

private:
    int d_;
    int q_;
    double C_M_;
    InitialLaw init_;
};

/// X_t = X_0 + drift t + W_t, weights H^{(i)}_j = (W_j - W_i)/(t_j - t_i).
std::shared_ptr<MarkovModel> brownian_model(int d, InitialLaw init,
                                            std::optional<Eigen::VectorXd> drift = std::nullopt);

/// Componentwise geometric Brownian motion with the Brownian weights.
std::shared_ptr<MarkovModel> gbm_model(Eigen::VectorXd mu, Eigen::VectorXd sigma, InitialLaw init);

/// dX = b(t, X) dt + sigma(t, X) dW with square, invertible sigma.
struct SdeCoefficients {
    std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)> b;
    std::function<Eigen::MatrixXd(double, const Eigen::VectorXd&)> sigma;
    /// Jacobian of b; finite differences when absent.
    std::function<Eigen::MatrixXd(double, const Eigen::VectorXd&)> db;
    /// dsigma(t, x)[k] = Jacobian of column k of sigma; finite differences when absent.
    std::function<std::vector<Eigen::MatrixXd>(double, const Eigen::VectorXd&)> dsigma;
};

/// Euler scheme for X and its tangent process. The weights are the
/// left-point discretization of (1/(t_j - t_i)) int_{t_i}^{t_j} (sigma^{-1}(X_r) J_r sigma(X_i))^T dW_r
/// with J the tangent process started from the identity at t_i.
/// C_M is a user-declared moment constant.
std::shared_ptr<MarkovModel> euler_sde_model(int d, SdeCoefficients coef, InitialLaw init,
                                             double C_M);

}  // namespace mwls
