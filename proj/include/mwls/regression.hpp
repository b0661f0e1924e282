#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <vector>

#include "mwls/cloud.hpp"

namespace mwls {

inline constexpr std::int64_t kOutside = -1;

/// Piecewise polynomials of total degree <= n on the hypercubes of edge
/// delta covering [-R, R]^d. Cells are half-open [a, a + delta) per axis,
/// except that x = R belongs to the last cell. On each cell the monomials are
/// centered at the cell midpoint and scaled by delta.
class LocalPolynomialBasis {
public:
    LocalPolynomialBasis(int d, int degree, double delta, double R);

    [[nodiscard]] int d() const { return d_; }
    [[nodiscard]] int degree() const { return degree_; }
    [[nodiscard]] double delta() const { return delta_; }
    [[nodiscard]] double R() const { return R_; }
    [[nodiscard]] int cells_per_axis() const { return cells_per_axis_; }
    [[nodiscard]] std::int64_t n_cells() const { return n_cells_; }
    /// Monomials per cell, C(n + d, d).
    [[nodiscard]] int n_local() const { return static_cast<int>(monomials_.size()); }
    /// Total dimension K.
    [[nodiscard]] std::int64_t K() const { return n_cells_ * n_local(); }
    /// Exponent multi-indices in graded order.
    [[nodiscard]] const std::vector<std::vector<int>>& monomials() const { return monomials_; }

    /// Cell of x, or kOutside when |x|_inf > R.
    [[nodiscard]] std::int64_t cell_index(const double* x) const;
    [[nodiscard]] Eigen::VectorXd cell_midpoint(std::int64_t cell) const;
    /// The n_local() monomials of x relative to the given cell.
    void local_features(std::int64_t cell, const double* x, double* out) const;
    /// Full length-K feature vector; zero outside the support.
    [[nodiscard]] Eigen::VectorXd evaluate(const double* x) const;

private:
    int d_;
    int degree_;
    double delta_;
    double R_;
    int cells_per_axis_;
    std::int64_t n_cells_;
    std::vector<std::vector<int>> monomials_;
};

/// Fitted piecewise polynomial with values in R^out_dim, clamped
/// componentwise to [-L, L].
class LocalPolynomialEstimator {
public:
    LocalPolynomialEstimator(LocalPolynomialBasis basis, Eigen::MatrixXd coef,
                             double L = std::numeric_limits<double>::infinity());

    [[nodiscard]] const LocalPolynomialBasis& basis() const { return basis_; }
    [[nodiscard]] int out_dim() const { return static_cast<int>(coef_.cols()); }
    /// K x out_dim, rows ordered by cell then monomial.
    [[nodiscard]] const Eigen::MatrixXd& coefficients() const { return coef_; }
    [[nodiscard]] double truncation() const { return L_; }

    void evaluate(const double* x, double* out) const;
    [[nodiscard]] Eigen::VectorXd operator()(const Eigen::VectorXd& x) const;

    /// Copy with clamp level L (replaces any previous level).
    [[nodiscard]] LocalPolynomialEstimator truncated(double L) const;

    /// CSV rows: cell, exponents (';'-joined), output, coefficient.
    void write_csv(std::ostream& out) const;

private:
    LocalPolynomialBasis basis_;
    Eigen::MatrixXd coef_;
    double L_;
};

/// Componentwise clamp to [-L, L].
inline double clamp_level(double v, double L) { return v > L ? L : (v < -L ? -L : v); }

/// Empirical least squares of the responses S (M x out_dim) against the
/// basis at the points X (M x d). Cells are solved independently with a
/// minimal-norm SVD solve; empty cells get zero coefficients.
LocalPolynomialEstimator ols_fit(const LocalPolynomialBasis& basis, const RowMatrix& X,
                                 const Eigen::MatrixXd& S);

LocalPolynomialEstimator truncate_estimator(const LocalPolynomialEstimator& e, double L);

}  // namespace mwls
