#include "mwls/regression.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <ostream>
#include <string>

#include "mwls/error.hpp"
#include "mwls/format.hpp"
#include "mwls/parallel.hpp"

namespace mwls {

namespace {

constexpr std::int64_t kMaxCells = 50'000'000;

void gen_monomials(int d, int degree, std::vector<std::vector<int>>& out) {
    std::vector<int> cur(static_cast<std::size_t>(d), 0);
    for (int total = 0; total <= degree; ++total) {
        // all multi-indices with |alpha| == total, first axis varying slowest
        std::function<void(int, int)> rec = [&](int axis, int left) {
            if (axis == d - 1) {
                cur[static_cast<std::size_t>(axis)] = left;
                out.push_back(cur);
                return;
            }
            for (int a = left; a >= 0; --a) {
                cur[static_cast<std::size_t>(axis)] = a;
                rec(axis + 1, left - a);
            }
        };
        rec(0, total);
    }
}

}  // namespace

LocalPolynomialBasis::LocalPolynomialBasis(int d, int degree, double delta, double R)
    : d_(d), degree_(degree), delta_(delta), R_(R) {
    if (d < 1) throw ValidationError("basis dimension must be positive");
    if (degree < 0) throw ValidationError("basis degree must be nonnegative");
    if (!(delta > 0.0) || !std::isfinite(delta)) throw ValidationError("cell edge delta must be positive");
    if (!(R > 0.0) || !std::isfinite(R)) throw ValidationError("support half-width R must be positive");
    const double per_axis = std::ceil(2.0 * R / delta - 1e-12);
    if (per_axis > static_cast<double>(kMaxCells)) throw ValidationError("too many cells in basis");
    cells_per_axis_ = std::max(1, static_cast<int>(per_axis));
    n_cells_ = 1;
    for (int a = 0; a < d; ++a) {
        n_cells_ *= cells_per_axis_;
        if (n_cells_ > kMaxCells) throw ValidationError("too many cells in basis");
    }
    gen_monomials(d, degree, monomials_);
}

std::int64_t LocalPolynomialBasis::cell_index(const double* x) const {
    std::int64_t idx = 0;
    std::int64_t stride = 1;
    for (int a = 0; a < d_; ++a) {
        const double v = x[a];
        if (!(v >= -R_ && v <= R_)) return kOutside;
        auto k = static_cast<std::int64_t>(std::floor((v + R_) / delta_));
        k = std::clamp<std::int64_t>(k, 0, cells_per_axis_ - 1);
        idx += k * stride;
        stride *= cells_per_axis_;
    }
    return idx;
}

Eigen::VectorXd LocalPolynomialBasis::cell_midpoint(std::int64_t cell) const {
    Eigen::VectorXd mid(d_);
    for (int a = 0; a < d_; ++a) {
        const std::int64_t k = cell % cells_per_axis_;
        cell /= cells_per_axis_;
        mid[a] = -R_ + (static_cast<double>(k) + 0.5) * delta_;
    }
    return mid;
}

void LocalPolynomialBasis::local_features(std::int64_t cell, const double* x, double* out) const {
    double u[16];
    std::vector<double> heap;
    double* z = u;
    if (d_ > 16) {
        heap.resize(static_cast<std::size_t>(d_));
        z = heap.data();
    }
    for (int a = 0; a < d_; ++a) {
        const std::int64_t k = cell % cells_per_axis_;
        cell /= cells_per_axis_;
        z[a] = (x[a] - (-R_ + (static_cast<double>(k) + 0.5) * delta_)) / delta_;
    }
    for (std::size_t j = 0; j < monomials_.size(); ++j) {
        double v = 1.0;
        for (int a = 0; a < d_; ++a)
            for (int p = 0; p < monomials_[j][static_cast<std::size_t>(a)]; ++p) v *= z[a];
        out[j] = v;
    }
}

Eigen::VectorXd LocalPolynomialBasis::evaluate(const double* x) const {
    Eigen::VectorXd f = Eigen::VectorXd::Zero(K());
    const std::int64_t c = cell_index(x);
    if (c != kOutside) local_features(c, x, f.data() + c * n_local());
    return f;
}

LocalPolynomialEstimator::LocalPolynomialEstimator(LocalPolynomialBasis basis, Eigen::MatrixXd coef,
                                                   double L)
    : basis_(std::move(basis)), coef_(std::move(coef)), L_(L) {
    if (coef_.rows() != basis_.K()) throw ValidationError("coefficient count does not match basis");
    if (!(L_ >= 0.0)) throw ValidationError("truncation level must be nonnegative");
}

void LocalPolynomialEstimator::evaluate(const double* x, double* out) const {
    const int od = out_dim();
    const std::int64_t c = basis_.cell_index(x);
    if (c == kOutside) {
        for (int l = 0; l < od; ++l) out[l] = 0.0;
        return;
    }
    const int n = basis_.n_local();
    double buf[64];
    std::vector<double> heap;
    double* f = buf;
    if (n > 64) {
        heap.resize(static_cast<std::size_t>(n));
        f = heap.data();
    }
    basis_.local_features(c, x, f);
    const std::int64_t r0 = c * n;
    for (int l = 0; l < od; ++l) {
        double v = 0.0;
        for (int j = 0; j < n; ++j) v += coef_(r0 + j, l) * f[j];
        out[l] = clamp_level(v, L_);
    }
}

Eigen::VectorXd LocalPolynomialEstimator::operator()(const Eigen::VectorXd& x) const {
    if (x.size() != basis_.d()) throw ValidationError("evaluation point has wrong dimension");
    Eigen::VectorXd out(out_dim());
    evaluate(x.data(), out.data());
    return out;
}

LocalPolynomialEstimator LocalPolynomialEstimator::truncated(double L) const {
    return LocalPolynomialEstimator(basis_, coef_, L);
}

void LocalPolynomialEstimator::write_csv(std::ostream& out) const {
    out << "cell,exponents,output,coefficient\n";
    const int n = basis_.n_local();
    for (std::int64_t c = 0; c < basis_.n_cells(); ++c) {
        for (int j = 0; j < n; ++j) {
            std::string ex;
            for (std::size_t a = 0; a < basis_.monomials()[static_cast<std::size_t>(j)].size(); ++a) {
                if (a) ex += ';';
                ex += std::to_string(basis_.monomials()[static_cast<std::size_t>(j)][a]);
            }
            for (int l = 0; l < out_dim(); ++l)
                out << c << ',' << ex << ',' << l << ',' << fmt_double(coef_(c * n + j, l)) << '\n';
        }
    }
}

LocalPolynomialEstimator ols_fit(const LocalPolynomialBasis& basis, const RowMatrix& X,
                                 const Eigen::MatrixXd& S) {
    const std::int64_t M = X.rows();
    if (M < 1) throw ValidationError("least squares needs at least one row");
    if (X.cols() != basis.d()) throw ValidationError("regression points have wrong dimension");
    if (S.rows() != M) throw ValidationError("response count does not match point count");
    for (std::int64_t m = 0; m < M; ++m)
        for (Eigen::Index l = 0; l < S.cols(); ++l)
            if (!std::isfinite(S(m, l)))
                throw NumericalError("non-finite regression response at row " + std::to_string(m));

    std::vector<std::int64_t> cell(static_cast<std::size_t>(M));
    for (std::int64_t m = 0; m < M; ++m) cell[static_cast<std::size_t>(m)] = basis.cell_index(X.row(m).data());
    std::vector<std::int64_t> order(static_cast<std::size_t>(M));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::int64_t a, std::int64_t b) {
        return cell[static_cast<std::size_t>(a)] < cell[static_cast<std::size_t>(b)];
    });

    // group boundaries of the populated cells
    std::vector<std::size_t> starts;
    for (std::size_t p = 0; p < order.size(); ++p) {
        const std::int64_t c = cell[static_cast<std::size_t>(order[p])];
        if (c == kOutside) continue;
        if (starts.empty() || c != cell[static_cast<std::size_t>(order[starts.back()])]) starts.push_back(p);
    }
    std::vector<std::size_t> ends(starts.size());
    for (std::size_t g = 0; g < starts.size(); ++g) {
        std::size_t e = starts[g];
        const std::int64_t c = cell[static_cast<std::size_t>(order[e])];
        while (e < order.size() && cell[static_cast<std::size_t>(order[e])] == c) ++e;
        ends[g] = e;
    }

    const int n = basis.n_local();
    const auto od = S.cols();
    Eigen::MatrixXd coef = Eigen::MatrixXd::Zero(basis.K(), od);
    parallel_for(static_cast<std::int64_t>(starts.size()), [&](std::int64_t g) {
        const std::size_t b = starts[static_cast<std::size_t>(g)];
        const std::size_t e = ends[static_cast<std::size_t>(g)];
        const auto rows = static_cast<Eigen::Index>(e - b);
        const std::int64_t c = cell[static_cast<std::size_t>(order[b])];
        Eigen::MatrixXd A(rows, n);
        Eigen::MatrixXd B(rows, od);
        std::vector<double> f(static_cast<std::size_t>(n));
        for (Eigen::Index r = 0; r < rows; ++r) {
            const std::int64_t m = order[b + static_cast<std::size_t>(r)];
            basis.local_features(c, X.row(m).data(), f.data());
            for (int j = 0; j < n; ++j) A(r, j) = f[static_cast<std::size_t>(j)];
            B.row(r) = S.row(m);
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
        svd.setThreshold(std::numeric_limits<double>::epsilon() *
                         static_cast<double>(std::max<Eigen::Index>(rows, n)));
        coef.block(c * n, 0, n, od) = svd.solve(B);
    });
    return LocalPolynomialEstimator(basis, std::move(coef));
}

LocalPolynomialEstimator truncate_estimator(const LocalPolynomialEstimator& e, double L) {
    return e.truncated(L);
}

}  // namespace mwls
