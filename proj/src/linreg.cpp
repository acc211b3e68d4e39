#include "ricsim/linreg.hpp"

#include <cmath>
#include <cstddef>

namespace ricsim::linreg {

double LinearModel::predict_raw(const std::vector<double>& x) const {
    if (x.size() != weights.size()) throw std::invalid_argument("predict: feature length mismatch");
    double y = bias;
    for (std::size_t i = 0; i < x.size(); ++i) y += weights[i] * x[i];
    return y;
}

namespace {

// Gaussian elimination with partial pivoting, in place.
std::vector<double> solve(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
        if (std::fabs(a[pivot][col]) < 1e-12) throw SingularSystem();
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
        x[i] = s / a[i][i];
    }
    return x;
}

}  // namespace

LinearModel ridge_fit(const std::vector<std::vector<double>>& rows,
                      const std::vector<double>& labels, double lambda) {
    if (rows.size() < 2 || rows.size() != labels.size())
        throw std::invalid_argument("ridge_fit: need >= 2 rows with matching labels");
    if (lambda < 0.0) throw std::invalid_argument("ridge_fit: lambda must be >= 0");
    const std::size_t dim = rows.front().size();
    for (const auto& r : rows) {
        if (r.size() != dim) throw std::invalid_argument("ridge_fit: ragged rows");
        for (double v : r)
            if (!std::isfinite(v)) throw std::invalid_argument("ridge_fit: non-finite feature");
    }

    const std::size_t n = dim + 1;  // bias column appended
    std::vector<std::vector<double>> ata(n, std::vector<double>(n, 0.0));
    std::vector<double> aty(n, 0.0);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t i = 0; i < n; ++i) {
            const double xi = i < dim ? rows[r][i] : 1.0;
            aty[i] += xi * labels[r];
            for (std::size_t j = 0; j < n; ++j) {
                const double xj = j < dim ? rows[r][j] : 1.0;
                ata[i][j] += xi * xj;
            }
        }
    }
    for (std::size_t i = 0; i < dim; ++i) ata[i][i] += lambda;  // bias not regularised

    std::vector<double> w = solve(std::move(ata), std::move(aty));
    LinearModel model;
    model.weights.assign(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(dim));
    model.bias = w[dim];
    model.lambda = lambda;
    model.training_row_count = static_cast<int>(rows.size());
    return model;
}

}  // namespace ricsim::linreg
