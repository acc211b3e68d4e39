#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "ricsim/linreg.hpp"
#include "ricsim/types.hpp"

using ricsim::Rng;
using ricsim::linreg::LinearModel;
using ricsim::linreg::ridge_fit;
using ricsim::linreg::SingularSystem;

namespace {

// Independent oracle: assemble the normal equations with Eigen and solve
// with full-pivot LU. The bias column is appended and not regularised,
// matching the production contract.
LinearModel eigen_fit(const std::vector<std::vector<double>>& rows,
                      const std::vector<double>& labels, double lambda) {
    const int n = static_cast<int>(rows.size());
    const int d = static_cast<int>(rows.front().size());
    Eigen::MatrixXd x(n, d + 1);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j) x(i, j) = rows[i][j];
        x(i, d) = 1.0;
        y(i) = labels[i];
    }
    Eigen::MatrixXd a = x.transpose() * x;
    for (int j = 0; j < d; ++j) a(j, j) += lambda;
    Eigen::VectorXd w = a.fullPivLu().solve(x.transpose() * y);

    LinearModel m;
    for (int j = 0; j < d; ++j) m.weights.push_back(w(j));
    m.bias = w(d);
    m.lambda = lambda;
    return m;
}

void check_close(const LinearModel& a, const LinearModel& b, double tol) {
    REQUIRE(a.weights.size() == b.weights.size());
    for (std::size_t j = 0; j < a.weights.size(); ++j)
        CHECK(a.weights[j] == doctest::Approx(b.weights[j]).epsilon(0).scale(1.0).epsilon(tol));
    CHECK(a.bias == doctest::Approx(b.bias).epsilon(tol));
}

}  // namespace

TEST_CASE("frozen ridge fixture") {
    const std::vector<std::vector<double>> rows = {{1, 2}, {2, 1}, {3, 3}};
    const std::vector<double> y = {3, 4, 7};
    const LinearModel m = ridge_fit(rows, y, 0.1);

    // values frozen from a hand solve of (X'X + 0.1*D) w = X'y
    CHECK(m.weights.size() == 2);
    CHECK(m.weights[0] == doctest::Approx(1.58357771).epsilon(1e-7));
    CHECK(m.weights[1] == doctest::Approx(0.6744868).epsilon(1e-7));
    CHECK(m.bias == doctest::Approx(0.15053763).epsilon(1e-7));
    CHECK(m.lambda == 0.1);
    CHECK(m.training_row_count == 3);

    check_close(m, eigen_fit(rows, y, 0.1), 1e-9);
}

TEST_CASE("agrees with the Eigen solver on random systems") {
    Rng rng(20240817);
    for (double lambda : {0.0, 1e-3, 1.0, 50.0}) {
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<std::vector<double>> rows;
            std::vector<double> labels;
            for (int i = 0; i < 24; ++i) {
                std::vector<double> r;
                for (int j = 0; j < 5; ++j) r.push_back(rng.uniform(-50.0, 50.0));
                rows.push_back(r);
                labels.push_back(rng.uniform(-100.0, 100.0));
            }
            const LinearModel got = ridge_fit(rows, labels, lambda);
            const LinearModel want = eigen_fit(rows, labels, lambda);
            for (std::size_t j = 0; j < got.weights.size(); ++j)
                CHECK(std::fabs(got.weights[j] - want.weights[j]) < 1e-9);
            CHECK(std::fabs(got.bias - want.bias) < 1e-9);
        }
    }
}

TEST_CASE("rank deficiency") {
    // second column is a copy of the first
    const std::vector<std::vector<double>> rows = {{1, 1}, {2, 2}, {3, 3}};
    const std::vector<double> y = {1, 2, 3};

    CHECK_THROWS_AS(ridge_fit(rows, y, 0.0), SingularSystem);
    CHECK_NOTHROW(ridge_fit(rows, y, 0.1));  // regularisation restores rank

    // fewer rows than columns
    CHECK_THROWS_AS(ridge_fit({{1.0, 2.0, 3.0}, {2.0, 4.0, 6.0}}, {1.0, 2.0}, 0.0), SingularSystem);
}

TEST_CASE("large lambda shrinks weights but not the bias") {
    Rng rng(7);
    std::vector<std::vector<double>> rows;
    std::vector<double> labels;
    double label_sum = 0.0;
    for (int i = 0; i < 30; ++i) {
        rows.push_back({rng.uniform(-5, 5), rng.uniform(-5, 5)});
        labels.push_back(rng.uniform(0, 10));
        label_sum += labels.back();
    }
    const LinearModel m = ridge_fit(rows, labels, 1e9);
    CHECK(std::fabs(m.weights[0]) < 1e-5);
    CHECK(std::fabs(m.weights[1]) < 1e-5);
    CHECK(m.bias == doctest::Approx(label_sum / 30.0).epsilon(1e-4));
}

TEST_CASE("predict_raw is the affine map") {
    LinearModel m;
    m.weights = {2.0, -1.0};
    m.bias = 0.5;
    CHECK(m.predict_raw({3.0, 4.0}) == doctest::Approx(2.5));
    CHECK(m.predict_raw({0.0, 0.0}) == doctest::Approx(0.5));
}
