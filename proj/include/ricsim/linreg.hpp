#ifndef RICSIM_LINREG_HPP
#define RICSIM_LINREG_HPP

#include <stdexcept>
#include <vector>

namespace ricsim::linreg {

struct LinearModel {
    std::vector<double> weights;  // one per feature
    double bias = 0.0;
    double lambda = 0.0;
    int training_row_count = 0;
    int model_version = 0;

    double predict_raw(const std::vector<double>& x) const;
};

struct SingularSystem : std::runtime_error {
    SingularSystem() : std::runtime_error("ridge_fit: singular normal equations (lambda = 0)") {}
};

// Exact direct solve of (X'X + lambda*D) w = X'y with an appended bias
// column; the bias is not regularised (D has a zero for it). Throws
// SingularSystem when the system is rank deficient and lambda is 0.
LinearModel ridge_fit(const std::vector<std::vector<double>>& rows,
                      const std::vector<double>& labels, double lambda);

}  // namespace ricsim::linreg

#endif
