#pragma once

#include <Eigen/Dense>
#include <functional>

namespace ferroq::levmar {

struct Options {
    int max_iter = 500;
    double step_tol = 1e-10;   // converged when max relative step falls below
    double cost_tol = 1e-12;   // ... or relative cost change does
    double lambda0 = 1e-3;
    double lambda_down = 3.0;
    double lambda_up = 4.0;
    int max_inner = 50;        // damping retries per outer iteration
    double fd_step = 1e-6;     // central-difference step on the parameters
};

struct Result {
    Eigen::VectorXd x;
    double cost = 0.0;            // 0.5 * ||r||^2
    int n_iter = 0;
    bool converged = false;
    Eigen::MatrixXd covariance;   // sigma^2 (J^T J)^-1 at the solution
};

/// fn(x, r): fill the residual vector r (size fixed by n_residuals).
using ResidualFn = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;

/// Damped least squares with Marquardt diagonal scaling and a central-
/// difference Jacobian. Accepts only cost-decreasing steps, so the residual
/// decreases monotonically over accepted iterations.
Result minimize(const ResidualFn& fn, Eigen::VectorXd x0, int n_residuals,
                const Options& opts = {});

} // namespace ferroq::levmar
