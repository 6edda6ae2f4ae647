#include "ferroq/levmar.hpp"

#include <cmath>
#include <limits>

namespace ferroq::levmar {

namespace {

double cost_of(const Eigen::VectorXd& r) { return 0.5 * r.squaredNorm(); }

void jacobian(const ResidualFn& fn, const Eigen::VectorXd& x, double h,
              Eigen::MatrixXd& jac, Eigen::VectorXd& rp, Eigen::VectorXd& rm) {
    Eigen::VectorXd xp = x;
    for (int j = 0; j < x.size(); ++j) {
        const double step = h * std::max(1.0, std::abs(x[j]));
        xp[j] = x[j] + step;
        fn(xp, rp);
        xp[j] = x[j] - step;
        fn(xp, rm);
        xp[j] = x[j];
        jac.col(j) = (rp - rm) / (2.0 * step);
    }
}

} // namespace

Result minimize(const ResidualFn& fn, Eigen::VectorXd x0, int n_residuals,
                const Options& opts) {
    const int n = static_cast<int>(x0.size());
    Eigen::VectorXd r(n_residuals), rp(n_residuals), rm(n_residuals);
    Eigen::MatrixXd jac(n_residuals, n);

    fn(x0, r);
    double cost = cost_of(r);
    double lambda = opts.lambda0;

    Result res;
    res.x = x0;
    res.cost = cost;

    int iter = 0;
    for (; iter < opts.max_iter; ++iter) {
        jacobian(fn, res.x, opts.fd_step, jac, rp, rm);
        Eigen::MatrixXd a = jac.transpose() * jac;
        Eigen::VectorXd g = jac.transpose() * r;

        // Marquardt scaling with a floor so insensitive parameters do not
        // produce a singular system.
        Eigen::VectorXd d = a.diagonal();
        const double dmax = d.maxCoeff();
        if (!(dmax > 0.0) || !std::isfinite(dmax)) break;
        for (int j = 0; j < n; ++j) d[j] = std::max(d[j], 1e-12 * dmax);

        bool accepted = false;
        for (int inner = 0; inner < opts.max_inner; ++inner) {
            Eigen::MatrixXd a_damped = a;
            a_damped.diagonal() += lambda * d;
            Eigen::VectorXd delta = a_damped.ldlt().solve(-g);
            if (!delta.allFinite()) {
                lambda *= opts.lambda_up;
                continue;
            }
            double proposed_step = 0.0;
            for (int j = 0; j < n; ++j)
                proposed_step = std::max(proposed_step,
                                         std::abs(delta[j]) / std::max(1.0, std::abs(res.x[j])));
            if (proposed_step < opts.step_tol) {
                // already at (or numerically indistinguishable from) a minimum
                res.converged = true;
                accepted = true;
                break;
            }
            Eigen::VectorXd x_try = res.x + delta;
            fn(x_try, rp);
            const double cost_try = cost_of(rp);
            if (std::isfinite(cost_try) && cost_try < cost) {
                double rel_step = 0.0;
                for (int j = 0; j < n; ++j)
                    rel_step = std::max(rel_step,
                                        std::abs(delta[j]) / std::max(1.0, std::abs(x_try[j])));
                const double rel_drop = (cost - cost_try) / std::max(cost, 1e-300);
                res.x = x_try;
                r = rp;
                cost = cost_try;
                lambda = std::max(lambda / opts.lambda_down, 1e-14);
                accepted = true;
                if (rel_step < opts.step_tol || rel_drop < opts.cost_tol)
                    res.converged = true;
                break;
            }
            lambda *= opts.lambda_up;
        }
        if (!accepted) break; // damping exhausted
        if (res.converged) { ++iter; break; }
    }

    res.cost = cost;
    res.n_iter = iter;

    // covariance = sigma^2 (J^T J)^-1, sigma^2 from the residual at the fit
    jacobian(fn, res.x, opts.fd_step, jac, rp, rm);
    Eigen::MatrixXd a = jac.transpose() * jac;
    const int dof = std::max(1, n_residuals - n);
    const double sigma2 = 2.0 * cost / dof;
    Eigen::MatrixXd a_inv = a.completeOrthogonalDecomposition().pseudoInverse();
    res.covariance = sigma2 * a_inv;
    return res;
}

} // namespace ferroq::levmar
