// Finite-difference derivatives of vector fields.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>

namespace mf {

using VecFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// Central differences with step sqrt(eps) * max(1, |x_i|).
inline Eigen::MatrixXd fd_jacobian(const VecFn& f, const Eigen::VectorXd& x) {
    const double h0 = std::sqrt(std::numeric_limits<double>::epsilon());
    const Eigen::Index d = x.size();
    Eigen::VectorXd xp = x, xm = x;
    Eigen::MatrixXd J;
    for (Eigen::Index k = 0; k < d; ++k) {
        const double h = h0 * std::max(1.0, std::abs(x[k]));
        xp[k] = x[k] + h;
        xm[k] = x[k] - h;
        const Eigen::VectorXd col = (f(xp) - f(xm)) / (2 * h);
        if (J.size() == 0) J.resize(col.size(), d);
        J.col(k) = col;
        xp[k] = x[k];
        xm[k] = x[k];
    }
    return J;
}

// 5-point central differences, h = 1e-4 * max(1, |x_i|).  Roundoff-safe variant
// used inside extended defining systems (fold/Hopf continuation), where the
// Jacobian itself is differentiated once more.
inline Eigen::MatrixXd fd_jacobian_hi(const VecFn& f, const Eigen::VectorXd& x) {
    const Eigen::Index d = x.size();
    Eigen::VectorXd xs = x;
    Eigen::MatrixXd J;
    for (Eigen::Index k = 0; k < d; ++k) {
        const double h = 1e-4 * std::max(1.0, std::abs(x[k]));
        xs[k] = x[k] + 2 * h;
        const Eigen::VectorXd f2p = f(xs);
        xs[k] = x[k] + h;
        const Eigen::VectorXd f1p = f(xs);
        xs[k] = x[k] - h;
        const Eigen::VectorXd f1m = f(xs);
        xs[k] = x[k] - 2 * h;
        const Eigen::VectorXd f2m = f(xs);
        const Eigen::VectorXd col = (-f2p + 8 * f1p - 8 * f1m + f2m) / (12 * h);
        if (J.size() == 0) J.resize(col.size(), d);
        J.col(k) = col;
        xs[k] = x[k];
    }
    return J;
}

}  // namespace mf
