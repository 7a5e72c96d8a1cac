#include "momentfield/activation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "momentfield/errors.hpp"

namespace mf {

ActivationFunction ActivationFunction::logistic() {
    ActivationFunction f;
    f.kind_ = Kind::Logistic;
    return f;
}

ActivationFunction ActivationFunction::shifted_tanh(double i0) {
    ActivationFunction f;
    f.kind_ = Kind::ShiftedTanh;
    f.i0_ = i0;
    return f;
}

ActivationFunction ActivationFunction::tanh_homotopy(double i0, double p) {
    ActivationFunction f;
    f.kind_ = Kind::TanhHomotopy;
    f.i0_ = i0;
    f.p_ = p;
    return f;
}

ActivationFunction ActivationFunction::table(std::vector<double> x, std::vector<double> y) {
    if (x.size() != y.size() || x.size() < 4)
        throw ConfigError("activation table needs >= 4 (x, y) samples of equal length");
    for (std::size_t i = 1; i < x.size(); ++i)
        if (x[i] <= x[i - 1]) throw ConfigError("activation table x values must increase");
    ActivationFunction f;
    f.kind_ = Kind::Table;
    f.tx_ = std::move(x);
    f.ty_ = std::move(y);
    // natural cubic spline second derivatives (tridiagonal sweep)
    const std::size_t n = f.tx_.size();
    f.ty2_.assign(n, 0.0);
    std::vector<double> u(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double sig = (f.tx_[i] - f.tx_[i - 1]) / (f.tx_[i + 1] - f.tx_[i - 1]);
        const double p = sig * f.ty2_[i - 1] + 2.0;
        f.ty2_[i] = (sig - 1.0) / p;
        const double d = (f.ty_[i + 1] - f.ty_[i]) / (f.tx_[i + 1] - f.tx_[i]) -
                         (f.ty_[i] - f.ty_[i - 1]) / (f.tx_[i] - f.tx_[i - 1]);
        u[i] = (6.0 * d / (f.tx_[i + 1] - f.tx_[i - 1]) - sig * u[i - 1]) / p;
    }
    for (std::size_t k = n - 1; k-- > 1;) f.ty2_[k] = f.ty2_[k] * f.ty2_[k + 1] + u[k];
    return f;
}

namespace {

double logistic_deriv(int order, double x) {
    const double s = 1.0 / (1.0 + std::exp(-x));
    switch (order) {
        case 0: return s;
        case 1: return s * (1 - s);
        case 2: return s * (1 - s) * (1 - 2 * s);
        case 3: return s * (1 - s) * (1 - 6 * s + 6 * s * s);
        case 4: return s * (1 - s) * (1 - 14 * s + 36 * s * s - 24 * s * s * s);
        default: throw ConfigError("activation derivative order must be 0..4");
    }
}

double tanh_deriv(int order, double x) {
    const double t = std::tanh(x);
    const double u = 1 - t * t;
    switch (order) {
        case 0: return t;
        case 1: return u;
        case 2: return -2 * t * u;
        case 3: return -2 * u * (1 - 3 * t * t);
        case 4: return 8 * t * u * (2 - 3 * t * t);
        default: throw ConfigError("activation derivative order must be 0..4");
    }
}

}  // namespace

double ActivationFunction::table_value(double x) const {
    // clamped-to-linear extrapolation outside the knot range
    const auto& X = tx_;
    const auto& Y = ty_;
    std::size_t hi = std::upper_bound(X.begin(), X.end(), x) - X.begin();
    if (hi == 0) hi = 1;
    if (hi == X.size()) hi = X.size() - 1;
    const std::size_t lo = hi - 1;
    const double h = X[hi] - X[lo];
    const double a = (X[hi] - x) / h;
    const double b = (x - X[lo]) / h;
    return a * Y[lo] + b * Y[hi] +
           ((a * a * a - a) * ty2_[lo] + (b * b * b - b) * ty2_[hi]) * h * h / 6.0;
}

double ActivationFunction::table_fd_deriv(int order, double x) const {
    // 5-point central differences, h = max(1e-4, 1e-4 |x|)
    const double h = std::max(1e-4, 1e-4 * std::abs(x));
    const double fm2 = table_value(x - 2 * h), fm1 = table_value(x - h);
    const double f0 = table_value(x);
    const double fp1 = table_value(x + h), fp2 = table_value(x + 2 * h);
    switch (order) {
        case 1: return (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h);
        case 2: return (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h);
        case 3: return (-fm2 + 2 * fm1 - 2 * fp1 + fp2) / (2 * h * h * h);
        case 4: return (fm2 - 4 * fm1 + 6 * f0 - 4 * fp1 + fp2) / (h * h * h * h);
        default: throw ConfigError("activation derivative order must be 0..4");
    }
}

double ActivationFunction::value(double x) const { return deriv(0, x); }

double ActivationFunction::deriv(int order, double x) const {
    switch (kind_) {
        case Kind::Logistic:
            return logistic_deriv(order, x);
        case Kind::ShiftedTanh:
            if (order == 0) return std::tanh(x) - std::tanh(i0_);
            return tanh_deriv(order, x);
        case Kind::TanhHomotopy:
            if (order == 0) return std::tanh(x) - std::tanh(i0_) + p_ * (1.0 + std::tanh(i0_));
            return tanh_deriv(order, x);
        case Kind::Table:
            if (order == 0) return table_value(x);
            return table_fd_deriv(order, x);
    }
    throw ConfigError("unknown activation kind");
}

std::string ActivationFunction::kind_name() const {
    switch (kind_) {
        case Kind::Logistic: return "logistic";
        case Kind::ShiftedTanh: return "shifted-tanh";
        case Kind::TanhHomotopy: return "tanh-homotopy";
        case Kind::Table: return "table";
    }
    return "?";
}

ActivationFunction ActivationFunction::from_name(const std::string& name, double i0, double p,
                                                 const std::vector<double>& tx,
                                                 const std::vector<double>& ty) {
    if (name == "logistic") return logistic();
    if (name == "shifted-tanh") return shifted_tanh(i0);
    if (name == "tanh-homotopy") return tanh_homotopy(i0, p);
    if (name == "table") return table(tx, ty);
    throw ConfigError("unknown activation kind '" + name + "'");
}

}  // namespace mf
