#include "momentfield/ode.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "momentfield/errors.hpp"
#include "momentfield/model.hpp"

namespace mf {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// error coefficients b - bhat
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

double error_norm(const Eigen::VectorXd& err, const Eigen::VectorXd& y0,
                  const Eigen::VectorXd& y1, double rtol, double atol) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
        const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double q = err[i] / sc;
        acc += q * q;
    }
    return std::sqrt(acc / static_cast<double>(err.size()));
}

}  // namespace

OdeStatus integrate_grid(const OdeRhs& f, double t0, const Eigen::VectorXd& y0,
                         const std::vector<double>& grid,
                         const std::function<void(double, const Eigen::VectorXd&)>& sink,
                         const IntegrationControls& c) {
    OdeStatus st;
    double t = t0;
    Eigen::VectorXd y = y0;
    st.t_last = t;
    st.y_last = y;

    if (sink) sink(t, y);
    std::size_t gi = 0;
    while (gi < grid.size() && grid[gi] <= t0 + 1e-15 * std::max(1.0, std::abs(t0))) {
        if (grid[gi] > t0 - 1e-15) { /* t0 itself already emitted */ }
        ++gi;
    }
    const double t_end = grid.empty() ? t0 : grid.back();
    if (t_end <= t0) return st;

    Eigen::VectorXd k1 = f(t, y);
    if (!k1.allFinite()) {
        st.ok = false;
        st.what = "rhs not finite at the initial state";
        return st;
    }

    double h = c.initial_step;
    if (h <= 0) {
        const double d0 = y.norm(), d1 = k1.norm();
        h = (d0 > 1e-10 && d1 > 1e-10) ? 0.01 * d0 / d1 : 1e-6;
        h = std::min({h, (t_end - t0) / 10.0, c.max_step});
    }

    Eigen::VectorXd k2, k3, k4, k5, k6, k7, ynew, err;
    const double hmin_scale = 1e-14;

    while (t < t_end) {
        if (st.n_steps++ > c.max_steps) {
            st.ok = false;
            st.what = "max step count exceeded";
            return st;
        }
        bool hit_grid = false;
        double target = t_end;
        if (gi < grid.size()) target = grid[gi];
        h = std::min(h, c.max_step);
        if (t + h >= target - 1e-14 * std::max(1.0, std::abs(target))) {
            h = target - t;
            hit_grid = true;
        }
        if (h < hmin_scale * std::max(1.0, std::abs(t))) {
            st.ok = false;
            st.what = "step size underflow at t = " + std::to_string(t);
            return st;
        }

        k2 = f(t + c2 * h, y + h * (a21 * k1));
        k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
        k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        k5 = f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        k6 = f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        k7 = f(t + h, ynew);  // FSAL
        err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        if (!ynew.allFinite()) {
            h *= 0.25;
            ++st.n_rejected;
            continue;
        }
        const double en = error_norm(err, y, ynew, c.rtol, c.atol);
        if (en <= 1.0) {
            t += h;
            y = ynew;
            k1 = k7;
            st.t_last = t;
            st.y_last = y;
            if (hit_grid && gi < grid.size() &&
                std::abs(t - grid[gi]) <= 1e-12 * std::max(1.0, std::abs(t))) {
                if (sink) sink(t, y);
                ++gi;
            }
            const double fac = std::clamp(0.9 * std::pow(std::max(en, 1e-10), -0.2), 0.2, 5.0);
            h = h * fac;
        } else {
            ++st.n_rejected;
            h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
        }
    }
    return st;
}

OdeStatus integrate_to(const OdeRhs& f, double t0, const Eigen::VectorXd& y0, double t1,
                       Eigen::VectorXd& y1, const IntegrationControls& c) {
    OdeStatus st = integrate_grid(f, t0, y0, {t1}, nullptr, c);
    y1 = st.y_last;
    return st;
}

std::string Trajectory::csv_header() const {
    std::string h = "t";
    for (int i = 1; i <= M; ++i) h += ",nu_" + std::to_string(i);
    if (has_corr_block(variant))
        for (int i = 1; i <= M; ++i)
            for (int j = i; j <= M; ++j)
                h += ",corr_" + std::to_string(i) + std::to_string(j);
    return h;
}

void Trajectory::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    out << csv_header() << "\n";
    out.precision(17);
    for (std::size_t k = 0; k < times.size(); ++k) {
        out << times[k];
        for (Eigen::Index i = 0; i < states[k].size(); ++i) out << "," << states[k][i];
        out << "\n";
    }
}

Trajectory integrate(ModelVariant v, const MomentState& init, const NetworkConfig& net,
                     double t_end, int points, const IntegrationControls& c, OdeStatus* status) {
    if (!(t_end > 0)) throw ConfigError("t_end must be > 0");
    Trajectory tr;
    tr.variant = v;
    tr.M = net.M;
    const auto f = [&](double, const Eigen::VectorXd& x) { return rhs_flat(v, x, net); };
    const auto grid = uniform_grid(0.0, t_end, points);
    OdeStatus st = integrate_grid(f, 0.0, init.flatten(), grid,
                                  [&](double t, const Eigen::VectorXd& y) {
                                      tr.times.push_back(t);
                                      tr.states.push_back(y);
                                  },
                                  c);
    if (status) *status = st;
    return tr;
}

std::vector<Eigen::VectorXd> poincare_map(const Trajectory& traj, int coord, double value,
                                          int direction) {
    std::vector<Eigen::VectorXd> out;
    for (std::size_t k = 1; k < traj.states.size(); ++k) {
        const double a = traj.states[k - 1][coord] - value;
        const double b = traj.states[k][coord] - value;
        if (a == b) continue;
        const bool up = a < 0 && b >= 0;
        const bool down = a > 0 && b <= 0;
        if ((direction > 0 && !up) || (direction < 0 && !down) || (direction == 0 && !up && !down))
            continue;
        const double s = a / (a - b);
        out.push_back(traj.states[k - 1] + s * (traj.states[k] - traj.states[k - 1]));
    }
    return out;
}

}  // namespace mf
