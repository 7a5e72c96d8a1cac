// Embedded Dormand-Prince 5(4) integrator with adaptive steps. Output grid
// points are hit exactly (steps are shortened to land on them), so sampled
// states carry no interpolation error.
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "momentfield/network.hpp"
#include "momentfield/state.hpp"

namespace mf {

struct IntegrationControls {
    double rtol = 1e-8;
    double atol = 1e-10;
    double max_step = std::numeric_limits<double>::infinity();
    double initial_step = 0.0;  // 0 = choose automatically
    long max_steps = 50'000'000;
};

struct OdeStatus {
    bool ok = true;
    std::string what;       // diagnostic on failure (step underflow, NaN)
    double t_last = 0.0;    // last successfully reached time
    Eigen::VectorXd y_last; // last valid state
    long n_steps = 0;
    long n_rejected = 0;
};

using OdeRhs = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;

// Integrate from (t0, y0); invoke sink(t, y) at t0 and at every grid time.
// Grid times must increase and start at >= t0.
OdeStatus integrate_grid(const OdeRhs& f, double t0, const Eigen::VectorXd& y0,
                         const std::vector<double>& grid,
                         const std::function<void(double, const Eigen::VectorXd&)>& sink,
                         const IntegrationControls& c = {});

// Single-shot endpoint integration.
OdeStatus integrate_to(const OdeRhs& f, double t0, const Eigen::VectorXd& y0, double t1,
                       Eigen::VectorXd& y1, const IntegrationControls& c = {});

inline std::vector<double> uniform_grid(double t0, double t1, int points) {
    std::vector<double> g(points);
    for (int i = 0; i < points; ++i) g[i] = t0 + (t1 - t0) * i / (points - 1);
    g.back() = t1;
    return g;
}

// Trajectory of a moment-system integration sampled on a grid.
struct Trajectory {
    ModelVariant variant = ModelVariant::WilsonCowan;
    int M = 0;
    std::vector<double> times;
    std::vector<Eigen::VectorXd> states;  // flat packed states
    // Poincare event markers: (time, interpolated flat state)
    std::vector<std::pair<double, Eigen::VectorXd>> events;

    std::string csv_header() const;
    void write_csv(const std::string& path) const;
};

// Integrate a model variant over [0, t_end] with `points` output samples.
Trajectory integrate(ModelVariant v, const MomentState& init, const NetworkConfig& net,
                     double t_end, int points = 1001, const IntegrationControls& c = {},
                     OdeStatus* status = nullptr);

// Section states where traj[coord] crosses `value` in the given direction
// (+1 upward, -1 downward, 0 both), linearly interpolated between samples.
std::vector<Eigen::VectorXd> poincare_map(const Trajectory& traj, int coord, double value,
                                          int direction);

}  // namespace mf
