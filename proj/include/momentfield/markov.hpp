// Exact Doob-Gillespie simulation of the population master equation and the
// Monte-Carlo ensemble statistics built from its sample paths.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "momentfield/network.hpp"
#include "momentfield/rng.hpp"

namespace mf {

struct MarkovState {
    Eigen::VectorXi n;  // active counts, 0 <= n_i <= N_i
    double t = 0.0;
};

struct TransitionRates {
    Eigen::VectorXd down;  // q_i = alpha_i n_i
    Eigen::VectorXd up;    // N_i f(s_i) (or (N_i - n_i) f(s_i)), clamped at n_i = N_i
    double total() const { return down.sum() + up.sum(); }
};

TransitionRates transition_rates(const MarkovState& s, const NetworkConfig& net);

struct GillespieEvent {
    double dt = 0.0;
    int population = 0;
    int sign = 0;       // +1 activation, -1 deactivation
    bool absorbing = false;
};

GillespieEvent gillespie_step(MarkovState& s, const NetworkConfig& net, RngStream& rng);

struct EnsembleStats {
    std::vector<double> times;
    Eigen::MatrixXd mean;          // times x M, empirical nu_i = <n_i>/N_i
    std::vector<Eigen::MatrixXd> second;  // per time, M x M: <n_i n_j>/(N_i N_j)
    long paths = 0;
    std::uint64_t seed = 0;

    Eigen::MatrixXd covariance(std::size_t k) const {  // C - nu nu^T at time k
        return second[k] - mean.row(k).transpose() * mean.row(k);
    }
    void write_csv(const std::string& path) const;
};

// Optional raw event log: little-endian (t: f64, population: u16, sign: i8).
struct EventLog {
    std::string path;
};

// Monte-Carlo ensemble over `paths` independent streams derived from
// (seed, path index); jump process sampled onto `grid` left-constantly.
// Bit-reproducible for fixed (seed, paths, grid) independent of workers.
EnsembleStats run_ensemble(const NetworkConfig& net, const Eigen::VectorXi& init, double t_end,
                           long paths, std::uint64_t seed, int grid_points = 201,
                           int workers = 0, const EventLog* log = nullptr);

}  // namespace mf
