// Exact integration of the master equation for tiny networks; the brute-force
// oracle for the Gillespie sampler.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "momentfield/network.hpp"
#include "momentfield/ode.hpp"

namespace mf {

// Enumerated state space: mixed-radix index over n_i in [0, N_i].
struct MasterSpace {
    Eigen::VectorXi radix;  // N_i + 1 per population
    long size = 0;

    explicit MasterSpace(const NetworkConfig& net);
    long index(const Eigen::VectorXi& n) const;
    Eigen::VectorXi unindex(long k) const;
};

struct MasterResult {
    MasterSpace space;
    std::vector<double> times;
    std::vector<Eigen::VectorXd> dist;  // probability vectors on the grid

    Eigen::VectorXd mean_counts(std::size_t k) const;
    Eigen::MatrixXd second_moment_counts(std::size_t k) const;  // <n_i n_j>
};

// Integrates dP/dt = sum_i [a_i(n_i+1)P(n_i+) - a_i n_i P(n) + F_i(n_i-)P(n_i-)
// - F_i(n)P(n)] exactly on the enumerated space. Refuses spaces > 1e5 states.
MasterResult master_evolve(const NetworkConfig& net, const Eigen::VectorXd& p0, double t_end,
                           int grid_points = 101, const IntegrationControls& c = {});

// Point-mass initial distribution at counts n0.
Eigen::VectorXd master_delta(const NetworkConfig& net, const Eigen::VectorXi& n0);

}  // namespace mf
