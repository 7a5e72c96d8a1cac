// Limit-cycle continuation in one parameter by single shooting, with Floquet
// multipliers tracked along the branch and fold-of-cycles / Neimark-Sacker /
// period-doubling detection.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "momentfield/continuation.hpp"
#include "momentfield/cycles.hpp"

namespace mf {

struct CycleBranchPoint {
    double param = 0.0;
    double period = 0.0;
    Eigen::VectorXd anchor;
    Eigen::VectorXcd multipliers;
    double state_min = 0.0, state_max = 0.0;  // extrema of the first coordinate
};

struct CycleSweepOptions {
    double ds0 = 1e-2;
    double ds_max = 8e-2;
    double ds_min = 1e-8;
    int max_steps = 400;
    double newton_tol = 1e-9;
    double p_min = 0.0, p_max = 1.0;
    double period_cap = 0.0;  // homoclinic heuristic threshold; 0 = 50/mean(alpha)
    double strong_resonance_tol = 0.05;
    IntegrationControls ode{};
};

struct CycleSweepResult {
    std::vector<CycleBranchPoint> branch;
    std::vector<BifurcationPoint> detections;
};

CycleSweepResult sweep_cycles(ModelVariant v, const NetworkConfig& net, const Param& param,
                              const LimitCycle& seed, const CycleSweepOptions& opts);

}  // namespace mf
