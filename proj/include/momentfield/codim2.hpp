// Two-parameter continuation of fold and Hopf points in the (param, n) plane,
// with cusp and Bogdanov-Takens-candidate flagging.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "momentfield/continuation.hpp"

namespace mf {

struct Codim2Options {
    double ds0 = 1e-2;
    double ds_max = 4e-2;
    double ds_min = 1e-10;
    int max_steps = 4000;
    double newton_tol = 3e-8;
    double n_min = 1e-5, n_max = 0.05;  // n box; exits are truncations
    double p_pad = 20.0;                // |param| bound
    double state_box = 80.0;
    double bt_omega_threshold = 5e-2;   // flag BT candidate when omega drops below
};

struct Codim2Curve {
    BifKind kind = BifKind::SaddleNode;    // the continued defining system
    std::vector<std::array<double, 2>> points;  // (param, n)
    std::vector<Eigen::VectorXd> states;
    std::vector<bool> admissible;
    std::vector<BifurcationPoint> events;  // cusp / BT candidates on the curve
    bool hit_n_floor = false;              // reached n_min (n = 0 is singular)
};

// Continue the fold defining system (rhs = 0, J v = 0, ||v||^2 = 1) from a
// saddle-node detection through the (param, n) plane, both directions.
Codim2Curve continue_fold_codim2(ModelVariant v, const NetworkConfig& net, const Param& param,
                                 const BifurcationPoint& fold, const Codim2Options& opts = {});

// Continue the Hopf defining system (rhs = 0, J q = i w q, normalization) in
// (param_a, param_b); param_b defaults to n but may be any Param.
Codim2Curve continue_hopf_codim2(ModelVariant v, const NetworkConfig& net, const Param& pa,
                                 const Param& pb, const BifurcationPoint& hopf,
                                 const Codim2Options& opts = {});

}  // namespace mf
