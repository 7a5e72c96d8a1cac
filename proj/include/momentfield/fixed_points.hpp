// Fixed-point location (multi-start damped Newton), Jacobian spectra and
// stability classification including admissibility of solutions.
#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "momentfield/model.hpp"

namespace mf {

enum class FpClass { StableNodeFocus, Saddle, Unstable, CenterCandidate };

std::string fp_class_name(FpClass c);

struct FixedPoint {
    ModelVariant variant = ModelVariant::WilsonCowan;
    Eigen::VectorXd state;        // flat
    Eigen::VectorXcd eigenvalues; // of the flattened-system Jacobian
    FpClass cls = FpClass::CenterCandidate;
    bool admissible = false;
    double residual = 0.0;  // ||rhs||_inf

    std::string to_json() const;
};

struct FixedPointSearch {
    double nu_min = -0.5, nu_max = 1.5;
    double corr_box = 0.25;           // corr seeds in {-corr_box, 0, +corr_box}
    int nu_grid = 9;                  // per nu dimension
    int corr_grid = 3;                // per corr dimension (odd, includes 0)
    int max_newton_iters = 50;
    double tol = 1e-10;               // ||rhs||_inf convergence
    double dedup_tol = 1e-6;
};

// Damped Newton (Armijo backtracking) on rhs = 0 from one start.
bool newton_fixed_point(ModelVariant v, const NetworkConfig& net, Eigen::VectorXd& x,
                        int max_iters = 50, double tol = 1e-10);

// Finite-difference Jacobian of the flattened rhs at a state.
Eigen::MatrixXd jacobian(ModelVariant v, const Eigen::VectorXd& state, const NetworkConfig& net);

FpClass classify(const Eigen::VectorXcd& eigenvalues, double band = 1e-8);

bool admissible_state(ModelVariant v, const Eigen::VectorXd& state, const NetworkConfig& net);

// Multi-start search; results deduplicated and sorted by state coordinates.
std::vector<FixedPoint> find_fixed_points(ModelVariant v, const NetworkConfig& net,
                                          const FixedPointSearch& opts = {}, int workers = 0);

FixedPoint make_fixed_point(ModelVariant v, const NetworkConfig& net, const Eigen::VectorXd& x);

}  // namespace mf
