// Right-hand sides of the Wilson-Cowan, infinite-size, BCC, rescaled Bressloff
// and Rodriguez-Tuckwell moment systems, plus the WC Jacobian A(nu).
#pragma once

#include <Eigen/Dense>

#include "momentfield/network.hpp"
#include "momentfield/state.hpp"

namespace mf {

// s_i = sum_j w_ij nu_j + I_i
Eigen::VectorXd total_current(const Eigen::VectorXd& nu, const NetworkConfig& net);

// Time derivative of the given variant's state.
MomentState rhs(ModelVariant v, const MomentState& s, const NetworkConfig& net);

// Flat-vector wrapper around rhs on the packed state layout.
Eigen::VectorXd rhs_flat(ModelVariant v, const Eigen::VectorXd& x, const NetworkConfig& net);

// A(nu) = -diag(alpha) + diag(f_i'(s_i)) * w  -- the WC Jacobian.
Eigen::MatrixXd wc_jacobian(const Eigen::VectorXd& nu, const NetworkConfig& net);

inline int state_dim(ModelVariant v, int M) {
    return M + (has_corr_block(v) ? packed_size(M) : 0);
}

}  // namespace mf
