// Hopf genericity analysis for the one-population BCC construction:
// omega_0, transversality, and the first Lyapunov coefficient computed both
// from the closed form and from generic finite-difference multilinear forms.
#pragma once

#include <Eigen/Dense>

#include "momentfield/model.hpp"

namespace mf {

enum class HopfCriticality { Supercritical, Subcritical, Degenerate };

struct HopfReport {
    double omega0_closed_form = 0.0;  // sqrt(-f'(I) f''(I) w^3 / N)
    double omega0_numeric = 0.0;      // |Im| of the computed eigenvalue pair
    double transversality = 0.0;      // d Re(lambda) / d alpha (analytic: -3/2)
    double l1_closed_form = 0.0;
    double l1_generic = 0.0;          // Kuznetsov invariant formula, FD B and C forms
    HopfCriticality criticality = HopfCriticality::Degenerate;
};

// Requires a one-population BCC config at the section-4.1.2 construction:
// f(I) = 0, f''(I) < 0 and alpha = w f'(I); throws EvalError otherwise.
HopfReport hopf_genericity(const NetworkConfig& net);

// Generic first Lyapunov coefficient of a planar vector field at a Hopf point
// (Kuznetsov's invariant formula; B and C by Richardson-extrapolated central
// differences of F around x0; <p, q> = 1 normalization).
double first_lyapunov_coefficient(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& F,
                                  const Eigen::VectorXd& x0, const Eigen::MatrixXd& J,
                                  double omega0);

}  // namespace mf
