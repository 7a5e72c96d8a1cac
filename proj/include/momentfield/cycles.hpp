// Monodromy/resolvent integration, limit-cycle location by single shooting,
// and the zero-correlation embedding of WC cycles into the moment systems.
#pragma once

#include <Eigen/Dense>
#include <optional>

#include "momentfield/model.hpp"
#include "momentfield/ode.hpp"

namespace mf {

enum class CycleStability { Stable, Neutral, Unstable };

struct LimitCycle {
    ModelVariant variant = ModelVariant::WilsonCowan;
    double period = 0.0;
    Eigen::VectorXd anchor;        // flat state on the cycle
    Eigen::VectorXcd multipliers;  // Floquet multipliers of the full system
    CycleStability stability = CycleStability::Neutral;
    double closure = 0.0;  // ||x(T) - x(0)||_inf at the anchor
};

// Fundamental solution Phi(T) of dPhi = A(t) Phi, Phi(0) = I, with A(t) the
// Jacobian along the trajectory of `v` started at x0 (integrated together
// with the state in one augmented pass). Returns Phi(T); x0 is advanced to x(T).
Eigen::MatrixXd monodromy(ModelVariant v, const NetworkConfig& net, Eigen::VectorXd& x0,
                          double T, const IntegrationControls& c = {});

// Resolvent of a T-periodic orbit through x_on_cycle; throws EvalError with the
// mismatch norm when the orbit fails to close within `closure_tol`.
Eigen::MatrixXd resolvent(ModelVariant v, const NetworkConfig& net,
                          const Eigen::VectorXd& x_on_cycle, double T, double closure_tol = 1e-4,
                          const IntegrationControls& c = {});

// Classify from multipliers: the trivial multiplier (closest to 1) is removed;
// remaining ones within `band` of the unit circle flag the cycle neutral.
CycleStability classify_cycle(const Eigen::VectorXcd& multipliers, double band = 1e-3);

// Single-shooting Newton on the periodicity condition with an anchor-plane
// phase condition. Returns nullopt on divergence (25 iterations) or when the
// guess is a fixed point.
std::optional<LimitCycle> find_cycle(ModelVariant v, const NetworkConfig& net,
                                     const Eigen::VectorXd& guess_state, double guess_period,
                                     const IntegrationControls& c = {});

// Locate a cycle from a transient: integrate t_transient, detect returns to a
// Poincare plane through the end state, then polish with find_cycle.
std::optional<LimitCycle> find_cycle_from_transient(ModelVariant v, const NetworkConfig& net,
                                                    const MomentState& init, double t_transient,
                                                    const IntegrationControls& c = {});

// Embed a WC cycle as a zero-correlation cycle of a correlation-carrying
// variant and compute its full multiplier set from the WC monodromy blocks
// (valid for variants whose corr source vanishes at corr = 0, i.e. InfiniteSize).
LimitCycle embed_wc_cycle(const LimitCycle& wc, ModelVariant v, const NetworkConfig& net,
                          const IntegrationControls& c = {});

}  // namespace mf
