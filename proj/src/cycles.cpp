#include "momentfield/cycles.hpp"

#include <cmath>

#include "momentfield/errors.hpp"
#include "momentfield/fd.hpp"
#include "momentfield/kronecker.hpp"

namespace mf {

namespace {

// Augmented flow: state (d) followed by Phi columns (d*d).
Eigen::VectorXd augmented_rhs(ModelVariant v, const NetworkConfig& net,
                              const Eigen::VectorXd& z, int d) {
    const Eigen::VectorXd x = z.head(d);
    const Eigen::MatrixXd Phi = Eigen::Map<const Eigen::MatrixXd>(z.data() + d, d, d);
    Eigen::MatrixXd A;
    if (v == ModelVariant::WilsonCowan) {
        A = wc_jacobian(x, net);
    } else {
        A = fd_jacobian_hi([&](const Eigen::VectorXd& q) { return rhs_flat(v, q, net); }, x);
    }
    Eigen::VectorXd out(z.size());
    out.head(d) = rhs_flat(v, x, net);
    Eigen::Map<Eigen::MatrixXd>(out.data() + d, d, d) = A * Phi;
    return out;
}

}  // namespace

Eigen::MatrixXd monodromy(ModelVariant v, const NetworkConfig& net, Eigen::VectorXd& x0,
                          double T, const IntegrationControls& c) {
    const int d = static_cast<int>(x0.size());
    Eigen::VectorXd z0(d + d * d);
    z0.head(d) = x0;
    Eigen::Map<Eigen::MatrixXd>(z0.data() + d, d, d) = Eigen::MatrixXd::Identity(d, d);
    Eigen::VectorXd z1;
    OdeStatus st = integrate_to(
        [&](double, const Eigen::VectorXd& z) { return augmented_rhs(v, net, z, d); }, 0.0, z0,
        T, z1, c);
    if (!st.ok) throw EvalError("monodromy integration failed: " + st.what);
    x0 = z1.head(d);
    return Eigen::Map<const Eigen::MatrixXd>(z1.data() + d, d, d);
}

Eigen::MatrixXd resolvent(ModelVariant v, const NetworkConfig& net,
                          const Eigen::VectorXd& x_on_cycle, double T, double closure_tol,
                          const IntegrationControls& c) {
    Eigen::VectorXd x = x_on_cycle;
    const Eigen::MatrixXd Phi = monodromy(v, net, x, T, c);
    const double miss = (x - x_on_cycle).lpNorm<Eigen::Infinity>();
    if (miss > closure_tol)
        throw EvalError("orbit does not close: ||x(T)-x(0)||_inf = " + std::to_string(miss));
    return Phi;
}

CycleStability classify_cycle(const Eigen::VectorXcd& mu, double band) {
    // drop the trivial multiplier
    Eigen::Index trivial = 0;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
        const double dd = std::abs(mu[i] - std::complex<double>(1.0, 0.0));
        if (dd < best) {
            best = dd;
            trivial = i;
        }
    }
    bool any_outside = false, any_neutral = false;
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
        if (i == trivial) continue;
        const double m = std::abs(mu[i]);
        if (std::abs(m - 1.0) <= band)
            any_neutral = true;
        else if (m > 1.0)
            any_outside = true;
    }
    if (any_outside) return CycleStability::Unstable;
    if (any_neutral) return CycleStability::Neutral;
    return CycleStability::Stable;
}

std::optional<LimitCycle> find_cycle(ModelVariant v, const NetworkConfig& net,
                                     const Eigen::VectorXd& guess_state, double guess_period,
                                     const IntegrationControls& c) {
    const int d = static_cast<int>(guess_state.size());
    Eigen::VectorXd a = rhs_flat(v, guess_state, net);
    if (a.lpNorm<Eigen::Infinity>() < 1e-9) return std::nullopt;  // fixed point, not a cycle
    a.normalize();
    const Eigen::VectorXd xa = guess_state;

    Eigen::VectorXd x = guess_state;
    double T = guess_period;
    double best_res = std::numeric_limits<double>::infinity();

    for (int it = 0; it < 25; ++it) {
        Eigen::VectorXd xT = x;
        Eigen::MatrixXd Phi;
        try {
            Phi = monodromy(v, net, xT, T, c);
        } catch (const EvalError&) {
            return std::nullopt;
        }
        Eigen::VectorXd r(d + 1);
        r.head(d) = xT - x;
        r[d] = a.dot(x - xa);
        const double res = r.head(d).lpNorm<Eigen::Infinity>();
        if (res < 1e-8 && std::abs(r[d]) < 1e-8) {
            LimitCycle cyc;
            cyc.variant = v;
            cyc.period = T;
            cyc.anchor = x;
            cyc.multipliers = Eigen::EigenSolver<Eigen::MatrixXd>(Phi).eigenvalues();
            cyc.stability = classify_cycle(cyc.multipliers);
            cyc.closure = res;
            return cyc;
        }
        if (!(T > 0) || res > 1e6) return std::nullopt;

        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(d + 1, d + 1);
        A.topLeftCorner(d, d) = Phi - Eigen::MatrixXd::Identity(d, d);
        A.col(d).head(d) = rhs_flat(v, xT, net);
        A.row(d).head(d) = a.transpose();
        // column-pivoted QR tolerates the near-singular neutral directions of
        // zero-correlation embeddings
        const Eigen::VectorXd du = A.colPivHouseholderQr().solve(-r);
        double lambda = 1.0;
        if (res > best_res * 2 && it > 0) lambda = 0.5;
        best_res = std::min(best_res, res);
        x += lambda * du.head(d);
        T += lambda * du[d];
    }
    return std::nullopt;
}

std::optional<LimitCycle> find_cycle_from_transient(ModelVariant v, const NetworkConfig& net,
                                                    const MomentState& init, double t_transient,
                                                    const IntegrationControls& c) {
    OdeStatus st;
    const int points = std::max(2000, static_cast<int>(t_transient * 40));
    Trajectory tr = integrate(v, init, net, t_transient, points, c, &st);
    if (!st.ok) return std::nullopt;
    // Poincare plane: last state's first coordinate, upward crossings over the tail
    const std::size_t tail = tr.states.size() * 3 / 4;
    const double level = tr.states.back()[0];
    std::vector<double> tcross;
    std::vector<Eigen::VectorXd> xcross;
    for (std::size_t k = std::max<std::size_t>(tail, 1); k < tr.states.size(); ++k) {
        const double aa = tr.states[k - 1][0] - level;
        const double bb = tr.states[k][0] - level;
        if (aa < 0 && bb >= 0 && aa != bb) {
            const double s = aa / (aa - bb);
            tcross.push_back(tr.times[k - 1] + s * (tr.times[k] - tr.times[k - 1]));
            xcross.push_back(tr.states[k - 1] + s * (tr.states[k] - tr.states[k - 1]));
        }
    }
    if (tcross.size() < 2) return std::nullopt;
    const double T0 = tcross.back() - tcross[tcross.size() - 2];
    return find_cycle(v, net, xcross.back(), T0, c);
}

LimitCycle embed_wc_cycle(const LimitCycle& wc, ModelVariant v, const NetworkConfig& net,
                          const IntegrationControls& c) {
    if (wc.variant != ModelVariant::WilsonCowan)
        throw ConfigError("embed_wc_cycle expects a WilsonCowan cycle");
    const int M = net.M;
    LimitCycle out;
    out.variant = v;
    out.period = wc.period;
    out.anchor = Eigen::VectorXd::Zero(state_dim(v, M));
    out.anchor.head(M) = wc.anchor;

    // WC-block monodromy (analytic A(nu)) drives both blocks: the corr block of
    // the embedded cycle evolves by A(+)A, whose resolvent is Phi x Phi.
    Eigen::VectorXd x = wc.anchor;
    NetworkConfig netwc = net;
    const Eigen::MatrixXd Phi = monodromy(ModelVariant::WilsonCowan, netwc, x, wc.period, c);
    const Eigen::VectorXcd mu = Eigen::EigenSolver<Eigen::MatrixXd>(Phi).eigenvalues();

    // packed corr block spectrum: pairwise products with i <= j
    Eigen::VectorXcd full(M + packed_size(M));
    full.head(M) = mu;
    int k = M;
    for (int i = 0; i < M; ++i)
        for (int j = i; j < M; ++j) full[k++] = mu[i] * mu[j];
    out.multipliers = full;
    out.stability = classify_cycle(full);
    out.closure = (x - wc.anchor).lpNorm<Eigen::Infinity>();
    return out;
}

}  // namespace mf
