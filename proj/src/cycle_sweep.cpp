#include "momentfield/cycle_sweep.hpp"

#include <cmath>

#include "momentfield/errors.hpp"

namespace mf {

namespace {

struct ShootSystem {
    ModelVariant v;
    const NetworkConfig* base;
    const Param* param;
    const IntegrationControls* ode;

    // u = (x0 [d], T, p)
    Eigen::VectorXd endpoint(const Eigen::VectorXd& u, Eigen::MatrixXd* Phi = nullptr) const {
        const int d = static_cast<int>(u.size()) - 2;
        NetworkConfig net = *base;
        param->apply(net, u[d + 1]);
        Eigen::VectorXd x = u.head(d);
        if (Phi) {
            *Phi = monodromy(v, net, x, u[d], *ode);
            return x;
        }
        Eigen::VectorXd x1;
        OdeStatus st = integrate_to(
            [&](double, const Eigen::VectorXd& q) { return rhs_flat(v, q, net); }, 0.0, x, u[d],
            x1, *ode);
        if (!st.ok) throw EvalError("cycle shooting integration failed: " + st.what);
        return x1;
    }

    Eigen::VectorXd field(const Eigen::VectorXd& x, double p) const {
        NetworkConfig net = *base;
        param->apply(net, p);
        return rhs_flat(v, x, net);
    }
};

}  // namespace

CycleSweepResult sweep_cycles(ModelVariant v, const NetworkConfig& net, const Param& param,
                              const LimitCycle& seed, const CycleSweepOptions& opts) {
    CycleSweepResult result;
    const int d = static_cast<int>(seed.anchor.size());
    if (seed.period <= 0 || seed.anchor.size() == 0)
        throw ConfigError("sweep_cycles: seed is not a cycle");
    ShootSystem sys{v, &net, &param, &opts.ode};

    const double period_cap =
        opts.period_cap > 0 ? opts.period_cap : 50.0 / net.alpha.mean();

    Eigen::VectorXd u(d + 2);
    u.head(d) = seed.anchor;
    u[d] = seed.period;
    u[d + 1] = param.get(net);

    Eigen::VectorXd phase_a = sys.field(seed.anchor, u[d + 1]).normalized();
    Eigen::VectorXd phase_x = seed.anchor;

    // residual: [x(T) - x0 ; a.(x0 - xa)] ; unknowns (x0, T, p) + arclength row
    const auto corrector = [&](Eigen::VectorXd& uk, const Eigen::VectorXd& t,
                               const Eigen::VectorXd& uref, double ds,
                               Eigen::MatrixXd* Phi_out) -> bool {
        for (int it = 0; it < 10; ++it) {
            Eigen::MatrixXd Phi;
            Eigen::VectorXd xT;
            try {
                xT = sys.endpoint(uk, &Phi);
            } catch (const EvalError&) {
                return false;
            }
            Eigen::VectorXd r(d + 2);
            r.head(d) = xT - uk.head(d);
            r[d] = phase_a.dot(uk.head(d) - phase_x);
            r[d + 1] = t.dot(uk - uref) - ds;
            if (r.head(d).lpNorm<Eigen::Infinity>() < opts.newton_tol &&
                std::abs(r[d]) < 1e-8) {
                if (Phi_out) *Phi_out = Phi;
                return true;
            }
            const Eigen::VectorXd fT = sys.field(xT, uk[d + 1]);
            const double hp = std::max(1e-7, 1e-4 * std::abs(uk[d + 1]));
            Eigen::VectorXd up = uk, um = uk;
            up[d + 1] += hp;
            um[d + 1] -= hp;
            const Eigen::VectorXd dxdp = (sys.endpoint(up) - sys.endpoint(um)) / (2 * hp);
            Eigen::MatrixXd A = Eigen::MatrixXd::Zero(d + 2, d + 2);
            A.topLeftCorner(d, d) = Phi - Eigen::MatrixXd::Identity(d, d);
            A.col(d).head(d) = fT;
            A.col(d + 1).head(d) = dxdp;
            A.row(d).head(d) = phase_a.transpose();
            A.row(d + 1) = t.transpose();
            const Eigen::VectorXd du = A.colPivHouseholderQr().solve(-r);
            if (!du.allFinite()) return false;
            uk += du;
        }
        return false;
    };

    const auto tangent_at = [&](const Eigen::VectorXd& uu, const Eigen::VectorXd* prev,
                                Eigen::MatrixXd* Phi_out) -> Eigen::VectorXd {
        Eigen::MatrixXd Phi;
        const Eigen::VectorXd xT = sys.endpoint(uu, &Phi);
        const Eigen::VectorXd fT = sys.field(xT, uu[d + 1]);
        const double hp = std::max(1e-7, 1e-4 * std::abs(uu[d + 1]));
        Eigen::VectorXd up = uu, um = uu;
        up[d + 1] += hp;
        um[d + 1] -= hp;
        const Eigen::VectorXd dxdp = (sys.endpoint(up) - sys.endpoint(um)) / (2 * hp);
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(d + 1, d + 2);
        A.topLeftCorner(d, d) = Phi - Eigen::MatrixXd::Identity(d, d);
        A.col(d).head(d) = fT;
        A.col(d + 1).head(d) = dxdp;
        A.row(d).head(d) = phase_a.transpose();
        Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
        lu.setThreshold(1e-9);
        Eigen::VectorXd t = lu.kernel().col(0);
        t.normalize();
        if (prev && t.dot(*prev) < 0) t = -t;
        if (Phi_out) *Phi_out = Phi;
        return t;
    };

    const auto record = [&](const Eigen::VectorXd& uu, const Eigen::MatrixXd& Phi) {
        CycleBranchPoint bp;
        bp.param = uu[d + 1];
        bp.period = uu[d];
        bp.anchor = uu.head(d);
        bp.multipliers = Eigen::EigenSolver<Eigen::MatrixXd>(Phi).eigenvalues();
        // cycle extrema of coordinate 0 via a dense pass
        NetworkConfig nc = net;
        param.apply(nc, bp.param);
        double mn = bp.anchor[0], mx = bp.anchor[0];
        integrate_grid([&](double, const Eigen::VectorXd& q) { return rhs_flat(v, q, nc); },
                       0.0, bp.anchor, uniform_grid(0.0, bp.period, 200),
                       [&](double, const Eigen::VectorXd& y) {
                           mn = std::min(mn, y[0]);
                           mx = std::max(mx, y[0]);
                       },
                       opts.ode);
        bp.state_min = mn;
        bp.state_max = mx;
        result.branch.push_back(std::move(bp));
    };

    // nontrivial multiplier diagnostics between consecutive points
    const auto nontrivial = [](const Eigen::VectorXcd& mu) {
        Eigen::Index triv = 0;
        double best = 1e300;
        for (Eigen::Index i = 0; i < mu.size(); ++i) {
            const double dd = std::abs(mu[i] - std::complex<double>(1, 0));
            if (dd < best) {
                best = dd;
                triv = i;
            }
        }
        std::vector<std::complex<double>> rest;
        for (Eigen::Index i = 0; i < mu.size(); ++i)
            if (i != triv) rest.push_back(mu[i]);
        return rest;
    };
    const auto complex_mod_max = [&](const Eigen::VectorXcd& mu, double* arg) {
        double mm = -1.0;
        for (const auto& m : nontrivial(mu))
            if (std::abs(m.imag()) > 1e-7 && std::abs(m) > mm) {
                mm = std::abs(m);
                if (arg) *arg = std::abs(std::arg(m));
            }
        return mm;
    };
    const auto real_min = [&](const Eigen::VectorXcd& mu) {
        double mn = 1e300;
        for (const auto& m : nontrivial(mu))
            if (std::abs(m.imag()) <= 1e-7) mn = std::min(mn, m.real());
        return mn;
    };

    Eigen::MatrixXd Phi0;
    Eigen::VectorXd t0 = tangent_at(u, nullptr, &Phi0);
    record(u, Phi0);

    for (const int dir : {+1, -1}) {
        Eigen::VectorXd uu = u;
        Eigen::VectorXd t = t0 * dir;
        double ds = opts.ds0;
        Eigen::VectorXcd mu_prev = result.branch.front().multipliers;
        double dp_prev = t[d + 1];
        bool homoclinic_flagged = false;

        for (int step = 0; step < opts.max_steps; ++step) {
            Eigen::VectorXd uk = uu + ds * t;
            Eigen::MatrixXd Phi;
            if (!corrector(uk, t, uu, ds, &Phi)) {
                ds *= 0.5;
                if (ds < opts.ds_min) break;
                continue;
            }
            const Eigen::VectorXcd mu = Eigen::EigenSolver<Eigen::MatrixXd>(Phi).eigenvalues();

            // fold of cycles: parameter direction reversal
            Eigen::VectorXd tn = tangent_at(uk, &t, nullptr);
            const double dp = tn[d + 1];
            if (dp_prev * dp < 0) {
                BifurcationPoint bp;
                bp.kind = BifKind::FoldOfCycles;
                // refine: secant on dp along the segment
                double sa = 0.0, sb = ds;
                Eigen::VectorXd ua = uu;
                for (int bi = 0; bi < 25 && (sb - sa) > 1e-10; ++bi) {
                    const double sm = 0.5 * (sa + sb);
                    Eigen::VectorXd um = uu + sm * t;
                    if (!corrector(um, t, uu, sm, nullptr)) break;
                    const Eigen::VectorXd tm = tangent_at(um, &t, nullptr);
                    if (tm[d + 1] * dp_prev > 0) {
                        sa = sm;
                        ua = um;
                    } else {
                        sb = sm;
                    }
                }
                bp.param = ua[d + 1];
                bp.state = ua.head(d);
                bp.residual = std::abs(dp);
                result.detections.push_back(bp);
            }

            // Neimark-Sacker: nontrivial complex pair crossing |mu| = 1
            double arg_prev = 0.0, arg_cur = 0.0;
            const double mprev = complex_mod_max(mu_prev, &arg_prev);
            const double mcur = complex_mod_max(mu, &arg_cur);
            if (mprev > 0 && mcur > 0 && (mprev - 1.0) * (mcur - 1.0) < 0) {
                BifurcationPoint bp;
                bp.kind = BifKind::NeimarkSacker;
                bp.param = 0.5 * (uu[d + 1] + uk[d + 1]);
                bp.state = uk.head(d);
                bp.residual = std::abs(mcur - 1.0);
                bp.omega = arg_cur;
                // strong resonance when arg close to 0, pi, 2pi/3, pi/2
                for (const double res : {0.0, M_PI, 2 * M_PI / 3, M_PI / 2})
                    if (std::abs(arg_cur - res) < opts.strong_resonance_tol)
                        bp.low_confidence = true;
                result.detections.push_back(bp);
            }

            // period doubling: nontrivial real multiplier crossing -1
            const double rprev = real_min(mu_prev), rcur = real_min(mu);
            if (rprev < 1e200 && rcur < 1e200 && (rprev + 1.0) * (rcur + 1.0) < 0) {
                BifurcationPoint bp;
                bp.kind = BifKind::PeriodDoubling;
                bp.param = 0.5 * (uu[d + 1] + uk[d + 1]);
                bp.state = uk.head(d);
                bp.residual = std::abs(rcur + 1.0);
                result.detections.push_back(bp);
            }

            // homoclinic heuristic: period blow-up
            if (!homoclinic_flagged && uk[d] > period_cap) {
                BifurcationPoint bp;
                bp.kind = BifKind::HomoclinicSuspect;
                bp.param = uk[d + 1];
                bp.state = uk.head(d);
                bp.residual = uk[d];
                result.detections.push_back(bp);
                homoclinic_flagged = true;
            }

            uu = uk;
            t = tn;
            dp_prev = dp;
            mu_prev = mu;
            // re-anchor the phase plane at the new point
            phase_x = uu.head(d);
            phase_a = sys.field(phase_x, uu[d + 1]).normalized();
            record(uu, Phi);
            ds = std::min(ds * 1.25, opts.ds_max);

            if (uu[d + 1] < opts.p_min || uu[d + 1] > opts.p_max || uu[d] > 4 * period_cap ||
                uu[d] < 1e-3)
                break;
        }
        // reset phase anchor for the second direction
        phase_x = seed.anchor;
        phase_a = sys.field(seed.anchor, u[d + 1]).normalized();
    }

    std::sort(result.branch.begin(), result.branch.end(),
              [](const CycleBranchPoint& a, const CycleBranchPoint& b) {
                  return a.param < b.param;
              });
    return result;
}

}  // namespace mf
