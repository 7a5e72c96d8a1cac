#include "momentfield/codim2.hpp"

#include <cmath>

#include "momentfield/errors.hpp"
#include "momentfield/fd.hpp"
#include "momentfield/fixed_points.hpp"

namespace mf {

namespace {

// generic arclength walk over a residual R(u) with one more unknown than
// equations; Jacobian by central differences of R
struct Walker {
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> R;
    double tol = 3e-8;

    Eigen::MatrixXd jac(const Eigen::VectorXd& u) const {
        const Eigen::Index m = u.size();
        Eigen::VectorXd us = u;
        Eigen::MatrixXd A;
        for (Eigen::Index k = 0; k < m; ++k) {
            const double h = 1e-6 * std::max(1.0, std::abs(u[k]));
            us[k] = u[k] + h;
            const Eigen::VectorXd rp = R(us);
            us[k] = u[k] - h;
            const Eigen::VectorXd rm = R(us);
            us[k] = u[k];
            if (A.size() == 0) A.resize(rp.size(), m);
            A.col(k) = (rp - rm) / (2 * h);
        }
        return A;
    }

    Eigen::VectorXd tangent(const Eigen::VectorXd& u, const Eigen::VectorXd* prev) const {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(jac(u));
        lu.setThreshold(1e-9);
        const Eigen::MatrixXd K = lu.kernel();
        Eigen::VectorXd t = K.col(0);
        t.normalize();
        if (prev && t.dot(*prev) < 0) t = -t;
        return t;
    }

    bool correct(Eigen::VectorXd& u, const Eigen::VectorXd& t, const Eigen::VectorXd& uref,
                 double ds, int iters = 14) const {
        const Eigen::Index m = u.size();
        for (int it = 0; it < iters; ++it) {
            Eigen::VectorXd r0 = R(u);
            const double extra = t.dot(u - uref) - ds;
            if (std::max(r0.lpNorm<Eigen::Infinity>(), std::abs(extra)) < tol) return true;
            if (!r0.allFinite()) return false;
            Eigen::MatrixXd A(m, m);
            A.topRows(m - 1) = jac(u);
            A.row(m - 1) = t.transpose();
            Eigen::VectorXd r(m);
            r.head(m - 1) = r0;
            r[m - 1] = extra;
            const Eigen::VectorXd du = A.partialPivLu().solve(-r);
            if (!du.allFinite()) return false;
            u += du;
        }
        return false;
    }
};

}  // namespace

Codim2Curve continue_fold_codim2(ModelVariant v, const NetworkConfig& net, const Param& param,
                                 const BifurcationPoint& fold, const Codim2Options& opts) {
    const int d = static_cast<int>(fold.state.size());
    const Param pn = Param::size_n();

    // u = [x (d), v (d), param, n]; R = [rhs; J v; ||v||^2 - 1]
    const auto R = [&, d](const Eigen::VectorXd& u) {
        NetworkConfig nc = net;
        param.apply(nc, u[2 * d]);
        pn.apply(nc, u[2 * d + 1]);
        const Eigen::VectorXd x = u.head(d);
        const Eigen::VectorXd vv = u.segment(d, d);
        const Eigen::MatrixXd J = fd_jacobian_hi(
            [&](const Eigen::VectorXd& q) { return rhs_flat(v, q, nc); }, x);
        Eigen::VectorXd r(2 * d + 1);
        r.head(d) = rhs_flat(v, x, nc);
        r.segment(d, d) = J * vv;
        r[2 * d] = vv.squaredNorm() - 1.0;
        return r;
    };
    Walker walker{R, opts.newton_tol};

    // initial point: null eigenvector of J at the detection
    NetworkConfig nc0 = net;
    param.apply(nc0, fold.param);
    const double n0 = fold.param2 > 0 ? fold.param2 : pn.get(net);
    pn.apply(nc0, n0);
    const Eigen::MatrixXd J0 = fd_jacobian_hi(
        [&](const Eigen::VectorXd& q) { return rhs_flat(v, q, nc0); }, fold.state);
    Eigen::EigenSolver<Eigen::MatrixXd> es(J0);
    Eigen::Index kmin = 0;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < d; ++k) {
        const double score = std::abs(es.eigenvalues()[k].real()) +
                             1e3 * std::abs(es.eigenvalues()[k].imag());
        if (score < best) {
            best = score;
            kmin = k;
        }
    }
    Eigen::VectorXd u(2 * d + 2);
    u.head(d) = fold.state;
    u.segment(d, d) = es.eigenvectors().col(kmin).real().normalized();
    u[2 * d] = fold.param;
    u[2 * d + 1] = n0;

    // square refine at fixed n
    {
        Walker fixed{[&, d](const Eigen::VectorXd& z) {
                         Eigen::VectorXd full(2 * d + 2);
                         full << z, u[2 * d + 1];
                         return R(full);
                     },
                     opts.newton_tol};
        Eigen::VectorXd z = u.head(2 * d + 1);
        Eigen::VectorXd t0 = Eigen::VectorXd::Zero(2 * d + 1);
        // plain Newton: use correct() with zero tangent trick is wrong; do manual
        for (int it = 0; it < 20; ++it) {
            Eigen::VectorXd full(2 * d + 2);
            full << z, u[2 * d + 1];
            Eigen::VectorXd r = R(full);
            if (r.lpNorm<Eigen::Infinity>() < opts.newton_tol) break;
            Eigen::MatrixXd A = walker.jac(full).leftCols(2 * d + 1);
            z += A.partialPivLu().solve(-r);
        }
        u.head(2 * d + 1) = z;
    }

    Codim2Curve curve;
    curve.kind = BifKind::SaddleNode;

    struct Leg {
        std::vector<std::array<double, 2>> points;
        std::vector<Eigen::VectorXd> states;
        std::vector<bool> admissible;
    };
    const auto push_leg = [&](Leg& leg, const Eigen::VectorXd& uu) {
        leg.points.push_back({uu[2 * d], uu[2 * d + 1]});
        leg.states.push_back(uu.head(d));
        NetworkConfig nc = net;
        param.apply(nc, uu[2 * d]);
        pn.apply(nc, uu[2 * d + 1]);
        leg.admissible.push_back(admissible_state(v, uu.head(d), nc));
    };

    Leg legs[2];
    for (const int dir : {+1, -1}) {
        Leg& leg = legs[dir > 0 ? 0 : 1];
        Eigen::VectorXd uu = u;
        Eigen::VectorXd t = walker.tangent(uu, nullptr);
        if (t[2 * d + 1] * dir < 0) t = -t;
        double ds = opts.ds0;
        double prev_dn = t[2 * d + 1];
        for (int step = 0; step < opts.max_steps; ++step) {
            Eigen::VectorXd uk = uu + ds * t;
            if (!walker.correct(uk, t, uu, ds)) {
                ds *= 0.5;
                if (ds < opts.ds_min) break;
                continue;
            }
            const Eigen::VectorXd tn = walker.tangent(uk, &t);
            // cusp: the curve's n-direction reverses (with the param direction
            // turning through the same singular point)
            const double dn = tn[2 * d + 1];
            if (prev_dn * dn < 0) {
                double sa = 0.0, sb = ds;
                Eigen::VectorXd ua = uu;
                for (int bi = 0; bi < 40 && (sb - sa) > 1e-12; ++bi) {
                    const double sm = 0.5 * (sa + sb);
                    Eigen::VectorXd um = uu + sm * t;
                    if (!walker.correct(um, t, uu, sm)) break;
                    const Eigen::VectorXd tm = walker.tangent(um, &t);
                    if (tm[2 * d + 1] * prev_dn > 0) {
                        sa = sm;
                        ua = um;
                    } else {
                        sb = sm;
                    }
                }
                BifurcationPoint cusp;
                cusp.kind = BifKind::Cusp;
                cusp.param = ua[2 * d];
                cusp.param2 = ua[2 * d + 1];
                cusp.state = ua.head(d);
                cusp.residual = std::abs(dn);
                curve.events.push_back(cusp);
            }
            prev_dn = dn;
            uu = uk;
            t = tn;
            push_leg(leg, uu);
            ds = std::min(ds * 1.3, opts.ds_max);
            const double n = uu[2 * d + 1], p = uu[2 * d];
            if (n <= opts.n_min) {
                curve.hit_n_floor = true;
                break;
            }
            if (n > opts.n_max || std::abs(p) > opts.p_pad ||
                uu.head(d).lpNorm<Eigen::Infinity>() > opts.state_box)
                break;
        }
    }
    // assemble monotone-in-arclength polyline: reversed(-leg), start, +leg
    for (std::size_t k = legs[1].points.size(); k-- > 0;) {
        curve.points.push_back(legs[1].points[k]);
        curve.states.push_back(legs[1].states[k]);
        curve.admissible.push_back(legs[1].admissible[k]);
    }
    curve.points.push_back({u[2 * d], u[2 * d + 1]});
    curve.states.push_back(u.head(d));
    {
        NetworkConfig nc = net;
        param.apply(nc, u[2 * d]);
        pn.apply(nc, u[2 * d + 1]);
        curve.admissible.push_back(admissible_state(v, u.head(d), nc));
    }
    for (std::size_t k = 0; k < legs[0].points.size(); ++k) {
        curve.points.push_back(legs[0].points[k]);
        curve.states.push_back(legs[0].states[k]);
        curve.admissible.push_back(legs[0].admissible[k]);
    }
    return curve;
}

Codim2Curve continue_hopf_codim2(ModelVariant v, const NetworkConfig& net, const Param& pa,
                                 const Param& pb, const BifurcationPoint& hopf,
                                 const Codim2Options& opts) {
    const int d = static_cast<int>(hopf.state.size());

    // u = [x (d), qr (d), qi (d), omega, pa, pb]
    // R = [rhs (d); J qr + omega qi (d); J qi - omega qr (d); c.qr - 1; c.qi]
    // with c a fixed reference vector freezing the eigenvector phase/scale.
    Eigen::VectorXd cref;

    const auto R = [&, d](const Eigen::VectorXd& u) {
        NetworkConfig nc = net;
        pa.apply(nc, u[3 * d + 1]);
        pb.apply(nc, u[3 * d + 2]);
        const Eigen::VectorXd x = u.head(d);
        const Eigen::VectorXd qr = u.segment(d, d);
        const Eigen::VectorXd qi = u.segment(2 * d, d);
        const double om = u[3 * d];
        const Eigen::MatrixXd J = fd_jacobian_hi(
            [&](const Eigen::VectorXd& q) { return rhs_flat(v, q, nc); }, x);
        Eigen::VectorXd r(3 * d + 2);
        r.head(d) = rhs_flat(v, x, nc);
        r.segment(d, d) = J * qr + om * qi;
        r.segment(2 * d, d) = J * qi - om * qr;
        r[3 * d] = cref.dot(qr) - 1.0;
        r[3 * d + 1] = cref.dot(qi);
        return r;
    };
    Walker walker{R, opts.newton_tol};

    // initial eigenpair
    NetworkConfig nc0 = net;
    pa.apply(nc0, hopf.param);
    pb.apply(nc0, hopf.param2 > 0 ? hopf.param2 : pb.get(net));
    const Eigen::MatrixXd J0 = fd_jacobian_hi(
        [&](const Eigen::VectorXd& q) { return rhs_flat(v, q, nc0); }, hopf.state);
    Eigen::EigenSolver<Eigen::MatrixXd> es(J0);
    Eigen::Index kh = 0;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < d; ++k) {
        const auto ev = es.eigenvalues()[k];
        if (ev.imag() > 1e-6 && std::abs(ev.real()) < best) {
            best = std::abs(ev.real());
            kh = k;
        }
    }
    Eigen::VectorXcd q = es.eigenvectors().col(kh);
    cref = q.real().normalized();
    const std::complex<double> scale = cref.transpose().cast<std::complex<double>>() * q;
    q /= scale;  // c.qr = 1, c.qi = 0

    Eigen::VectorXd u(3 * d + 3);
    u.head(d) = hopf.state;
    u.segment(d, d) = q.real();
    u.segment(2 * d, d) = q.imag();
    u[3 * d] = es.eigenvalues()[kh].imag();
    u[3 * d + 1] = hopf.param;
    u[3 * d + 2] = pb.get(nc0);

    // square refine at fixed pb
    for (int it = 0; it < 25; ++it) {
        Eigen::VectorXd r = R(u);
        if (r.lpNorm<Eigen::Infinity>() < opts.newton_tol) break;
        const Eigen::MatrixXd A = walker.jac(u).leftCols(3 * d + 2);
        u.head(3 * d + 2) += A.partialPivLu().solve(-r);
    }

    Codim2Curve curve;
    curve.kind = BifKind::Hopf;

    struct Leg {
        std::vector<std::array<double, 2>> points;
        std::vector<Eigen::VectorXd> states;
        std::vector<bool> admissible;
    };
    Leg legs[2];
    const auto push_leg = [&](Leg& leg, const Eigen::VectorXd& uu) {
        leg.points.push_back({uu[3 * d + 1], uu[3 * d + 2]});
        leg.states.push_back(uu.head(d));
        NetworkConfig nc = net;
        pa.apply(nc, uu[3 * d + 1]);
        pb.apply(nc, uu[3 * d + 2]);
        leg.admissible.push_back(admissible_state(v, uu.head(d), nc));
    };

    for (const int dir : {+1, -1}) {
        Leg& leg = legs[dir > 0 ? 0 : 1];
        Eigen::VectorXd uu = u;
        Eigen::VectorXd t = walker.tangent(uu, nullptr);
        if (t[3 * d + 2] * dir < 0) t = -t;
        double ds = opts.ds0;
        bool bt_flagged = false;
        for (int step = 0; step < opts.max_steps; ++step) {
            Eigen::VectorXd uk = uu + ds * t;
            if (!walker.correct(uk, t, uu, ds)) {
                ds *= 0.5;
                if (ds < opts.ds_min) break;
                continue;
            }
            const Eigen::VectorXd tn = walker.tangent(uk, &t);
            uu = uk;
            t = tn;
            push_leg(leg, uu);
            const double om = std::abs(uu[3 * d]);
            if (!bt_flagged && om < opts.bt_omega_threshold) {
                BifurcationPoint bt;
                bt.kind = BifKind::BogdanovTakensCandidate;
                bt.param = uu[3 * d + 1];
                bt.param2 = uu[3 * d + 2];
                bt.state = uu.head(d);
                bt.omega = om;
                curve.events.push_back(bt);
                bt_flagged = true;
            }
            ds = std::min(ds * 1.3, opts.ds_max);
            const double pbv = uu[3 * d + 2], pav = uu[3 * d + 1];
            const bool pb_is_n = pb.target == Param::Target::SizeN;
            if (pb_is_n && pbv <= opts.n_min) {
                curve.hit_n_floor = true;
                break;
            }
            if ((pb_is_n && pbv > opts.n_max) || std::abs(pav) > opts.p_pad ||
                (!pb_is_n && std::abs(pbv) > opts.p_pad) ||
                uu.head(d).lpNorm<Eigen::Infinity>() > opts.state_box || om < 1e-5)
                break;
        }
    }
    for (std::size_t k = legs[1].points.size(); k-- > 0;) {
        curve.points.push_back(legs[1].points[k]);
        curve.states.push_back(legs[1].states[k]);
        curve.admissible.push_back(legs[1].admissible[k]);
    }
    {
        NetworkConfig nc = net;
        pa.apply(nc, u[3 * d + 1]);
        pb.apply(nc, u[3 * d + 2]);
        curve.points.push_back({u[3 * d + 1], u[3 * d + 2]});
        curve.states.push_back(u.head(d));
        curve.admissible.push_back(admissible_state(v, u.head(d), nc));
    }
    for (std::size_t k = 0; k < legs[0].points.size(); ++k) {
        curve.points.push_back(legs[0].points[k]);
        curve.states.push_back(legs[0].states[k]);
        curve.admissible.push_back(legs[0].admissible[k]);
    }
    return curve;
}

}  // namespace mf
