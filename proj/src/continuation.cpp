#include "momentfield/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "momentfield/errors.hpp"
#include "momentfield/fd.hpp"

namespace mf {

void Param::apply(NetworkConfig& net, double value) const {
    switch (target) {
        case Target::Input: net.inputs[i] = value; return;
        case Target::SizeN:
            net.sizes.resize(0);
            net.n = value;
            return;
        case Target::Alpha: net.alpha[i] = value; return;
        case Target::Weight: net.w(i, j) = value; return;
        case Target::HomotopyP:
            for (auto& f : net.activation) f.set_homotopy_p(value);
            return;
    }
}

double Param::get(const NetworkConfig& net) const {
    switch (target) {
        case Target::Input: return net.inputs[i];
        case Target::SizeN: return net.discrete() ? 1.0 / net.sizes[0] : net.n;
        case Target::Alpha: return net.alpha[i];
        case Target::Weight: return net.w(i, j);
        case Target::HomotopyP: return net.activation.front().homotopy_p();
    }
    return 0.0;
}

std::string Param::name() const {
    switch (target) {
        case Target::Input: return "I" + std::to_string(i + 1);
        case Target::SizeN: return "n";
        case Target::Alpha: return "alpha" + std::to_string(i + 1);
        case Target::Weight: return "w" + std::to_string(i + 1) + std::to_string(j + 1);
        case Target::HomotopyP: return "p";
    }
    return "?";
}

std::string bif_kind_name(BifKind k) {
    switch (k) {
        case BifKind::SaddleNode: return "saddle-node";
        case BifKind::Hopf: return "hopf";
        case BifKind::FoldOfCycles: return "fold-of-cycles";
        case BifKind::NeimarkSacker: return "neimark-sacker";
        case BifKind::PeriodDoubling: return "period-doubling";
        case BifKind::Cusp: return "cusp";
        case BifKind::BogdanovTakensCandidate: return "bogdanov-takens-candidate";
        case BifKind::HomoclinicSuspect: return "homoclinic-suspect";
    }
    return "?";
}

namespace {

struct Point {
    Eigen::VectorXd u;  // (x, p)
    Eigen::VectorXcd ev;
};

struct System {
    ModelVariant v;
    const NetworkConfig* base;
    const Param* param;

    Eigen::VectorXd F(const Eigen::VectorXd& u) const {
        NetworkConfig net = *base;
        param->apply(net, u[u.size() - 1]);
        return rhs_flat(v, u.head(u.size() - 1), net);
    }
    Eigen::MatrixXd Jx(const Eigen::VectorXd& u) const {
        NetworkConfig net = *base;
        param->apply(net, u[u.size() - 1]);
        return fd_jacobian_hi(
            [&](const Eigen::VectorXd& x) { return rhs_flat(v, x, net); }, u.head(u.size() - 1));
    }
    Eigen::VectorXd Fp(const Eigen::VectorXd& u) const {
        const double p = u[u.size() - 1];
        const double h = 1e-6 * std::max(1.0, std::abs(p));
        Eigen::VectorXd up = u, um = u;
        up[u.size() - 1] = p + h;
        um[u.size() - 1] = p - h;
        return (F(up) - F(um)) / (2 * h);
    }
    // extended Jacobian rows [Jx | Fp]
    Eigen::MatrixXd ext(const Eigen::VectorXd& u) const {
        const Eigen::Index d = u.size() - 1;
        Eigen::MatrixXd A(d, d + 1);
        A.leftCols(d) = Jx(u);
        A.col(d) = Fp(u);
        return A;
    }
    Eigen::VectorXcd eig(const Eigen::VectorXd& u) const {
        return Eigen::EigenSolver<Eigen::MatrixXd>(Jx(u)).eigenvalues();
    }
};

// Newton corrector for [F(u); t.(u - uref) - ds] = 0.
bool correct(const System& sys, Eigen::VectorXd& u, const Eigen::VectorXd& t,
             const Eigen::VectorXd& uref, double ds, double tol, int max_iters, int* iters) {
    const Eigen::Index d = u.size() - 1;
    for (int it = 0; it < max_iters; ++it) {
        Eigen::VectorXd F = sys.F(u);
        const double extra = t.dot(u - uref) - ds;
        double rn = std::max(F.lpNorm<Eigen::Infinity>(), std::abs(extra));
        if (rn < tol) {
            if (iters) *iters = it;
            return true;
        }
        if (!F.allFinite()) return false;
        Eigen::MatrixXd A(d + 1, d + 1);
        A.topRows(d) = sys.ext(u);
        A.row(d) = t.transpose();
        Eigen::VectorXd r(d + 1);
        r.head(d) = F;
        r[d] = extra;
        const Eigen::VectorXd du = A.partialPivLu().solve(-r);
        if (!du.allFinite()) return false;
        u += du;
    }
    return false;
}

Eigen::VectorXd tangent(const System& sys, const Eigen::VectorXd& u,
                        const Eigen::VectorXd* prev) {
    const Eigen::Index d = u.size() - 1;
    const Eigen::MatrixXd A = sys.ext(u);
    // null vector via full-pivot LU kernel (robust for our small dimensions)
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    lu.setThreshold(1e-10);
    Eigen::MatrixXd K = lu.kernel();
    Eigen::VectorXd t;
    if (K.cols() >= 1) {
        t = K.col(0);
    } else {
        t = Eigen::VectorXd::Zero(d + 1);
        t[d] = 1.0;
    }
    t.normalize();
    if (prev && t.dot(*prev) < 0) t = -t;
    return t;
}

int complex_unstable_count(const Eigen::VectorXcd& ev, double min_omega) {
    int c = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev[i].imag() > min_omega && ev[i].real() > 0) ++c;
    return c;
}

int real_positive_count(const Eigen::VectorXcd& ev, double min_omega) {
    int c = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (std::abs(ev[i].imag()) <= min_omega && ev[i].real() > 0) ++c;
    return c;
}

// test values at a point for refinement
double hopf_test_value(const Eigen::VectorXcd& ev, double min_omega, double* omega) {
    double best = std::numeric_limits<double>::infinity();
    double re = std::numeric_limits<double>::quiet_NaN();
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev[i].imag() > min_omega && std::abs(ev[i].real()) < best) {
            best = std::abs(ev[i].real());
            re = ev[i].real();
            if (omega) *omega = ev[i].imag();
        }
    return re;
}

double fold_test_value(const Eigen::VectorXcd& ev, double min_omega) {
    double best = std::numeric_limits<double>::infinity();
    double re = std::numeric_limits<double>::quiet_NaN();
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (std::abs(ev[i].imag()) <= min_omega && std::abs(ev[i].real()) < best) {
            best = std::abs(ev[i].real());
            re = ev[i].real();
        }
    return re;
}

}  // namespace

SweepResult sweep_equilibria(ModelVariant v, const NetworkConfig& net, const Param& param,
                             double p_min, double p_max, const SweepOptions& opts, int workers) {
    if (!(p_max > p_min)) throw ConfigError("sweep: empty parameter range");
    System sys{v, &net, &param};
    SweepResult result;

    // seeds across the path
    std::vector<Eigen::VectorXd> seeds;  // (x, p)
    for (int k = 0; k < opts.seed_points; ++k) {
        const double p = opts.seed_points == 1
                             ? 0.5 * (p_min + p_max)
                             : p_min + (p_max - p_min) * k / (opts.seed_points - 1);
        NetworkConfig nc = net;
        param.apply(nc, p);
        for (const auto& fp : find_fixed_points(v, nc, opts.fp_search, workers)) {
            Eigen::VectorXd u(fp.state.size() + 1);
            u << fp.state, p;
            seeds.push_back(u);
        }
    }

    std::vector<Eigen::VectorXd> covered;  // accepted points of all branches
    const auto already_covered = [&](const Eigen::VectorXd& u) {
        for (const auto& c : covered)
            if (std::abs(c[c.size() - 1] - u[u.size() - 1]) < 2e-3 &&
                (c.head(c.size() - 1) - u.head(u.size() - 1)).lpNorm<Eigen::Infinity>() < 2e-3)
                return true;
        return false;
    };

    const double min_om = opts.hopf_min_omega;

    for (const auto& seed : seeds) {
        if (already_covered(seed)) continue;
        for (const int dir : {+1, -1}) {
            EquilibriumBranch branch;
            Eigen::VectorXd u = seed;
            Eigen::VectorXd t = tangent(sys, u, nullptr);
            if (t[t.size() - 1] * dir < 0) t = -t;
            double ds = opts.ds0;
            Point prev{u, sys.eig(u)};
            branch.params.push_back(u[u.size() - 1]);
            branch.states.push_back(u.head(u.size() - 1));
            branch.eigenvalues.push_back(prev.ev);

            for (int step = 0; step < opts.max_steps; ++step) {
                Eigen::VectorXd uk = u + ds * t;
                int iters = 0;
                if (!correct(sys, uk, t, u, ds, opts.newton_tol, 12, &iters)) {
                    ds *= 0.5;
                    if (ds < opts.ds_min) break;
                    continue;
                }
                const Eigen::VectorXcd ev = sys.eig(uk);
                const Point cur{uk, ev};

                // detections between prev and cur
                const int hA = complex_unstable_count(prev.ev, min_om);
                const int hB = complex_unstable_count(ev, min_om);
                if (hA != hB) {
                    // refine by arclength bisection with the corrector
                    Eigen::VectorXd ua = u;
                    double sa = 0.0, sb = ds;
                    Eigen::VectorXcd eva = prev.ev;
                    for (int bi = 0; bi < 50 && (sb - sa) > 1e-12; ++bi) {
                        const double sm = 0.5 * (sa + sb);
                        Eigen::VectorXd um = u + sm * t;
                        if (!correct(sys, um, t, u, sm, opts.newton_tol, 12, nullptr)) break;
                        const Eigen::VectorXcd evm = sys.eig(um);
                        if (complex_unstable_count(evm, min_om) == hA) {
                            sa = sm;
                            ua = um;
                            eva = evm;
                        } else {
                            sb = sm;
                        }
                        if (std::abs(ua[ua.size() - 1] - u[u.size() - 1]) <
                                opts.detect_param_tol &&
                            bi > 8)
                            break;
                    }
                    double omega = 0.0;
                    const double re = hopf_test_value(sys.eig(ua), min_om, &omega);
                    // certify: the tracked pair really crosses between the bracket ends
                    double om_b = 0.0;
                    const double re_prev = hopf_test_value(prev.ev, min_om, &om_b);
                    const double re_cur = hopf_test_value(ev, min_om, &om_b);
                    if (std::isfinite(re) && std::isfinite(re_prev) && std::isfinite(re_cur) &&
                        re_prev * re_cur <= 0 && omega > min_om) {
                        BifurcationPoint bp;
                        bp.kind = BifKind::Hopf;
                        bp.param = ua[ua.size() - 1];
                        bp.state = ua.head(ua.size() - 1);
                        bp.residual = std::abs(re);
                        bp.omega = omega;
                        result.detections.push_back(bp);
                    }
                }
                const int fA = real_positive_count(prev.ev, min_om);
                const int fB = real_positive_count(ev, min_om);
                if (fA != fB && hA == hB) {
                    Eigen::VectorXd ua = u;
                    double sa = 0.0, sb = ds;
                    for (int bi = 0; bi < 50 && (sb - sa) > 1e-12; ++bi) {
                        const double sm = 0.5 * (sa + sb);
                        Eigen::VectorXd um = u + sm * t;
                        if (!correct(sys, um, t, u, sm, opts.newton_tol, 12, nullptr)) break;
                        if (real_positive_count(sys.eig(um), min_om) == fA) {
                            sa = sm;
                            ua = um;
                        } else {
                            sb = sm;
                        }
                    }
                    const double re = fold_test_value(sys.eig(ua), min_om);
                    // fold geometry: parameter turning across the bracket
                    const double dp1 = ua[ua.size() - 1] - u[u.size() - 1];
                    const double dp2 = uk[uk.size() - 1] - ua[ua.size() - 1];
                    BifurcationPoint bp;
                    bp.kind = BifKind::SaddleNode;
                    bp.param = ua[ua.size() - 1];
                    bp.state = ua.head(ua.size() - 1);
                    bp.residual = std::abs(re);
                    bp.low_confidence = !(dp1 * dp2 < 0) || !(std::abs(re) < 1e-5);
                    result.detections.push_back(bp);
                }

                u = uk;
                prev = cur;
                branch.params.push_back(u[u.size() - 1]);
                branch.states.push_back(u.head(u.size() - 1));
                branch.eigenvalues.push_back(ev);
                covered.push_back(u);

                if (iters <= opts.newton_shrink)
                    ds = std::min(ds * 1.4, opts.ds_max);
                else if (iters >= opts.newton_grow)
                    ds = std::max(ds * 0.5, opts.ds_min);

                const double p = u[u.size() - 1];
                if (p < p_min - opts.param_pad || p > p_max + opts.param_pad ||
                    u.head(u.size() - 1).lpNorm<Eigen::Infinity>() > opts.state_box) {
                    branch.truncated = true;
                    break;
                }
                // closed loop
                if (step > 20 && (u - seed).lpNorm<Eigen::Infinity>() < 1e-4) break;
            }
            if (branch.params.size() > 1) result.branches.push_back(std::move(branch));
        }
    }

    // dedup detections by (kind, param, state)
    std::vector<BifurcationPoint> uniq;
    for (const auto& bp : result.detections) {
        bool dup = false;
        for (const auto& q : uniq)
            if (q.kind == bp.kind && std::abs(q.param - bp.param) < 1e-3 &&
                (q.state - bp.state).lpNorm<Eigen::Infinity>() < 5e-3) {
                dup = true;
                break;
            }
        if (!dup) uniq.push_back(bp);
    }
    std::sort(uniq.begin(), uniq.end(),
              [](const BifurcationPoint& a, const BifurcationPoint& b) {
                  return a.param < b.param;
              });
    result.detections = std::move(uniq);
    return result;
}

std::string BifurcationAtlas::to_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\"param\":\"" << param_name << "\",\"range\":[" << p_min << "," << p_max << "],";
    os << "\"points\":[";
    for (std::size_t k = 0; k < points.size(); ++k) {
        const auto& p = points[k];
        os << (k ? "," : "") << "{\"kind\":\"" << bif_kind_name(p.kind)
           << "\",\"param\":" << p.param << ",\"param2\":" << p.param2 << ",\"state\":[";
        for (Eigen::Index i = 0; i < p.state.size(); ++i) os << (i ? "," : "") << p.state[i];
        os << "],\"residual\":" << p.residual << ",\"omega\":" << p.omega
           << ",\"low_confidence\":" << (p.low_confidence ? "true" : "false") << "}";
    }
    os << "],\"branches\":" << branches.size() << ",\"curves\":[";
    for (std::size_t c = 0; c < curves.size(); ++c) {
        os << (c ? "," : "") << "{\"kind\":\"" << curves[c].kind << "\",\"points\":[";
        for (std::size_t k = 0; k < curves[c].polyline.size(); ++k)
            os << (k ? "," : "") << "[" << curves[c].polyline[k][0] << ","
               << curves[c].polyline[k][1] << "]";
        os << "]}";
    }
    os << "]}";
    return os.str();
}

void BifurcationAtlas::write_branch_csv(const std::string& dir) const {
    for (std::size_t b = 0; b < branches.size(); ++b) {
        std::ofstream out(dir + "/branch_" + std::to_string(b) + ".dat");
        out.precision(17);
        out << "# " << param_name << " state...\n";
        for (std::size_t k = 0; k < branches[b].params.size(); ++k) {
            out << branches[b].params[k];
            for (Eigen::Index i = 0; i < branches[b].states[k].size(); ++i)
                out << " " << branches[b].states[k][i];
            out << "\n";
        }
    }
    for (std::size_t c = 0; c < curves.size(); ++c) {
        std::ofstream out(dir + "/curve_" + std::to_string(c) + "_" + curves[c].kind + ".dat");
        out.precision(17);
        for (const auto& pt : curves[c].polyline) out << pt[0] << " " << pt[1] << "\n";
    }
}

}  // namespace mf
