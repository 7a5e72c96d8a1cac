#include "momentfield/fixed_points.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <sstream>

#include "momentfield/fd.hpp"
#include "momentfield/parallel.hpp"

namespace mf {

std::string fp_class_name(FpClass c) {
    switch (c) {
        case FpClass::StableNodeFocus: return "stable";
        case FpClass::Saddle: return "saddle";
        case FpClass::Unstable: return "unstable";
        case FpClass::CenterCandidate: return "center-candidate";
    }
    return "?";
}

bool newton_fixed_point(ModelVariant v, const NetworkConfig& net, Eigen::VectorXd& x,
                        int max_iters, double tol) {
    const auto F = [&](const Eigen::VectorXd& q) { return rhs_flat(v, q, net); };
    Eigen::VectorXd r = F(x);
    double rn = r.lpNorm<Eigen::Infinity>();
    for (int it = 0; it < max_iters; ++it) {
        if (rn < tol) return true;
        if (!r.allFinite() || rn > 1e12) return false;
        const Eigen::MatrixXd J = fd_jacobian(F, x);
        const Eigen::VectorXd dx = J.partialPivLu().solve(-r);
        if (!dx.allFinite()) return false;
        // Armijo backtracking on ||F||
        double lambda = 1.0;
        for (int bt = 0; bt < 12; ++bt) {
            Eigen::VectorXd xn = x + lambda * dx;
            Eigen::VectorXd rn2 = F(xn);
            if (rn2.allFinite() && rn2.lpNorm<Eigen::Infinity>() < (1.0 - 1e-4 * lambda) * rn) {
                x = xn;
                r = rn2;
                rn = r.lpNorm<Eigen::Infinity>();
                break;
            }
            lambda *= 0.5;
            if (bt == 11) {  // no decrease in any damped direction
                x = x + lambda * dx;
                r = F(x);
                rn = r.lpNorm<Eigen::Infinity>();
            }
        }
    }
    return rn < tol;
}

Eigen::MatrixXd jacobian(ModelVariant v, const Eigen::VectorXd& state, const NetworkConfig& net) {
    return fd_jacobian([&](const Eigen::VectorXd& q) { return rhs_flat(v, q, net); }, state);
}

FpClass classify(const Eigen::VectorXcd& ev, double band) {
    bool any_pos = false, any_neg = false, any_zero = false;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        const double re = ev[i].real();
        if (re > band)
            any_pos = true;
        else if (re < -band)
            any_neg = true;
        else
            any_zero = true;
    }
    if (any_zero) return FpClass::CenterCandidate;
    if (any_pos && any_neg) return FpClass::Saddle;
    if (any_pos) return FpClass::Unstable;
    return FpClass::StableNodeFocus;
}

bool admissible_state(ModelVariant v, const Eigen::VectorXd& state, const NetworkConfig& net) {
    const int M = net.M;
    for (int i = 0; i < M; ++i)
        if (state[i] < 0.0 || state[i] > 1.0) return false;
    if (!has_corr_block(v)) return true;
    MomentState s = MomentState::unflatten(v, M, state);
    Eigen::MatrixXd C = s.corr_matrix();
    // BCC stores cumulants; the covariance it represents is c + diag(nu_i / N_i)
    if (v == ModelVariant::BCC)
        for (int i = 0; i < M; ++i) C(i, i) += s.nu[i] * net.inv_size(i);
    const Eigen::VectorXd evs = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(C).eigenvalues();
    return evs.minCoeff() >= -1e-8;
}

FixedPoint make_fixed_point(ModelVariant v, const NetworkConfig& net, const Eigen::VectorXd& x) {
    FixedPoint fp;
    fp.variant = v;
    fp.state = x;
    fp.residual = rhs_flat(v, x, net).lpNorm<Eigen::Infinity>();
    fp.eigenvalues = Eigen::EigenSolver<Eigen::MatrixXd>(jacobian(v, x, net)).eigenvalues();
    fp.cls = classify(fp.eigenvalues);
    fp.admissible = admissible_state(v, x, net);
    return fp;
}

std::vector<FixedPoint> find_fixed_points(ModelVariant v, const NetworkConfig& net,
                                          const FixedPointSearch& opts, int workers) {
    const int M = net.M;
    const int p = has_corr_block(v) ? packed_size(M) : 0;

    // seed grid: nu on a lattice, corr on {-box, 0, +box}^p (coarse)
    std::vector<Eigen::VectorXd> seeds;
    std::vector<int> idx(M, 0);
    const int cg = p ? opts.corr_grid : 1;
    const long corr_combos = p ? static_cast<long>(std::pow(cg, p)) : 1;
    for (;;) {
        Eigen::VectorXd nu(M);
        for (int i = 0; i < M; ++i)
            nu[i] = opts.nu_min + (opts.nu_max - opts.nu_min) * idx[i] / (opts.nu_grid - 1);
        for (long cc = 0; cc < corr_combos; ++cc) {
            Eigen::VectorXd x(M + p);
            x.head(M) = nu;
            long rem = cc;
            for (int k = 0; k < p; ++k) {
                const int digit = rem % cg;
                rem /= cg;
                x[M + k] = opts.corr_box * (digit - (cg - 1) / 2) * 2.0 / std::max(1, cg - 1);
            }
            seeds.push_back(x);
        }
        int d = 0;
        while (d < M && ++idx[d] == opts.nu_grid) idx[d++] = 0;
        if (d == M) break;
    }

    std::vector<Eigen::VectorXd> roots;
    std::mutex mtx;
    parallel_chunks(static_cast<long>(seeds.size()), 16, workers, [&](long s, long e) {
        std::vector<Eigen::VectorXd> local;
        for (long k = s; k < e; ++k) {
            Eigen::VectorXd x = seeds[k];
            if (newton_fixed_point(v, net, x, opts.max_newton_iters, opts.tol))
                local.push_back(x);
        }
        std::lock_guard<std::mutex> lk(mtx);
        for (auto& x : local) roots.push_back(std::move(x));
    });

    // dedup: pairwise distance > dedup_tol
    std::vector<Eigen::VectorXd> uniq;
    for (const auto& x : roots) {
        bool dup = false;
        for (const auto& u : uniq)
            if ((x - u).lpNorm<Eigen::Infinity>() <= opts.dedup_tol) {
                dup = true;
                break;
            }
        if (!dup) uniq.push_back(x);
    }
    std::sort(uniq.begin(), uniq.end(), [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        for (Eigen::Index i = 0; i < a.size(); ++i)
            if (a[i] != b[i]) return a[i] < b[i];
        return false;
    });

    std::vector<FixedPoint> out;
    out.reserve(uniq.size());
    for (const auto& x : uniq) out.push_back(make_fixed_point(v, net, x));
    return out;
}

std::string FixedPoint::to_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\"state\":[";
    for (Eigen::Index i = 0; i < state.size(); ++i) os << (i ? "," : "") << state[i];
    os << "],\"eigenvalues\":[";
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i)
        os << (i ? "," : "") << "[" << eigenvalues[i].real() << "," << eigenvalues[i].imag()
           << "]";
    os << "],\"class\":\"" << fp_class_name(cls) << "\",\"admissible\":"
       << (admissible ? "true" : "false") << ",\"residual\":" << residual << "}";
    return os.str();
}

}  // namespace mf
