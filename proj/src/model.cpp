#include "momentfield/model.hpp"

#include <cmath>

#include "momentfield/errors.hpp"

namespace mf {

Eigen::VectorXd total_current(const Eigen::VectorXd& nu, const NetworkConfig& net) {
    if (nu.size() != net.M) throw ConfigError("total_current: nu has wrong length");
    return net.w * nu + net.inputs;
}

namespace {

struct Evaluated {
    Eigen::VectorXd s, f, f1, f2;  // current, f(s), f'(s), f''(s)
};

Evaluated evaluate_currents(const Eigen::VectorXd& nu, const NetworkConfig& net) {
    Evaluated e;
    e.s = total_current(nu, net);
    const int M = net.M;
    e.f.resize(M);
    e.f1.resize(M);
    e.f2.resize(M);
    for (int i = 0; i < M; ++i) {
        e.f[i] = net.f(i).deriv(0, e.s[i]);
        e.f1[i] = net.f(i).deriv(1, e.s[i]);
        e.f2[i] = net.f(i).deriv(2, e.s[i]);
    }
    return e;
}

// nu-block shared by every second-order variant:
// dnu_i = -alpha_i nu_i + f_i(s_i) + 1/2 f_i''(s_i) sum_{k,l} w_ik w_il corr_kl
Eigen::VectorXd nu_block(const MomentState& st, const NetworkConfig& net, const Evaluated& e) {
    const int M = net.M;
    Eigen::VectorXd d(M);
    const Eigen::MatrixXd C = st.corr_matrix();
    for (int i = 0; i < M; ++i) {
        const Eigen::VectorXd wi = net.w.row(i).transpose();
        d[i] = -net.alpha[i] * st.nu[i] + e.f[i] + 0.5 * e.f2[i] * wi.dot(C * wi);
    }
    return d;
}

// relaxation + linearized coupling common to all corr equations:
// -(alpha_i + alpha_j) X_ij + sum_k [ f_i'(s_i) w_ik X_kj + f_j'(s_j) w_jk X_ki ]
Eigen::MatrixXd corr_homogeneous(const Eigen::MatrixXd& C, const NetworkConfig& net,
                                 const Evaluated& e) {
    const int M = net.M;
    Eigen::MatrixXd d(M, M);
    const Eigen::MatrixXd FW = e.f1.asDiagonal() * net.w;
    const Eigen::MatrixXd lin = FW * C + C * FW.transpose();
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j)
            d(i, j) = -(net.alpha[i] + net.alpha[j]) * C(i, j) + lin(i, j);
    return d;
}

void check_state(const MomentState& st, ModelVariant v, const NetworkConfig& net) {
    if (st.nu.size() != net.M) throw ConfigError("state nu has wrong length");
    const int want = has_corr_block(v) ? packed_size(net.M) : 0;
    if (st.corr.size() != want) throw ConfigError("state corr block has wrong length for variant");
    if (!st.nu.allFinite() || !st.corr.allFinite()) throw EvalError("NaN/Inf in state");
    if (net.discrete())
        for (int i = 0; i < net.M; ++i)
            if (net.sizes[i] < 0) throw EvalError("negative population size");
}

}  // namespace

MomentState rhs(ModelVariant v, const MomentState& st, const NetworkConfig& net) {
    check_state(st, v, net);
    const int M = net.M;
    const Evaluated e = evaluate_currents(st.nu, net);

    MomentState d;
    if (v == ModelVariant::WilsonCowan) {
        d.nu.resize(M);
        for (int i = 0; i < M; ++i) d.nu[i] = -net.alpha[i] * st.nu[i] + e.f[i];
        d.corr.resize(0);
        return d;
    }

    d.nu = nu_block(st, net, e);
    const Eigen::MatrixXd C = st.corr_matrix();
    Eigen::MatrixXd dC = corr_homogeneous(C, net, e);

    switch (v) {
        case ModelVariant::InfiniteSize:
            // no source; never reads sizes
            break;
        case ModelVariant::BressloffRescaled:
            // + (1/N_i) [alpha_i nu_i + f_i(s_i)] delta_ij
            for (int i = 0; i < M; ++i)
                dC(i, i) += net.inv_size(i) * (net.alpha[i] * st.nu[i] + e.f[i]);
            break;
        case ModelVariant::BCC:
            // + (1/N_j) f_i'(s_i) w_ij nu_j + (1/N_i) f_j'(s_j) w_ji nu_i
            for (int i = 0; i < M; ++i)
                for (int j = 0; j < M; ++j)
                    dC(i, j) += net.inv_size(j) * e.f1[i] * net.w(i, j) * st.nu[j] +
                                net.inv_size(i) * e.f1[j] * net.w(j, i) * st.nu[i];
            break;
        case ModelVariant::RodriguezTuckwell: {
            // + delta_ij kappa_i^2 [alpha_i nu_i + f_i(s_i)
            //                       + 1/2 f_i''(s_i) sum_{k,l} w_ik w_il corr_kl]
            // with kappa_i = N_i^(-noise_exponent), matching the Langevin diffusion.
            for (int i = 0; i < M; ++i) {
                const double kappa =
                    std::isfinite(net.noise_exponent)
                        ? std::pow(net.inv_size(i), net.noise_exponent)
                        : 0.0;
                const Eigen::VectorXd wi = net.w.row(i).transpose();
                dC(i, i) += kappa * kappa *
                            (net.alpha[i] * st.nu[i] + e.f[i] + 0.5 * e.f2[i] * wi.dot(C * wi));
            }
            break;
        }
        default:
            break;
    }

    d.set_corr_matrix(dC);
    return d;
}

Eigen::VectorXd rhs_flat(ModelVariant v, const Eigen::VectorXd& x, const NetworkConfig& net) {
    return rhs(v, MomentState::unflatten(v, net.M, x), net).flatten();
}

Eigen::MatrixXd wc_jacobian(const Eigen::VectorXd& nu, const NetworkConfig& net) {
    if (nu.size() != net.M) throw ConfigError("wc_jacobian: nu has wrong length");
    const Eigen::VectorXd s = total_current(nu, net);
    Eigen::MatrixXd A = net.w;
    for (int i = 0; i < net.M; ++i) A.row(i) *= net.f(i).deriv(1, s[i]);
    A.diagonal() -= net.alpha;
    return A;
}

}  // namespace mf
