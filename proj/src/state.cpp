#include "momentfield/state.hpp"

#include "momentfield/errors.hpp"

namespace mf {

std::string variant_name(ModelVariant v) {
    switch (v) {
        case ModelVariant::WilsonCowan: return "wc";
        case ModelVariant::InfiniteSize: return "infinite";
        case ModelVariant::BCC: return "bcc";
        case ModelVariant::BressloffRescaled: return "bressloff";
        case ModelVariant::RodriguezTuckwell: return "rodriguez-tuckwell";
    }
    return "?";
}

ModelVariant variant_from_name(const std::string& name) {
    if (name == "wc" || name == "wilson-cowan") return ModelVariant::WilsonCowan;
    if (name == "infinite" || name == "infinite-size") return ModelVariant::InfiniteSize;
    if (name == "bcc") return ModelVariant::BCC;
    if (name == "bressloff" || name == "bressloff-rescaled") return ModelVariant::BressloffRescaled;
    if (name == "rodriguez-tuckwell" || name == "rt") return ModelVariant::RodriguezTuckwell;
    throw ConfigError("unknown model variant '" + name + "'");
}

Eigen::MatrixXd MomentState::corr_matrix() const {
    const int m = M();
    Eigen::MatrixXd c(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) c(i, j) = c(j, i) = corr[packed_index(m, i, j)];
    return c;
}

void MomentState::set_corr_matrix(const Eigen::MatrixXd& c) {
    const int m = M();
    corr.resize(packed_size(m));
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) corr[packed_index(m, i, j)] = 0.5 * (c(i, j) + c(j, i));
}

Eigen::VectorXd MomentState::flatten() const {
    Eigen::VectorXd x(dim());
    x.head(nu.size()) = nu;
    if (corr.size()) x.tail(corr.size()) = corr;
    return x;
}

MomentState MomentState::unflatten(ModelVariant v, int M, const Eigen::VectorXd& x) {
    MomentState s;
    const int p = has_corr_block(v) ? packed_size(M) : 0;
    if (x.size() != M + p) throw ConfigError("flat state has wrong dimension for variant");
    s.nu = x.head(M);
    s.corr = x.tail(p);
    return s;
}

MomentState MomentState::zero(ModelVariant v, int M) {
    MomentState s;
    s.nu = Eigen::VectorXd::Zero(M);
    s.corr = Eigen::VectorXd::Zero(has_corr_block(v) ? packed_size(M) : 0);
    return s;
}

}  // namespace mf
